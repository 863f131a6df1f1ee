#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace zsm {

// Uniform periodic lattice, one entry of points/extent per spatial axis.
// Wavenumbers are stored in FFT order: 0, 1, ..., n/2, -(n/2-1), ..., -1
// times 2*pi/extent.
class Grid {
public:
    Grid() = default;
    Grid(int dims, std::vector<int> points, std::vector<double> extent);

    // Convenience: same resolution and extent on every axis.
    static Grid uniform(int dims, int points, double extent);

    int dims() const { return dims_; }
    int points(int axis) const { return points_[axis]; }
    double extent(int axis) const { return extent_[axis]; }
    double spacing(int axis) const { return extent_[axis] / points_[axis]; }
    const std::vector<double>& wavenumbers(int axis) const { return wavenumbers_[axis]; }

    std::size_t size() const { return size_; }

    // Row-major flat index from per-axis indices (wrapped periodically).
    std::size_t index(const std::vector<int>& idx) const;
    std::vector<int> unindex(std::size_t flat) const;

    // Coordinate of lattice site i on an axis; domain is [-extent/2, extent/2).
    double coord(int axis, int i) const {
        return -0.5 * extent_[axis] + i * spacing(axis);
    }
    double origin(int axis) const { return -0.5 * extent_[axis]; }

    // Periodic wrap of a physical coordinate into the primary domain.
    double wrap(int axis, double x) const;
    // Minimum-image separation between two coordinates on an axis.
    double min_image(int axis, double dx) const;

    double cell_volume() const;
    bool operator==(const Grid& o) const {
        return dims_ == o.dims_ && points_ == o.points_ && extent_ == o.extent_;
    }

private:
    int dims_ = 0;
    std::vector<int> points_;
    std::vector<double> extent_;
    std::vector<std::vector<double>> wavenumbers_;
    std::size_t size_ = 0;
};

Grid make_grid(int dims, int points, double extent);
Grid make_grid(int dims, std::vector<int> points, std::vector<double> extent);

} // namespace zsm
