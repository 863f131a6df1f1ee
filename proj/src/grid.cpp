#include "zsm/grid.hpp"

#include <cmath>

namespace zsm {

Grid::Grid(int dims, std::vector<int> points, std::vector<double> extent)
    : dims_(dims), points_(std::move(points)), extent_(std::move(extent)) {
    if (dims_ < 1)
        throw std::invalid_argument("grid: dims must be >= 1");
    if (static_cast<int>(points_.size()) != dims_ || static_cast<int>(extent_.size()) != dims_)
        throw std::invalid_argument("grid: points/extent length must equal dims");
    size_ = 1;
    for (int a = 0; a < dims_; ++a) {
        if (points_[a] < 8 || points_[a] % 2 != 0)
            throw std::invalid_argument("grid: points per axis must be even and >= 8");
        if (!(extent_[a] > 0.0))
            throw std::invalid_argument("grid: extent must be positive");
        size_ *= static_cast<std::size_t>(points_[a]);
    }
    wavenumbers_.resize(dims_);
    for (int a = 0; a < dims_; ++a) {
        const int n = points_[a];
        const double dk = 2.0 * M_PI / extent_[a];
        wavenumbers_[a].resize(n);
        for (int i = 0; i <= n / 2; ++i)
            wavenumbers_[a][i] = dk * i;
        for (int i = n / 2 + 1; i < n; ++i)
            wavenumbers_[a][i] = dk * (i - n);
    }
}

Grid Grid::uniform(int dims, int points, double extent) {
    return Grid(dims, std::vector<int>(dims, points), std::vector<double>(dims, extent));
}

std::size_t Grid::index(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dims_; ++a) {
        int i = idx[a] % points_[a];
        if (i < 0)
            i += points_[a];
        flat = flat * points_[a] + static_cast<std::size_t>(i);
    }
    return flat;
}

std::vector<int> Grid::unindex(std::size_t flat) const {
    std::vector<int> idx(dims_);
    for (int a = dims_ - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % points_[a]);
        flat /= points_[a];
    }
    return idx;
}

double Grid::wrap(int axis, double x) const {
    const double L = extent_[axis];
    const double lo = -0.5 * L;
    double y = std::fmod(x - lo, L);
    if (y < 0)
        y += L;
    return lo + y;
}

double Grid::min_image(int axis, double dx) const {
    const double L = extent_[axis];
    double y = std::fmod(dx, L);
    if (y > 0.5 * L)
        y -= L;
    if (y < -0.5 * L)
        y += L;
    return y;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dims_; ++a)
        v *= spacing(a);
    return v;
}

Grid make_grid(int dims, int points, double extent) {
    return Grid::uniform(dims, points, extent);
}

Grid make_grid(int dims, std::vector<int> points, std::vector<double> extent) {
    return Grid(dims, std::move(points), std::move(extent));
}

} // namespace zsm
