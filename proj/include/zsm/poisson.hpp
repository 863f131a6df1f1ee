#pragma once

#include <vector>

#include "zsm/constants.hpp"
#include "zsm/fft.hpp"
#include "zsm/grid.hpp"

namespace zsm {

enum class SourceKernel { Gravity, Coulomb };

// Poisson source: weighted points (mean or stochastic trajectories) or a
// density field on the grid.
struct PoissonSource {
    enum class Kind { MeanTrajectory, StochasticTrajectory, Density };
    Kind kind = Kind::MeanTrajectory;
    std::vector<std::vector<double>> positions; // [i][axis]
    std::vector<double> weights;                // masses or charges
    dvec density;                               // Density kind, on the grid
    double total_weight() const;
};

// Softened potential field on the grid. Point sources superpose the
// closed-form kernel -+ coupling w / sqrt(r^2 + eps^2) with minimum-image
// distances; density sources convolve with the same kernel via FFT, so the
// solution inherits the lattice's periodic images.
dvec poisson_solve(const PoissonSource& src, SourceKernel kernel, double eps, const Grid& g,
                   const Constants& c);

// Potential at an arbitrary point (point sources only; used by probes).
double potential_at(const PoissonSource& src, SourceKernel kernel, double eps,
                    const std::vector<double>& x, const Constants& c);

// Direct-sum oracle for the density route (quadrature over grid cells).
dvec poisson_direct_sum(const dvec& density, SourceKernel kernel, double eps, const Grid& g,
                        const Constants& c);

} // namespace zsm
