#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zsm/constants.hpp"
#include "zsm/fft.hpp"
#include "zsm/grid.hpp"

namespace zsm {

// One-body external terms plus an optional pairwise interaction kernel.
// 1/r-type kernels use the softened 3D form 1/sqrt(r^2 + eps^2) in any
// dimension unless an experiment explicitly selects the 1D Green's function.
struct ExternalTerm {
    enum class Kind { Linear, Harmonic, Sampled };
    Kind kind = Kind::Linear;
    double slope = 0.0;        // Linear: slope * x
    double omega = 1.0;        // Harmonic: 0.5 * m * omega^2 (x-center)^2
    double center = 0.0;
    std::function<double(const std::vector<double>&)> sampled; // Sampled
    int particle = -1;         // -1: applies to every particle
};

struct PairKernel {
    enum class Kind { None, Gravity, Coulomb, Sampled };
    Kind kind = Kind::None;
    double eps = 0.0;                       // softening; must be > 0 for 1/r kernels
    std::vector<double> charges;            // Coulomb
    std::function<double(double)> sampled;  // custom radial kernel

    // Interaction energy of one ordered pair (i, j) at separation r.
    double eval(double r, const Constants& c, int i, int j) const;
};

struct PotentialSpec {
    std::vector<ExternalTerm> external_terms;
    PairKernel pair;
    double coupling_scale = 1.0; // 1 or 1/N weak-coupling factor
    // Rest energies sum to a constant and only rotate the global phase;
    // off by default, switchable for phase-tracking demonstrations.
    bool include_rest_energy = false;

    void validate(int n_particles) const;

    // External potential for particle `i` at position x (space dims of x).
    double external_at(const std::vector<double>& x, int i, const Constants& c) const;

    // Sample the total potential on a FullGrid tensor lattice: axis a of the
    // grid is particle a (1D particles). Pair separations use the minimum
    // image on the grid.
    dvec sample_full(const Grid& g, const Constants& c) const;

    // Sample the one-body external potential for particle i on its own grid.
    dvec sample_one_body(const Grid& g, int i, const Constants& c) const;
};

// (1/2) sum_{j != k} kernel(|q_j - q_k|), times coupling_scale.
double pairwise_energy(const std::vector<std::vector<double>>& positions, const PairKernel& kernel,
                       const Constants& c, double coupling_scale = 1.0);

} // namespace zsm
