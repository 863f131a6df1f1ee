#pragma once

#include <cstdint>
#include <vector>

#include "zsm/constants.hpp"
#include "zsm/grid.hpp"
#include "zsm/meanfield.hpp"

namespace zsm {

// Equal-weighted superposition of two identical Gaussian packets of width
// sigma at +-L/2, total mass M, probed by a test mass crossing the midline
// perpendicular to the separation axis.
struct CatParams {
    double sigma = 0.5;
    double L = 10.0;   // packet separation; |L| >> sigma required
    double M = 1.0;    // total mass
};

struct ProbeParams {
    double mass = 1.0;
    double speed = 1.0;     // speed along the crossing direction
    double half_window = 50.0; // integrate t in [-T, T]
    int quadrature_points = 4001;
};

enum class CatMode { MeanField, Stochastic, TwoChannel };

struct CatProbeResult {
    CatMode mode;
    // transverse momentum transfer per trial (one entry for meanfield)
    std::vector<double> deflections;
    double mean_deflection = 0.0;
    double std_deflection = 0.0;
    double left_fraction = 0.0;       // two-channel only
    double single_source_impulse = 0.0; // analytic magnitude for one packet
};

// grid: 1D lattice along the separation axis used to sample the cat density
// (and the noise field in stochastic mode).
CatProbeResult cat_probe(const CatParams& cat, const ProbeParams& probe, CatMode mode,
                         const Grid& g, const Constants& c, double eps, int n_trials,
                         std::uint64_t seed, const NoiseKernelSpec* noise = nullptr);

// Closed-form transverse impulse from a single softened point source of mass
// M at distance b, finite window [-T, T].
double single_source_impulse(double G, double probe_mass, double M, double b, double speed,
                             double half_window);

// The cat-state field on the 1D grid (unit norm).
cvec cat_state(const Grid& g, const CatParams& cat);

} // namespace zsm
