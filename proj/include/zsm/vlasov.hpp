#pragma once

#include <cstdint>
#include <vector>

#include "zsm/constants.hpp"
#include "zsm/fft.hpp"
#include "zsm/grid.hpp"

namespace zsm {

// 1D Vlasov-Poisson mean-field evolution by particle samples: leapfrog with
// cloud-in-cell deposit, spectral solve of d2 Phi / dx2 = 4 pi M rho with the
// mean (k = 0) mode removed -- on a periodic box only density fluctuations
// about the uniform background gravitate, and that convention is what makes
// the periodic problem well-posed.
struct VlasovConfig {
    double mass = 1.0;     // per-sample mass M
    double dt = 1e-2;
    double T = 5.0;
    bool interacting = true;
    int record_every = 10;
};

struct VlasovResult {
    std::vector<double> times;
    std::vector<std::vector<double>> positions; // [time][sample]
    std::vector<std::vector<double>> momenta;
    std::vector<double> kinetic, potential, total;
    // phase-space moments per recorded time
    std::vector<double> mean_x, var_x, mean_p;
};

VlasovResult vlasov_poisson_evolve(const Grid& g, std::vector<double> x0, std::vector<double> p0,
                                   const VlasovConfig& cfg, const Constants& c);

// Deterministic stratified phase-space samples of a separable f0:
// positions from quantiles of rho0(x), momenta p(x) cold (single-valued).
std::vector<double> cold_stream_positions(const Grid& g, const dvec& rho0, int K);

} // namespace zsm
