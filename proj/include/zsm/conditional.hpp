#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "zsm/constants.hpp"
#include "zsm/evolve.hpp"
#include "zsm/grid.hpp"
#include "zsm/wavefunction.hpp"

namespace zsm {

enum class SemiclassicalScheme { Conditional, StandardQm };

// Heavy-light benchmark: a light 1D wave packet coupled to one heavy
// classical degree of freedom through V_int(q1, q2).
struct ConditionalSetup {
    Grid light_grid;
    cvec psi_light0;
    double m_light = 1.0;
    double M_heavy = 1000.0;
    double x0_heavy = 0.0;
    double v0_heavy = 0.0;
    std::function<double(double, double)> v_int;       // V(q1, q2)
    std::function<double(double, double)> dv_int_dq2;  // dV/dq2
    std::function<double(double)> u_heavy = [](double) { return 0.0; };
    std::function<double(double)> du_heavy = [](double) { return 0.0; };
    double dt = 1e-3;
    long steps = 1000;
    int snapshot_every = 10;
    SemiclassicalScheme scheme = SemiclassicalScheme::Conditional;
    // Back-reaction point for the conditional scheme: the light conditional
    // trajectory is integrated either as the mean (guidance) path or as a
    // Nelson stochastic path; both are exposed, mean is the default.
    bool stochastic_light = false;
    std::uint64_t seed = 1;
    double light_q0 = 0.0; // start of the light conditional trajectory
};

struct ConditionalResult {
    std::vector<double> times;
    std::vector<double> heavy_q;
    std::vector<double> heavy_v;
    std::vector<double> light_q; // conditional trajectory (conditional scheme)
    std::vector<WaveState> light_history;
    bool mass_ratio_warning = false;
};

ConditionalResult conditional_semiclassical(const ConditionalSetup& setup, const Constants& c);

// Exact two-body reference on the (q1, q2) tensor grid.
struct ExactTwoBodyResult {
    std::vector<double> times;
    std::vector<double> heavy_mean_q;     // <q2>(t)
    std::vector<dvec> light_density;      // reduced density over q1
};

ExactTwoBodyResult exact_two_body(const ConditionalSetup& setup, const Grid& heavy_grid,
                                  double heavy_sigma, const Constants& c);

} // namespace zsm
