#pragma once

#include <cstdint>
#include <vector>

#include "zsm/fft.hpp"
#include "zsm/grid.hpp"
#include "zsm/madelung.hpp"
#include "zsm/potential.hpp"
#include "zsm/wavefunction.hpp"

namespace zsm {

// Madelung-level drift data extracted from a time-indexed run of states;
// read-only during sampling.
struct DriftSnapshots {
    Grid grid;
    std::vector<double> times;
    std::vector<std::vector<dvec>> v;       // [snapshot][axis][node]
    std::vector<std::vector<dvec>> u;       // [snapshot][axis][node]
    std::vector<dvec> rho;                  // [snapshot][node]
    std::vector<std::vector<bool>> floored; // [snapshot][node]
    std::vector<cvec> psi;                  // [snapshot][node]; residual diagnostics

    static DriftSnapshots from_states(const std::vector<WaveState>& states, double mass,
                                      double hbar, double floor_rel = 1e-12);
    // Linear interpolation in space and time. axis-wise drift value.
    double drift(int snap_lo, double t, const std::vector<double>& x, int axis, bool forward) const;
    double v_at(int snap_lo, double t, const std::vector<double>& x, int axis) const;
    int locate(double t) const;
};

enum class Direction { Forward, Backward, Mean };

struct TrajectoryEnsemble {
    int n_walkers = 0;
    std::vector<double> times;
    // positions[time][walker][axis]
    std::vector<std::vector<std::vector<double>>> positions;
    Direction direction = Direction::Forward;
    std::uint64_t seed_root = 0;
    long drift_caps_applied = 0;            // near-node cap events
    std::vector<int> truncated_at;          // mean trajectories only; -1 if never
};

struct SampleOptions {
    double dt_sde = 0.0;       // default: snapshot spacing / 4
    bool noise_off = false;
    double drift_cap_factor = 0.5; // cap |b| at factor * dx / dt_sde
};

TrajectoryEnsemble sample_forward(const DriftSnapshots& snaps, int n_walkers, double dt_sde,
                                  std::uint64_t seed, const Constants& c,
                                  SampleOptions opt = {});
TrajectoryEnsemble sample_backward(const DriftSnapshots& snaps, int n_walkers, double dt_sde,
                                   std::uint64_t seed, const Constants& c,
                                   SampleOptions opt = {});

// Integral curves of the current velocity: 4th-order Runge-Kutta with linear
// interpolation in space and time. Trajectories entering a floored cell are
// flagged and truncated.
TrajectoryEnsemble mean_trajectories(const DriftSnapshots& snaps,
                                     const std::vector<std::vector<double>>& initial_points,
                                     double dt);

struct ResidualReport {
    double max_abs = 0.0;
    double l2 = 0.0;
    std::vector<double> per_time_max;
};

// || m (dv/dt + v . grad v) + grad(V + Q) || along each mean path, evaluated
// spectrally at interior snapshot times.
ResidualReport mean_acceleration_residual(const DriftSnapshots& snaps, const dvec& v_ext_grid,
                                          const TrajectoryEnsemble& ens, double mass, double hbar,
                                          double q_scale = 1.0);

// Empirical one-sample Kolmogorov-Smirnov distance between walker positions
// (axis 0) and the grid density at one snapshot.
double ks_distance(const DriftSnapshots& snaps, int snap, const TrajectoryEnsemble& ens);

// Inverse-CDF draw (1D) of n positions from a grid density; uniforms come
// from per-walker counter streams.
std::vector<double> draw_from_density_1d(const Grid& g, const dvec& rho, int n,
                                         std::uint64_t seed, std::uint64_t stream_salt);

} // namespace zsm
