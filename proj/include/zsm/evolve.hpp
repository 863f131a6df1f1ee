#pragma once

#include <optional>

#include "zsm/constants.hpp"
#include "zsm/fft.hpp"
#include "zsm/kernels.hpp"
#include "zsm/potential.hpp"
#include "zsm/wavefunction.hpp"

namespace zsm {

struct EvolutionReport {
    long steps = 0;
    double dt = 0.0;
    double norm_drift = 0.0;   // |final - initial| L2 norm
    double energy_drift = 0.0; // |final - initial| of <H>
    double wall_time = 0.0;    // seconds
};

// Strang-split spectral evolution on a FullGrid state: axis a of the tensor
// grid carries particle mass masses[a]. The potential is a fixed sampled
// field over the grid.
class SplitStepper {
public:
    SplitStepper(const Grid& g, std::vector<double> masses, double hbar);

    const Grid& grid() const { return grid_; }
    const Fft& fft() const { return fft_; }

    // Rejects dt whose potential phase advance exceeds pi per step.
    void check_dt(double dt, const dvec& v_grid) const;

    // state advances in place by steps * dt under the sampled potential.
    EvolutionReport evolve(WaveState& state, const dvec& v_grid, double dt, long steps) const;

    // One Strang step, no bookkeeping. Used by self-consistent solvers that
    // refresh the potential between steps.
    void step(cvec& psi, const dvec& v_grid, double dt) const;

    // Kinetic-half / potential / kinetic-half step with the potential
    // supplied by a callback after the first half-drift; self-consistent
    // potentials stay second order this way and their momentum kick is an
    // exact zero-sum.
    void step_ktv(cvec& psi, const std::function<const dvec&(const cvec&)>& refresh,
                  double dt) const;

    // Imaginary-time stepping with per-step renormalization.
    void step_imag(cvec& psi, const dvec& v_grid, double dtau) const;

    // Strang step plus an absorbing strip (imaginary potential magnitude).
    void step_absorbing(cvec& psi, const dvec& v_grid, const dvec& absorber, double dt) const;

    double energy(const cvec& psi, const dvec& v_grid) const;   // <H>
    double kinetic_energy(const cvec& psi) const;
    double momentum(const cvec& psi, int axis) const;           // <p_axis>
    std::vector<double> mean_position(const cvec& psi) const;

    const dvec& k_squared_over_mass() const { return k2m_; }

private:
    Grid grid_;
    Fft fft_;
    std::vector<double> masses_;
    double hbar_;
    dvec k2m_; // sum_a k_a^2 / m_a per grid node (flat, row-major)
};

std::pair<WaveState, EvolutionReport> split_step(WaveState state, const PotentialSpec& pot,
                                                 const Constants& c, double dt, long steps);

// Imaginary-potential magnitude for an absorbing strip hugging the box edges
// (smooth ramp over `width` from each boundary); scattering runs add it via
// SplitStepper::step_absorbing, which deliberately breaks unitarity there.
dvec absorbing_strip(const Grid& g, double width, double strength);

struct GroundStateResult {
    WaveState state;
    double energy = 0.0;
    long iterations = 0;
};

// Imaginary-time relaxation until |dE| per step < tol; throws on
// non-convergence within max_steps.
GroundStateResult imaginary_time_ground(WaveState state0, const PotentialSpec& pot,
                                        const Constants& c, double tol, double dtau = 0.01,
                                        long max_steps = 200000);

} // namespace zsm
