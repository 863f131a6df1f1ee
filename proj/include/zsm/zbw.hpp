#pragma once

#include <functional>
#include <vector>

#include "zsm/constants.hpp"
#include "zsm/evolve.hpp"
#include "zsm/grid.hpp"
#include "zsm/wavefunction.hpp"

namespace zsm {

// Timed classical path with momenta and energies along it.
struct ZbwTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> positions;  // [k][axis]
    std::vector<std::vector<double>> velocities; // [k][axis]
    std::vector<double> energies;
    double mass = 1.0;
    double compton_frequency = 0.0; // m c^2 / hbar
};

// Integrate a classical orbit in a central potential with the 4th-order
// Forest-Ruth symplectic scheme.
ZbwTrajectory integrate_orbit(const std::function<std::vector<double>(const std::vector<double>&)>& force,
                              const std::function<double(const std::vector<double>&)>& potential,
                              std::vector<double> x0, std::vector<double> v0, double mass,
                              double t_end, double dt, const Constants& c);

struct PhaseChangeResult {
    double action_integral = 0.0; // contour of (p . dq - E dt)
    double spatial_loop = 0.0;    // contour of p . dq when time held fixed
    double winding = 0.0;         // spatial_loop / h
    bool integer_within = false;  // |winding - nearest| < tol
    double energy_drift = 0.0;    // max |E - E0| along the path
};

// Accumulated phase along the trajectory by trapezoidal quadrature. For a
// closed spatial orbit the fixed-time loop integral of p . dq and its
// winding in units of h are reported. Rejects |v| > 0.1 c.
PhaseChangeResult zbw_phase_change(const ZbwTrajectory& traj, const Constants& c,
                                   double integer_tol = 1e-6);

struct BohrLevel {
    int n = 0;
    double r_m = 0.0;   // orbit radius [m]
    double E_eV = 0.0;  // level energy [eV]
    double v_ms = 0.0;  // orbital speed [m/s]
};

// r_n = (4 pi eps0 hbar^2 / m_e e^2) n^2, E_n = E_1 / n^2 with SI constants.
BohrLevel bohr_spectrum(int n);
std::vector<BohrLevel> bohr_table(int n_max);

// Split-step evolution of the classical nonlinear Schroedinger equation:
// i hbar dpsi/dt = [-hbar^2 lap / 2m + hbar^2 lap|psi| / (2m |psi|) + V] psi.
// The counterterm cancels the quantum kinetic so rho and S obey the
// classical Hamilton-Jacobi pair; near nodes it is clamped at the density
// floor.
class ClassicalNls {
public:
    ClassicalNls(const Grid& g, double mass, double hbar, double floor_rel = 1e-12);
    EvolutionReport evolve(WaveState& psi, const dvec& v_ext, double dt, long steps);
    dvec counterterm(const cvec& psi) const;
    const SplitStepper& stepper() const { return stepper_; }

private:
    Grid grid_;
    double mass_, hbar_, floor_rel_;
    SplitStepper stepper_;
};

// Density-weighted packet width (std dev) of a 1D state.
double packet_width(const Grid& g, const cvec& psi);
double packet_center(const Grid& g, const cvec& psi);

} // namespace zsm
