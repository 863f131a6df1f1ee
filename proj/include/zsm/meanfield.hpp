#pragma once

#include <cstdint>
#include <vector>

#include "zsm/constants.hpp"
#include "zsm/evolve.hpp"
#include "zsm/fft.hpp"
#include "zsm/grid.hpp"
#include "zsm/poisson.hpp"
#include "zsm/wavefunction.hpp"

namespace zsm {

// Self-consistent single-field nonlinear evolution: the potential is the
// softened-kernel convolution of the field's own density, refreshed every
// step. Convention: the field is unit-normalized and the particle number is
// folded into the coupling (lambda = G m^2 N for gravity, k_e e^2 N for
// Coulomb); the convention in force is recorded by the caller's config.
struct MeanFieldSpec {
    SourceKernel kernel = SourceKernel::Gravity;
    double eps = 0.0;          // softening; defaults to 2 dx when <= 0
    double coupling_n = 1.0;   // N folded into the coupling
    dvec external;             // optional external potential on the grid
};

// Smeared noise kernel of the stochastic mean-field equations:
// Re{ m^2 c^4 chi*(A) chi(B) g_s(xA - xB) g_t(tA - tB) - m^2 c^4 rho(A) rho(B) }
// with normalized Gaussian smearings g_s (width sigma_s) and g_t (width tau_s).
struct NoiseKernelSpec {
    double sigma_s = 0.1;   // spatial smearing width, >= grid spacing
    double tau_s = 0.01;    // temporal smearing width, >= dt
    double amplitude = 1.0; // multiplies the (m c^2)^2 scale; 1 is physical
};

class MeanFieldSolver {
public:
    MeanFieldSolver(const Grid& g, const Constants& c, MeanFieldSpec spec);

    // Self-interaction potential of the given density (per unit coupling mass).
    dvec self_potential(const dvec& rho) const;
    // Full potential entering the Hamiltonian for field chi.
    dvec potential(const cvec& chi) const;

    // Real-time Strang steps with the potential refreshed every step.
    EvolutionReport evolve(WaveState& chi, double dt, long steps);

    // Imaginary-time relaxation to the self-consistent ground state.
    GroundStateResult ground_state(WaveState chi0, double tol, double dtau = 0.005,
                                   long max_steps = 200000);

    // Potential-energy contribution of one fresh noise realization sampled
    // from the current field: (mass per particle) * kernel-convolution of
    // xi / (2 c^2). realization_index salts the stream.
    dvec noise_potential(const cvec& chi, const NoiseKernelSpec& spec, std::uint64_t seed,
                         int realization_index) const;

    // kinetic + (1/2) self-interaction + external
    double energy(const cvec& chi) const;
    double momentum(const cvec& chi) const { return stepper_.momentum(chi, 0); }
    std::vector<double> mean_position(const cvec& chi) const {
        return stepper_.mean_position(chi);
    }

    const Grid& grid() const { return grid_; }
    const SplitStepper& stepper() const { return stepper_; }

private:
    Grid grid_;
    Constants c_;
    MeanFieldSpec spec_;
    SplitStepper stepper_;
    dvec kernel_hat_; // FFT of the softened kernel, real-even
};

double noise_kernel(const Grid& g, const cvec& chi_a, const cvec& chi_b, double mass,
                    const Constants& c, const NoiseKernelSpec& spec,
                    const std::vector<double>& x_a, const std::vector<double>& x_b, double t_a,
                    double t_b);

struct NoiseField {
    std::vector<dvec> realizations; // [r][node]
    std::uint64_t seed = 0;
};

// Zero-mean Gaussian realizations whose covariance is the equal-time smeared
// kernel, via eigendecomposition of the covariance matrix assembled on the
// grid. Throws if the matrix is not positive semidefinite (most negative
// eigenvalue is reported).
NoiseField sample_noise(const Grid& g, const cvec& chi, double mass, const Constants& c,
                        const NoiseKernelSpec& spec, int n_realizations, std::uint64_t seed);

// Equal-time covariance matrix (dense, row-major n x n).
dvec noise_covariance_matrix(const Grid& g, const cvec& chi, double mass, const Constants& c,
                             const NoiseKernelSpec& spec);

// Stochastic mean-field evolution: Poisson source m rho + xi / (2 c^2), with a
// fresh smeared realization held constant over tau_s.
struct StochasticReport {
    EvolutionReport evolution;
    int realizations_used = 0;
};
StochasticReport stochastic_sn_evolve(MeanFieldSolver& solver, WaveState& chi,
                                      const NoiseKernelSpec& spec, double dt, long steps,
                                      std::uint64_t seed);

} // namespace zsm
