#include "zsm/meanfield.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "zsm/kernels.hpp"
#include "zsm/rng.hpp"

namespace zsm {

MeanFieldSolver::MeanFieldSolver(const Grid& g, const Constants& c, MeanFieldSpec spec)
    : grid_(g), c_(c), spec_(std::move(spec)),
      stepper_(g, std::vector<double>(g.dims(), c.mass(0)), c.hbar) {
    if (spec_.eps <= 0.0)
        spec_.eps = 2.0 * g.spacing(0);
    // Kernel transform for the periodic convolution. The raw minimum-image
    // kernel has a slope kink at half-box separation; tapering it to zero
    // over the outer 20% keeps the sampled kernel smooth on the torus so the
    // self-potential stays band-limited (the fields that use it carry no
    // mass at those separations).
    cvec ker(g.size());
    const double half = 0.5 * g.extent(0);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto idx = g.unindex(flat);
        double r2 = spec_.eps * spec_.eps;
        double d_max = 0.0;
        for (int a = 0; a < g.dims(); ++a) {
            const double d = g.min_image(a, g.coord(a, idx[a]) - g.origin(a));
            r2 += d * d;
            d_max = std::max(d_max, std::abs(d));
        }
        double w = 1.0;
        const double t0 = 0.8 * half;
        if (d_max > t0) {
            const double s = std::min(1.0, (d_max - t0) / (half - t0));
            w = 1.0 - s * s * s * (s * (s * 6.0 - 15.0) + 10.0); // smootherstep
        }
        ker[flat] = w / std::sqrt(r2);
    }
    Fft fft(g);
    fft.forward(ker);
    kernel_hat_.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        kernel_hat_[i] = ker[i].real();
    if (!spec_.external.empty() && spec_.external.size() != g.size())
        throw std::invalid_argument("mean field: external potential size mismatch");
}

dvec MeanFieldSolver::self_potential(const dvec& rho) const {
    const double m = c_.mass(0);
    const double lambda = (spec_.kernel == SourceKernel::Gravity)
                              ? -c_.G * m * m * spec_.coupling_n
                              : c_.k_e * spec_.coupling_n; // unit charges
    cvec work(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i)
        work[i] = rho[i];
    Fft fft(grid_);
    fft.forward(work);
    for (std::size_t i = 0; i < grid_.size(); ++i)
        work[i] *= kernel_hat_[i];
    fft.backward(work);
    dvec v(grid_.size());
    const double vol = grid_.cell_volume();
    for (std::size_t i = 0; i < grid_.size(); ++i)
        v[i] = lambda * work[i].real() * vol;
    return v;
}

dvec MeanFieldSolver::potential(const cvec& chi) const {
    dvec rho;
    kernels::density(chi, rho);
    dvec v = self_potential(rho);
    if (!spec_.external.empty())
        kernels::axpy(v, spec_.external, 1.0);
    return v;
}

double MeanFieldSolver::energy(const cvec& chi) const {
    dvec rho;
    kernels::density(chi, rho);
    const dvec v_self = self_potential(rho);
    dvec w(chi.size());
    for (std::size_t i = 0; i < chi.size(); ++i) {
        double ext = spec_.external.empty() ? 0.0 : spec_.external[i];
        w[i] = (0.5 * v_self[i] + ext) * rho[i];
    }
    return stepper_.kinetic_energy(chi) + kernels::reduce_sum(w) * grid_.cell_volume();
}

EvolutionReport MeanFieldSolver::evolve(WaveState& chi, double dt, long steps) {
    const auto t0 = std::chrono::steady_clock::now();
    stepper_.check_dt(dt, potential(chi.psi));
    const double norm0 = std::sqrt(kernels::norm_sq(chi.psi) * grid_.cell_volume());
    const double e0 = energy(chi.psi);
    dvec v_buf;
    auto refresh = [&](const cvec& p) -> const dvec& {
        v_buf = potential(p);
        return v_buf;
    };
    for (long s = 0; s < steps; ++s)
        stepper_.step_ktv(chi.psi, refresh, dt);
    chi.time += dt * static_cast<double>(steps);
    EvolutionReport rep;
    rep.steps = steps;
    rep.dt = dt;
    rep.norm_drift = std::abs(std::sqrt(kernels::norm_sq(chi.psi) * grid_.cell_volume()) - norm0);
    rep.energy_drift = std::abs(energy(chi.psi) - e0);
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

GroundStateResult MeanFieldSolver::ground_state(WaveState chi0, double tol, double dtau,
                                                long max_steps) {
    normalize_field(grid_, chi0.psi);
    double e_prev = energy(chi0.psi);
    for (long it = 1; it <= max_steps; ++it) {
        const dvec v = potential(chi0.psi);
        stepper_.step_imag(chi0.psi, v, dtau);
        if (it % 20 == 0) {
            const double e = energy(chi0.psi);
            if (std::abs(e - e_prev) / 20.0 < tol) {
                GroundStateResult r;
                r.state = std::move(chi0);
                r.energy = e;
                r.iterations = it;
                return r;
            }
            e_prev = e;
        }
    }
    throw std::runtime_error("mean field ground state: no convergence within step budget");
}

namespace {

double gauss_nd(double r2, double width, int dims) {
    const double s2 = width * width;
    double norm = 1.0;
    for (int a = 0; a < dims; ++a)
        norm /= std::sqrt(2.0 * M_PI) * width;
    return norm * std::exp(-r2 / (2.0 * s2));
}

std::size_t nearest_node(const Grid& g, const std::vector<double>& x) {
    std::vector<int> idx(g.dims());
    for (int a = 0; a < g.dims(); ++a)
        idx[a] = static_cast<int>(std::llround((g.wrap(a, x[a]) - g.origin(a)) / g.spacing(a)));
    return g.index(idx);
}

} // namespace

double noise_kernel(const Grid& g, const cvec& chi_a, const cvec& chi_b, double mass,
                    const Constants& c, const NoiseKernelSpec& spec,
                    const std::vector<double>& x_a, const std::vector<double>& x_b, double t_a,
                    double t_b) {
    const std::size_t ia = nearest_node(g, x_a);
    const std::size_t ib = nearest_node(g, x_b);
    double r2 = 0.0;
    for (int a = 0; a < g.dims(); ++a) {
        const double d = g.min_image(a, x_a[a] - x_b[a]);
        r2 += d * d;
    }
    const double mc2 = mass * c.c * c.c;
    const double scale = spec.amplitude * mc2 * mc2;
    const cplx cc = std::conj(chi_a[ia]) * chi_b[ib];
    const double dt = t_a - t_b;
    const double g_s = gauss_nd(r2, spec.sigma_s, g.dims());
    const double g_t = gauss_nd(dt * dt, spec.tau_s, 1);
    return scale * (cc.real() * g_s * g_t - std::norm(chi_a[ia]) * std::norm(chi_b[ib]));
}

dvec noise_covariance_matrix(const Grid& g, const cvec& chi, double mass, const Constants& c,
                             const NoiseKernelSpec& spec) {
    if (spec.sigma_s < g.spacing(0))
        throw std::invalid_argument("noise kernel: sigma_s must be >= grid spacing");
    const std::size_t n = g.size();
    const double mc2 = mass * c.c * c.c;
    const double scale = spec.amplitude * mc2 * mc2;
    const double g_t0 = gauss_nd(0.0, spec.tau_s, 1);
    dvec cov(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx_i = g.unindex(i);
        for (std::size_t j = 0; j <= i; ++j) {
            const auto idx_j = g.unindex(j);
            double r2 = 0.0;
            for (int a = 0; a < g.dims(); ++a) {
                const double d = g.min_image(a, g.coord(a, idx_i[a]) - g.coord(a, idx_j[a]));
                r2 += d * d;
            }
            const cplx cc = std::conj(chi[i]) * chi[j];
            const double v = scale * (cc.real() * gauss_nd(r2, spec.sigma_s, g.dims()) * g_t0 -
                                      std::norm(chi[i]) * std::norm(chi[j]));
            cov[i * n + j] = v;
            cov[j * n + i] = v;
        }
    }
    return cov;
}

NoiseField sample_noise(const Grid& g, const cvec& chi, double mass, const Constants& c,
                        const NoiseKernelSpec& spec, int n_realizations, std::uint64_t seed) {
    const std::size_t n = g.size();
    const dvec cov = noise_covariance_matrix(g, chi, mass, c, spec);
    Eigen::MatrixXd M(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cov[i * n + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    const auto& evals = es.eigenvalues();
    const auto& evecs = es.eigenvectors();
    const double lam_max = std::max(1e-300, evals.maxCoeff());
    const double lam_min = evals.minCoeff();
    // The smeared kernel can carry tiny negative eigenvalues (the
    // anti-correlated term is not a Mercer kernel); below 1e-6 of the top
    // eigenvalue they are clipped to zero, beyond that the kernel is rejected.
    if (lam_min < -1e-6 * lam_max) {
        std::ostringstream os;
        os << "noise kernel is not positive semidefinite: most negative eigenvalue " << lam_min
           << " (largest " << lam_max << ")";
        throw std::runtime_error(os.str());
    }
    NoiseField field;
    field.seed = seed;
    field.realizations.assign(n_realizations, dvec(n, 0.0));
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n_realizations; ++r) {
        CounterRng rng(seed, 0x0F1E2D00ULL + static_cast<std::uint64_t>(r));
        dvec z(n);
        for (std::size_t i = 0; i < n; ++i)
            z[i] = rng.normal();
        auto& xi = field.realizations[r];
        for (std::size_t i = 0; i < n; ++i) {
            const double s = std::sqrt(std::max(0.0, evals(static_cast<Eigen::Index>(i))));
            if (s == 0.0)
                continue;
            const double a = s * z[i];
            for (std::size_t x = 0; x < n; ++x)
                xi[x] += a * evecs(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(i));
        }
    }
    return field;
}

dvec MeanFieldSolver::noise_potential(const cvec& chi, const NoiseKernelSpec& spec,
                                      std::uint64_t seed, int realization_index) const {
    const double mass_scale = c_.mass(0) * spec_.coupling_n;
    NoiseField nf = sample_noise(grid_, chi, mass_scale, c_, spec, 1,
                                 seed + 0x51000000ULL * static_cast<std::uint64_t>(realization_index + 1));
    const dvec& xi = nf.realizations[0];
    // Phi_xi = kernel convolution of xi / (2 c^2); energy of one particle m Phi
    cvec work(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i)
        work[i] = xi[i];
    Fft fft(grid_);
    fft.forward(work);
    for (std::size_t i = 0; i < grid_.size(); ++i)
        work[i] *= kernel_hat_[i];
    fft.backward(work);
    const double m = c_.mass(0);
    const double pref = (spec_.kernel == SourceKernel::Gravity ? -c_.G : c_.k_e) * m *
                        grid_.cell_volume() / (2.0 * c_.c * c_.c);
    dvec v(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i)
        v[i] = pref * work[i].real();
    return v;
}

StochasticReport stochastic_sn_evolve(MeanFieldSolver& solver, WaveState& chi,
                                      const NoiseKernelSpec& spec, double dt, long steps,
                                      std::uint64_t seed) {
    const Grid& g = solver.grid();
    StochasticReport rep;
    const long hold = std::max<long>(1, std::lround(spec.tau_s / dt));
    const auto t0 = std::chrono::steady_clock::now();
    const double norm0 = std::sqrt(kernels::norm_sq(chi.psi) * g.cell_volume());
    dvec v_noise(g.size(), 0.0);
    long since_resample = hold; // force sampling at step 0
    int used = 0;
    dvec v_buf;
    auto refresh = [&](const cvec& p) -> const dvec& {
        v_buf = solver.potential(p);
        kernels::axpy(v_buf, v_noise, 1.0);
        return v_buf;
    };
    for (long s = 0; s < steps; ++s) {
        if (since_resample >= hold) {
            v_noise = solver.noise_potential(chi.psi, spec, seed, used);
            ++used;
            since_resample = 0;
        }
        solver.stepper().step_ktv(chi.psi, refresh, dt);
        ++since_resample;
    }
    chi.time += dt * static_cast<double>(steps);
    rep.evolution.steps = steps;
    rep.evolution.dt = dt;
    rep.evolution.norm_drift =
        std::abs(std::sqrt(kernels::norm_sq(chi.psi) * g.cell_volume()) - norm0);
    rep.evolution.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.realizations_used = used;
    return rep;
}

} // namespace zsm
