#include "zsm/evolve.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zsm {

SplitStepper::SplitStepper(const Grid& g, std::vector<double> masses, double hbar)
    : grid_(g), fft_(g), masses_(std::move(masses)), hbar_(hbar) {
    if (static_cast<int>(masses_.size()) != g.dims())
        throw std::invalid_argument("split step: one mass per grid axis required");
    k2m_.resize(g.size());
    std::vector<std::size_t> strides(g.dims());
    {
        std::size_t s = 1;
        for (int a = g.dims() - 1; a >= 0; --a) {
            strides[a] = s;
            s *= g.points(a);
        }
    }
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        double acc = 0.0;
        std::size_t rem = flat;
        for (int a = 0; a < g.dims(); ++a) {
            const std::size_t i = rem / strides[a];
            rem %= strides[a];
            const double k = g.wavenumbers(a)[i];
            acc += k * k / masses_[a];
        }
        k2m_[flat] = acc;
    }
}

void SplitStepper::check_dt(double dt, const dvec& v_grid) const {
    if (!(dt > 0.0))
        throw std::invalid_argument("split step: dt must be > 0");
    double vmax = 0.0;
    for (double v : v_grid)
        vmax = std::max(vmax, std::abs(v));
    const double phase = vmax * dt / hbar_;
    if (phase > M_PI) {
        std::ostringstream os;
        os << "split step: dt " << dt << " advances potential phase by " << phase
           << " rad per step at max|V| = " << vmax << "; bound is pi (dt <= "
           << M_PI * hbar_ / vmax << ")";
        throw std::invalid_argument(os.str());
    }
}

void SplitStepper::step(cvec& psi, const dvec& v_grid, double dt) const {
    const double half = 0.5 * dt / hbar_;
    kernels::apply_phase(psi, v_grid, half);
    fft_.forward(psi);
    kernels::apply_kspace_phase(psi, k2m_, 0.5 * hbar_ * dt);
    fft_.backward(psi);
    kernels::apply_phase(psi, v_grid, half);
}

void SplitStepper::step_ktv(cvec& psi, const std::function<const dvec&(const cvec&)>& refresh,
                            double dt) const {
    fft_.forward(psi);
    kernels::apply_kspace_phase(psi, k2m_, 0.25 * hbar_ * dt);
    fft_.backward(psi);
    const dvec& v = refresh(psi);
    kernels::apply_phase(psi, v, dt / hbar_);
    fft_.forward(psi);
    kernels::apply_kspace_phase(psi, k2m_, 0.25 * hbar_ * dt);
    fft_.backward(psi);
}

void SplitStepper::step_imag(cvec& psi, const dvec& v_grid, double dtau) const {
    const double half = 0.5 * dtau / hbar_;
    kernels::apply_decay(psi, v_grid, half);
    fft_.forward(psi);
    dvec kin(k2m_.size());
    for (std::size_t i = 0; i < kin.size(); ++i)
        kin[i] = 0.5 * hbar_ * k2m_[i];
    kernels::apply_decay(psi, kin, dtau);
    fft_.backward(psi);
    kernels::apply_decay(psi, v_grid, half);
    normalize_field(grid_, psi);
}

void SplitStepper::step_absorbing(cvec& psi, const dvec& v_grid, const dvec& absorber,
                                  double dt) const {
    step(psi, v_grid, dt);
    kernels::apply_decay(psi, absorber, dt / hbar_);
}

dvec absorbing_strip(const Grid& g, double width, double strength) {
    dvec w(g.size(), 0.0);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto idx = g.unindex(flat);
        double s = 0.0;
        for (int a = 0; a < g.dims(); ++a) {
            const double x = g.coord(a, idx[a]);
            const double edge = 0.5 * g.extent(a);
            const double d = edge - std::abs(x);
            if (d < width) {
                const double t = 1.0 - d / width;
                s = std::max(s, strength * t * t);
            }
        }
        w[flat] = s;
    }
    return w;
}

double SplitStepper::kinetic_energy(const cvec& psi) const {
    cvec hat = psi;
    fft_.forward(hat);
    dvec w(hat.size());
    for (std::size_t i = 0; i < hat.size(); ++i)
        w[i] = 0.5 * hbar_ * hbar_ * k2m_[i] * std::norm(hat[i]);
    // Parseval: sum_x |psi|^2 dV = sum_k |psi_hat|^2 dV / size for the
    // unnormalized forward transform.
    return kernels::reduce_sum(w) * grid_.cell_volume() / static_cast<double>(grid_.size());
}

double SplitStepper::energy(const cvec& psi, const dvec& v_grid) const {
    dvec pot(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        pot[i] = v_grid[i] * std::norm(psi[i]);
    return kinetic_energy(psi) + kernels::reduce_sum(pot) * grid_.cell_volume();
}

double SplitStepper::momentum(const cvec& psi, int axis) const {
    cvec dpsi;
    spectral_gradient(fft_, psi, axis, dpsi);
    dvec w(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        w[i] = (std::conj(psi[i]) * cplx(0.0, -hbar_) * dpsi[i]).real();
    return kernels::reduce_sum(w) * grid_.cell_volume();
}

std::vector<double> SplitStepper::mean_position(const cvec& psi) const {
    std::vector<double> mean(grid_.dims(), 0.0);
    for (std::size_t flat = 0; flat < grid_.size(); ++flat) {
        const auto idx = grid_.unindex(flat);
        const double w = std::norm(psi[flat]);
        for (int a = 0; a < grid_.dims(); ++a)
            mean[a] += w * grid_.coord(a, idx[a]);
    }
    const double vol = grid_.cell_volume();
    for (auto& m : mean)
        m *= vol;
    return mean;
}

EvolutionReport SplitStepper::evolve(WaveState& state, const dvec& v_grid, double dt,
                                     long steps) const {
    check_dt(dt, v_grid);
    const auto t0 = std::chrono::steady_clock::now();
    const double norm0 = std::sqrt(kernels::norm_sq(state.psi) * grid_.cell_volume());
    const double e0 = energy(state.psi, v_grid);
    for (long s = 0; s < steps; ++s)
        step(state.psi, v_grid, dt);
    state.time += dt * static_cast<double>(steps);
    EvolutionReport rep;
    rep.steps = steps;
    rep.dt = dt;
    rep.norm_drift =
        std::abs(std::sqrt(kernels::norm_sq(state.psi) * grid_.cell_volume()) - norm0);
    rep.energy_drift = std::abs(energy(state.psi, v_grid) - e0);
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::pair<WaveState, EvolutionReport> split_step(WaveState state, const PotentialSpec& pot,
                                                 const Constants& c, double dt, long steps) {
    if (state.rep != WaveState::Rep::FullGrid)
        throw std::invalid_argument("split step: FullGrid state required");
    std::vector<double> masses(state.grid.dims());
    for (int a = 0; a < state.grid.dims(); ++a)
        masses[a] = c.mass(std::min<int>(a, static_cast<int>(c.masses.size()) - 1));
    SplitStepper stepper(state.grid, masses, c.hbar);
    const dvec v = pot.sample_full(state.grid, c);
    EvolutionReport rep = stepper.evolve(state, v, dt, steps);
    return {std::move(state), rep};
}

GroundStateResult imaginary_time_ground(WaveState state0, const PotentialSpec& pot,
                                        const Constants& c, double tol, double dtau,
                                        long max_steps) {
    if (!(tol > 0.0))
        throw std::invalid_argument("imaginary time: tol must be > 0");
    if (state0.rep != WaveState::Rep::FullGrid)
        throw std::invalid_argument("imaginary time: FullGrid state required");
    std::vector<double> masses(state0.grid.dims());
    for (int a = 0; a < state0.grid.dims(); ++a)
        masses[a] = c.mass(std::min<int>(a, static_cast<int>(c.masses.size()) - 1));
    SplitStepper stepper(state0.grid, masses, c.hbar);
    const dvec v = pot.sample_full(state0.grid, c);
    normalize_field(state0.grid, state0.psi);
    double e_prev = stepper.energy(state0.psi, v);
    for (long it = 1; it <= max_steps; ++it) {
        stepper.step_imag(state0.psi, v, dtau);
        if (it % 10 == 0) {
            const double e = stepper.energy(state0.psi, v);
            if (std::abs(e - e_prev) / 10.0 < tol) {
                GroundStateResult r;
                r.state = std::move(state0);
                r.energy = e;
                r.iterations = it;
                return r;
            }
            e_prev = e;
        }
    }
    throw std::runtime_error("imaginary time: no convergence within step budget");
}

} // namespace zsm
