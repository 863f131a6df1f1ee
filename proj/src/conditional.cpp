#include "zsm/conditional.hpp"

#include <cmath>
#include <stdexcept>

#include "zsm/kernels.hpp"
#include "zsm/rng.hpp"

namespace zsm {

namespace {

// light velocity field v = (hbar/m) Im(grad psi / psi) interpolated at q
double light_velocity(const Grid& g, const Fft& fft, const cvec& psi, double q, double m,
                      double hbar, cvec& scratch) {
    spectral_gradient(fft, psi, 0, scratch);
    const double f = (g.wrap(0, q) - g.origin(0)) / g.spacing(0);
    const int n = g.points(0);
    const int i0 = static_cast<int>(std::floor(f));
    const double w = f - i0;
    const int ia = ((i0 % n) + n) % n, ib = (ia + 1) % n;
    auto vel_at = [&](int i) {
        const double rho = std::max(std::norm(psi[i]), 1e-300);
        return hbar * (std::conj(psi[i]) * scratch[i]).imag() / (m * rho);
    };
    return (1 - w) * vel_at(ia) + w * vel_at(ib);
}

double osmotic_velocity(const Grid& g, const Fft& fft, const cvec& psi, double q, double m,
                        double hbar, cvec& scratch) {
    spectral_gradient(fft, psi, 0, scratch);
    const double f = (g.wrap(0, q) - g.origin(0)) / g.spacing(0);
    const int n = g.points(0);
    const int i0 = static_cast<int>(std::floor(f));
    const double w = f - i0;
    const int ia = ((i0 % n) + n) % n, ib = (ia + 1) % n;
    auto u_at = [&](int i) {
        const double rho = std::max(std::norm(psi[i]), 1e-300);
        return hbar * (std::conj(psi[i]) * scratch[i]).real() / (m * rho);
    };
    return (1 - w) * u_at(ia) + w * u_at(ib);
}

} // namespace

ConditionalResult conditional_semiclassical(const ConditionalSetup& setup, const Constants& c) {
    const Grid& g = setup.light_grid;
    if (g.dims() != 1)
        throw std::invalid_argument("conditional scheme: light particle lives on a 1D grid");
    ConditionalResult res;
    res.mass_ratio_warning = setup.M_heavy / setup.m_light < 1e3;

    SplitStepper stepper(g, {setup.m_light}, c.hbar);
    const Fft& fft = stepper.fft();
    cvec psi = setup.psi_light0;
    normalize_field(g, psi);

    double Q2 = setup.x0_heavy;
    double V2 = setup.v0_heavy;
    double Q1 = setup.light_q0;
    CounterRng rng(setup.seed, 0xC01D1ULL);

    const int n = g.points(0);
    dvec v_light(n);
    cvec scratch;
    dvec rho(n);

    auto heavy_force = [&](double q2) {
        double f_int = 0.0;
        if (setup.scheme == SemiclassicalScheme::Conditional) {
            f_int = -setup.dv_int_dq2(Q1, q2);
        } else {
            kernels::density(psi, rho);
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += rho[i] * (-setup.dv_int_dq2(g.coord(0, i), q2));
            f_int = acc * g.spacing(0);
        }
        return f_int - setup.du_heavy(q2);
    };

    auto record = [&](double t) {
        res.times.push_back(t);
        res.heavy_q.push_back(Q2);
        res.heavy_v.push_back(V2);
        res.light_q.push_back(Q1);
        auto st = WaveState::full_grid(g, psi, t);
        res.light_history.push_back(std::move(st));
    };
    record(0.0);

    const double dt = setup.dt;
    double f_curr = heavy_force(Q2);
    for (long s = 0; s < setup.steps; ++s) {
        // light wave under the interaction frozen at the heavy position
        for (int i = 0; i < n; ++i)
            v_light[i] = setup.v_int(g.coord(0, i), Q2);
        stepper.step(psi, v_light, dt);

        // light conditional point: mean guidance or Nelson forward step
        if (setup.scheme == SemiclassicalScheme::Conditional) {
            if (setup.stochastic_light) {
                const double b = light_velocity(g, fft, psi, Q1, setup.m_light, c.hbar, scratch) +
                                 osmotic_velocity(g, fft, psi, Q1, setup.m_light, c.hbar, scratch);
                Q1 = g.wrap(0, Q1 + b * dt +
                                   std::sqrt(c.hbar / setup.m_light * dt) * rng.normal());
            } else {
                const double v1 = light_velocity(g, fft, psi, Q1, setup.m_light, c.hbar, scratch);
                const double q_mid = g.wrap(0, Q1 + 0.5 * dt * v1);
                const double v_mid =
                    light_velocity(g, fft, psi, q_mid, setup.m_light, c.hbar, scratch);
                Q1 = g.wrap(0, Q1 + dt * v_mid);
            }
        }

        // heavy classical step (velocity Verlet)
        Q2 += V2 * dt + 0.5 * f_curr / setup.M_heavy * dt * dt;
        const double f_next = heavy_force(Q2);
        V2 += 0.5 * (f_curr + f_next) / setup.M_heavy * dt;
        f_curr = f_next;

        if ((s + 1) % setup.snapshot_every == 0 || s + 1 == setup.steps)
            record(dt * static_cast<double>(s + 1));
    }
    return res;
}

ExactTwoBodyResult exact_two_body(const ConditionalSetup& setup, const Grid& heavy_grid,
                                  double heavy_sigma, const Constants& c) {
    const Grid& gl = setup.light_grid;
    const Grid g2 = make_grid(2, {gl.points(0), heavy_grid.points(0)},
                              {gl.extent(0), heavy_grid.extent(0)});
    SplitStepper stepper(g2, {setup.m_light, setup.M_heavy}, c.hbar);

    // product initial state: given light packet x heavy Gaussian
    cvec phi_h =
        gaussian_packet_1d(heavy_grid, setup.x0_heavy, heavy_sigma, setup.M_heavy * setup.v0_heavy,
                           c.hbar);
    const int n1 = gl.points(0), n2 = heavy_grid.points(0);
    cvec psi(g2.size());
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            psi[static_cast<std::size_t>(i) * n2 + j] = setup.psi_light0[i] * phi_h[j];
    normalize_field(g2, psi);

    dvec v(g2.size());
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const double q1 = gl.coord(0, i);
            const double q2 = heavy_grid.coord(0, j);
            v[static_cast<std::size_t>(i) * n2 + j] = setup.v_int(q1, q2) + setup.u_heavy(q2);
        }

    ExactTwoBodyResult res;
    auto record = [&](double t) {
        res.times.push_back(t);
        dvec red(n1, 0.0);
        double q2_mean = 0.0;
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) {
                const double w = std::norm(psi[static_cast<std::size_t>(i) * n2 + j]);
                red[i] += w * heavy_grid.spacing(0);
                q2_mean += w * heavy_grid.coord(0, j);
            }
        q2_mean *= g2.cell_volume();
        res.heavy_mean_q.push_back(q2_mean);
        res.light_density.push_back(std::move(red));
    };
    record(0.0);
    for (long s = 0; s < setup.steps; ++s) {
        stepper.step(psi, v, setup.dt);
        if ((s + 1) % setup.snapshot_every == 0 || s + 1 == setup.steps)
            record(setup.dt * static_cast<double>(s + 1));
    }
    return res;
}

} // namespace zsm
