#include "zsm/zbw.hpp"

#include <cmath>
#include <stdexcept>

#include "zsm/kernels.hpp"

namespace zsm {

ZbwTrajectory integrate_orbit(const std::function<std::vector<double>(const std::vector<double>&)>& force,
                              const std::function<double(const std::vector<double>&)>& potential,
                              std::vector<double> x0, std::vector<double> v0, double mass,
                              double t_end, double dt, const Constants& c) {
    // Forest-Ruth composition coefficients
    const double theta = 1.0 / (2.0 - std::cbrt(2.0));
    const double w1 = theta, w2 = 1.0 - 2.0 * theta;
    const double ds[4] = {0.5 * w1, 0.5 * (w1 + w2), 0.5 * (w1 + w2), 0.5 * w1};
    const double ks[3] = {w1, w2, w1};

    const int d = static_cast<int>(x0.size());
    const long n_steps = std::max<long>(1, std::lround(t_end / dt));
    const double h = t_end / static_cast<double>(n_steps);

    ZbwTrajectory traj;
    traj.mass = mass;
    traj.compton_frequency = mass * c.c * c.c / c.hbar;
    traj.times.reserve(n_steps + 1);
    traj.positions.reserve(n_steps + 1);
    traj.velocities.reserve(n_steps + 1);
    traj.energies.reserve(n_steps + 1);

    auto energy = [&](const std::vector<double>& x, const std::vector<double>& v) {
        double ke = 0.0;
        for (double vi : v)
            ke += 0.5 * mass * vi * vi;
        return ke + potential(x);
    };

    std::vector<double> x = std::move(x0), v = std::move(v0);
    traj.times.push_back(0.0);
    traj.positions.push_back(x);
    traj.velocities.push_back(v);
    traj.energies.push_back(energy(x, v));

    for (long s = 0; s < n_steps; ++s) {
        for (int stage = 0; stage < 4; ++stage) {
            for (int a = 0; a < d; ++a)
                x[a] += ds[stage] * h * v[a];
            if (stage < 3) {
                const auto f = force(x);
                for (int a = 0; a < d; ++a)
                    v[a] += ks[stage] * h * f[a] / mass;
            }
        }
        traj.times.push_back(h * static_cast<double>(s + 1));
        traj.positions.push_back(x);
        traj.velocities.push_back(v);
        traj.energies.push_back(energy(x, v));
    }
    return traj;
}

PhaseChangeResult zbw_phase_change(const ZbwTrajectory& traj, const Constants& c,
                                   double integer_tol) {
    const double vmax_allowed = 0.1 * c.c;
    for (const auto& v : traj.velocities) {
        double v2 = 0.0;
        for (double vi : v)
            v2 += vi * vi;
        if (std::sqrt(v2) > vmax_allowed)
            throw std::domain_error("zbw phase: non-relativistic precondition |v| < 0.1c violated");
    }
    PhaseChangeResult r;
    const std::size_t n = traj.times.size();
    double action = 0.0, spatial = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double dt = traj.times[k + 1] - traj.times[k];
        double pdq = 0.0;
        for (std::size_t a = 0; a < traj.positions[k].size(); ++a) {
            const double dq = traj.positions[k + 1][a] - traj.positions[k][a];
            const double p_avg =
                0.5 * traj.mass * (traj.velocities[k][a] + traj.velocities[k + 1][a]);
            pdq += p_avg * dq;
        }
        const double e_avg = 0.5 * (traj.energies[k] + traj.energies[k + 1]);
        action += pdq - e_avg * dt;
        spatial += pdq;
    }
    r.action_integral = action;
    r.spatial_loop = spatial;
    const double h_planck = 2.0 * M_PI * c.hbar;
    r.winding = spatial / h_planck;
    r.integer_within = std::abs(r.winding - std::round(r.winding)) < integer_tol;
    double e0 = traj.energies.front(), drift = 0.0;
    for (double e : traj.energies)
        drift = std::max(drift, std::abs(e - e0));
    r.energy_drift = drift / std::max(1.0, std::abs(e0));
    return r;
}

BohrLevel bohr_spectrum(int n) {
    if (n < 1)
        throw std::invalid_argument("bohr spectrum: n must be >= 1");
    BohrLevel lvl;
    lvl.n = n;
    const double hbar = SiConstants::hbar, me = SiConstants::m_e, e = SiConstants::e,
                 eps0 = SiConstants::eps0;
    const double r1 = 4.0 * M_PI * eps0 * hbar * hbar / (me * e * e);
    lvl.r_m = r1 * n * n;
    const double E1 = -e * e / (8.0 * M_PI * eps0 * r1);
    lvl.E_eV = E1 / (n * n) / SiConstants::eV;
    // L = m v r = n hbar
    lvl.v_ms = n * hbar / (me * lvl.r_m);
    return lvl;
}

std::vector<BohrLevel> bohr_table(int n_max) {
    std::vector<BohrLevel> t;
    for (int n = 1; n <= n_max; ++n)
        t.push_back(bohr_spectrum(n));
    return t;
}

ClassicalNls::ClassicalNls(const Grid& g, double mass, double hbar, double floor_rel)
    : grid_(g), mass_(mass), hbar_(hbar), floor_rel_(floor_rel),
      stepper_(g, std::vector<double>(g.dims(), mass), hbar) {}

dvec ClassicalNls::counterterm(const cvec& psi) const {
    // The raw ratio lap|psi| / |psi| is a noise amplifier: kinks or ripples in
    // the low-amplitude shoulder get multiplied by k^2 and fed back as phase
    // kicks until the packet disperses. Two regularizations keep the
    // cancellation clean: the amplitude is band-limited with a sharp
    // 8th-order low-pass before differentiation, and the division is damped
    // through a Tikhonov denominator that plays the role of the density
    // floor (amp_floor ~ sqrt(rho_floor)).
    const std::size_t n = grid_.size();
    const Fft& fft = stepper_.fft();
    dvec amp(n);
    double amp_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        amp[i] = std::abs(psi[i]);
        amp_max = std::max(amp_max, amp[i]);
    }
    cvec ah(n);
    for (std::size_t i = 0; i < n; ++i)
        ah[i] = amp[i];
    fft.forward(ah);
    {
        std::vector<std::size_t> strides(grid_.dims());
        std::size_t s = 1;
        for (int a = grid_.dims() - 1; a >= 0; --a) {
            strides[a] = s;
            s *= grid_.points(a);
        }
        for (std::size_t flat = 0; flat < n; ++flat) {
            std::size_t rem = flat;
            double f = 1.0;
            for (int a = 0; a < grid_.dims(); ++a) {
                const std::size_t i = rem / strides[a];
                rem %= strides[a];
                const double k = std::abs(grid_.wavenumbers(a)[i]);
                const double kc = 0.4 * M_PI / grid_.spacing(a);
                f *= std::exp(-std::pow(k / kc, 8.0));
            }
            ah[flat] *= f;
        }
    }
    fft.backward(ah);
    for (std::size_t i = 0; i < n; ++i)
        amp[i] = ah[i].real();
    dvec lap;
    spectral_laplacian(fft, amp, lap);
    const double eps_a = std::max(std::sqrt(floor_rel_), 3e-4) * amp_max;
    dvec q(n);
    const double pref = hbar_ * hbar_ / (2.0 * mass_);
    for (std::size_t i = 0; i < n; ++i)
        q[i] = pref * lap[i] * amp[i] / (amp[i] * amp[i] + eps_a * eps_a);
    return q;
}

EvolutionReport ClassicalNls::evolve(WaveState& psi, const dvec& v_ext, double dt, long steps) {
    EvolutionReport rep;
    rep.dt = dt;
    rep.steps = steps;
    const double norm0 = std::sqrt(kernels::norm_sq(psi.psi) * grid_.cell_volume());
    dvec v_buf(grid_.size());
    auto refresh = [&](const cvec& p) -> const dvec& {
        const dvec q = counterterm(p);
        for (std::size_t i = 0; i < grid_.size(); ++i)
            v_buf[i] = v_ext[i] + q[i];
        return v_buf;
    };
    for (long s = 0; s < steps; ++s)
        stepper_.step_ktv(psi.psi, refresh, dt);
    psi.time += dt * static_cast<double>(steps);
    rep.norm_drift = std::abs(std::sqrt(kernels::norm_sq(psi.psi) * grid_.cell_volume()) - norm0);
    return rep;
}

double packet_width(const Grid& g, const cvec& psi) {
    double w = 0.0, m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < g.points(0); ++i) {
        const double x = g.coord(0, i);
        const double rho = std::norm(psi[i]);
        w += rho;
        m1 += rho * x;
        m2 += rho * x * x;
    }
    m1 /= w;
    m2 /= w;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

double packet_center(const Grid& g, const cvec& psi) {
    double w = 0.0, m1 = 0.0;
    for (int i = 0; i < g.points(0); ++i) {
        const double x = g.coord(0, i);
        const double rho = std::norm(psi[i]);
        w += rho;
        m1 += rho * x;
    }
    return m1 / w;
}

} // namespace zsm
