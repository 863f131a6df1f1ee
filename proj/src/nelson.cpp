#include "zsm/nelson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "zsm/rng.hpp"

namespace zsm {

namespace {

double interp_space(const Grid& g, const dvec& field, const std::vector<double>& x) {
    if (g.dims() == 1) {
        const double f = (g.wrap(0, x[0]) - g.origin(0)) / g.spacing(0);
        const int n = g.points(0);
        const int i0 = static_cast<int>(std::floor(f));
        const double w = f - i0;
        const int ia = ((i0 % n) + n) % n;
        const int ib = (ia + 1) % n;
        return (1 - w) * field[ia] + w * field[ib];
    }
    // bilinear, dims == 2
    const double fx = (g.wrap(0, x[0]) - g.origin(0)) / g.spacing(0);
    const double fy = (g.wrap(1, x[1]) - g.origin(1)) / g.spacing(1);
    const int nx = g.points(0), ny = g.points(1);
    const int i0 = static_cast<int>(std::floor(fx)), j0 = static_cast<int>(std::floor(fy));
    const double wx = fx - i0, wy = fy - j0;
    const int ia = ((i0 % nx) + nx) % nx, ib = (ia + 1) % nx;
    const int ja = ((j0 % ny) + ny) % ny, jb = (ja + 1) % ny;
    const double v00 = field[static_cast<std::size_t>(ia) * ny + ja];
    const double v01 = field[static_cast<std::size_t>(ia) * ny + jb];
    const double v10 = field[static_cast<std::size_t>(ib) * ny + ja];
    const double v11 = field[static_cast<std::size_t>(ib) * ny + jb];
    return (1 - wx) * ((1 - wy) * v00 + wy * v01) + wx * ((1 - wy) * v10 + wy * v11);
}

bool nearest_floored(const Grid& g, const std::vector<bool>& floored, const std::vector<double>& x) {
    std::vector<int> idx(g.dims());
    for (int a = 0; a < g.dims(); ++a)
        idx[a] = static_cast<int>(std::llround((g.wrap(a, x[a]) - g.origin(a)) / g.spacing(a)));
    return floored[g.index(idx)];
}

} // namespace

DriftSnapshots DriftSnapshots::from_states(const std::vector<WaveState>& states, double mass,
                                           double hbar, double floor_rel) {
    if (states.empty())
        throw std::invalid_argument("drift snapshots: no states");
    DriftSnapshots s;
    s.grid = states[0].grid;
    Fft fft(s.grid);
    for (const auto& st : states) {
        MadelungFields f = madelung_extract(st, fft, mass, hbar, floor_rel);
        s.times.push_back(st.time);
        s.v.push_back(std::move(f.v));
        s.u.push_back(std::move(f.u));
        s.rho.push_back(std::move(f.rho));
        s.floored.push_back(std::move(f.floored));
        s.psi.push_back(st.psi);
    }
    return s;
}

int DriftSnapshots::locate(double t) const {
    const int n = static_cast<int>(times.size());
    if (t <= times.front())
        return 0;
    if (t >= times.back())
        return n - 2;
    int lo = 0;
    while (lo + 1 < n && times[lo + 1] <= t)
        ++lo;
    return std::min(lo, n - 2);
}

double DriftSnapshots::v_at(int snap_lo, double t, const std::vector<double>& x, int axis) const {
    const int k = snap_lo;
    const double t0 = times[k], t1 = times[k + 1];
    const double w = (t1 > t0) ? std::clamp((t - t0) / (t1 - t0), 0.0, 1.0) : 0.0;
    const double a0 = interp_space(grid, v[k][axis], x);
    const double a1 = interp_space(grid, v[k + 1][axis], x);
    return (1 - w) * a0 + w * a1;
}

double DriftSnapshots::drift(int snap_lo, double t, const std::vector<double>& x, int axis,
                             bool forward) const {
    const int k = snap_lo;
    const double t0 = times[k], t1 = times[k + 1];
    const double w = (t1 > t0) ? std::clamp((t - t0) / (t1 - t0), 0.0, 1.0) : 0.0;
    const double sgn = forward ? 1.0 : -1.0;
    const double a0 = interp_space(grid, v[k][axis], x) + sgn * interp_space(grid, u[k][axis], x);
    const double a1 =
        interp_space(grid, v[k + 1][axis], x) + sgn * interp_space(grid, u[k + 1][axis], x);
    return (1 - w) * a0 + w * a1;
}

std::vector<double> draw_from_density_1d(const Grid& g, const dvec& rho, int n,
                                         std::uint64_t seed, std::uint64_t stream_salt) {
    // node density is cell-centered: cell i spans [x_i - dx/2, x_i + dx/2),
    // making the accumulated CDF midpoint-accurate
    const int m = g.points(0);
    const double dx = g.spacing(0);
    dvec cdf(static_cast<std::size_t>(m) + 1, 0.0);
    for (int i = 0; i < m; ++i)
        cdf[i + 1] = cdf[i] + rho[i] * dx;
    const double total = cdf[m];
    std::vector<double> xs(n);
    for (int w = 0; w < n; ++w) {
        const double u = CounterRng::uniform_at(seed, stream_salt * 0x10001ULL + w, 0) * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        int i = static_cast<int>(std::distance(cdf.begin(), it)) - 1;
        i = std::clamp(i, 0, m - 1);
        const double frac =
            (rho[i] > 0.0) ? std::clamp((u - cdf[i]) / (rho[i] * dx), 0.0, 1.0) : 0.5;
        xs[w] = g.coord(0, i) + (frac - 0.5) * dx;
    }
    return xs;
}

namespace {

// rejection draw against the grid density, per-walker deterministic streams
std::vector<std::vector<double>> draw_rejection(const Grid& g, const dvec& rho, int n,
                                                std::uint64_t seed, std::uint64_t salt) {
    double rho_max = 0.0;
    for (double r : rho)
        rho_max = std::max(rho_max, r);
    const int d = g.dims();
    std::vector<std::vector<double>> xs(n, std::vector<double>(d, 0.0));
#pragma omp parallel for schedule(static)
    for (int w = 0; w < n; ++w) {
        CounterRng rng(seed, salt * 0x20002ULL + static_cast<std::uint64_t>(w));
        std::vector<double> p(d);
        std::vector<int> idx(d);
        for (int tries = 0; tries < 100000; ++tries) {
            for (int a = 0; a < d; ++a) {
                p[a] = g.origin(a) + rng.uniform() * g.extent(a);
                idx[a] = static_cast<int>(std::llround((p[a] - g.origin(a)) / g.spacing(a)));
            }
            if (rng.uniform() * rho_max <= rho[g.index(idx)]) {
                xs[w] = p;
                break;
            }
        }
    }
    return xs;
}

TrajectoryEnsemble sample_sde(const DriftSnapshots& snaps, int n_walkers, double dt_sde,
                              std::uint64_t seed, const Constants& c, SampleOptions opt,
                              bool forward) {
    const Grid& g = snaps.grid;
    const int d = g.dims();
    if (d > 2)
        throw std::invalid_argument("sde sampling: 1D and 2D grids supported");
    const double t_first = snaps.times.front(), t_last = snaps.times.back();
    const double span = t_last - t_first;
    if (dt_sde <= 0.0)
        dt_sde = (snaps.times.size() > 1 ? (snaps.times[1] - snaps.times[0]) / 4.0 : span / 4.0);
    if (span > 0.0 && dt_sde > span / std::max<std::size_t>(1, snaps.times.size() - 1) + 1e-15)
        throw std::invalid_argument("sde sampling: dt_sde must not exceed snapshot spacing");
    const long n_steps = std::max<long>(1, std::lround(span / dt_sde));
    const double h = (n_steps > 0) ? span / static_cast<double>(n_steps) : 0.0;
    const double mass = c.mass(0);
    const double noise_std = opt.noise_off ? 0.0 : std::sqrt(c.hbar / mass * h);
    const double cap = opt.drift_cap_factor * g.spacing(0) / h;

    // initial draw from the endpoint density: inverse CDF in 1D, rejection in 2D
    const dvec& rho0 = forward ? snaps.rho.front() : snaps.rho.back();
    std::vector<std::vector<double>> x;
    if (d == 1) {
        auto flat = draw_from_density_1d(g, rho0, n_walkers, seed, forward ? 1 : 2);
        x.resize(n_walkers, std::vector<double>(1, 0.0));
        for (int w = 0; w < n_walkers; ++w)
            x[w][0] = flat[w];
    } else {
        x = draw_rejection(g, rho0, n_walkers, seed, forward ? 1 : 2);
    }

    TrajectoryEnsemble ens;
    ens.n_walkers = n_walkers;
    ens.direction = forward ? Direction::Forward : Direction::Backward;
    ens.seed_root = seed;
    ens.times = snaps.times;

    const int n_snaps = static_cast<int>(snaps.times.size());
    ens.positions.assign(n_snaps,
                         std::vector<std::vector<double>>(n_walkers, std::vector<double>(d, 0.0)));
    const int start_snap = forward ? 0 : n_snaps - 1;
    for (int w = 0; w < n_walkers; ++w)
        ens.positions[start_snap][w] = x[w];

    std::vector<long> caps(n_walkers, 0);
    std::vector<int> errors(n_walkers, 0);

#pragma omp parallel for schedule(static)
    for (int w = 0; w < n_walkers; ++w) {
        CounterRng rng(seed, 0xABCD0000ULL + static_cast<std::uint64_t>(w) * 2 + (forward ? 0 : 1));
        std::vector<double> xw = x[w];
        int next_record = forward ? 1 : n_snaps - 2;
        for (long s = 0; s < n_steps; ++s) {
            const double t = forward ? t_first + s * h : t_last - s * h;
            const int lo = snaps.locate(forward ? t : t - h);
            for (int a = 0; a < d; ++a) {
                double b = snaps.drift(lo, t, xw, a, forward);
                if (std::abs(b) > cap) {
                    b = std::copysign(cap, b);
                    ++caps[w];
                }
                const double dw = noise_std * rng.normal();
                const double step = (forward ? 1.0 : -1.0) * b * h + dw;
                if (std::abs(step) > g.extent(a) + g.spacing(a)) {
                    errors[w] = 1;
                    break;
                }
                xw[a] = g.wrap(a, xw[a] + step);
            }
            if (errors[w])
                break;
            const double t_next = forward ? t + h : t - h;
            if (forward) {
                while (next_record < n_snaps && snaps.times[next_record] <= t_next + 1e-12) {
                    ens.positions[next_record][w] = xw;
                    ++next_record;
                }
            } else {
                while (next_record >= 0 && snaps.times[next_record] >= t_next - 1e-12) {
                    ens.positions[next_record][w] = xw;
                    --next_record;
                }
            }
        }
    }
    for (int w = 0; w < n_walkers; ++w)
        if (errors[w])
            throw std::runtime_error("sde sampling: walker stepped past a full period plus a cell");
    for (long cw : caps)
        ens.drift_caps_applied += cw;
    return ens;
}

} // namespace

TrajectoryEnsemble sample_forward(const DriftSnapshots& snaps, int n_walkers, double dt_sde,
                                  std::uint64_t seed, const Constants& c, SampleOptions opt) {
    return sample_sde(snaps, n_walkers, dt_sde, seed, c, opt, true);
}

TrajectoryEnsemble sample_backward(const DriftSnapshots& snaps, int n_walkers, double dt_sde,
                                   std::uint64_t seed, const Constants& c, SampleOptions opt) {
    return sample_sde(snaps, n_walkers, dt_sde, seed, c, opt, false);
}

TrajectoryEnsemble mean_trajectories(const DriftSnapshots& snaps,
                                     const std::vector<std::vector<double>>& initial_points,
                                     double dt) {
    const Grid& g = snaps.grid;
    const int d = g.dims();
    const int n = static_cast<int>(initial_points.size());
    for (const auto& p : initial_points)
        if (nearest_floored(g, snaps.floored.front(), p))
            throw std::invalid_argument("mean trajectories: initial point in floored cell");

    const double t0 = snaps.times.front(), t1 = snaps.times.back();
    if (dt <= 0.0)
        dt = (snaps.times.size() > 1 ? snaps.times[1] - snaps.times[0] : (t1 - t0)) / 4.0;
    const long n_steps = std::max<long>(1, std::lround((t1 - t0) / dt));
    const double h = (t1 - t0) / static_cast<double>(n_steps);

    TrajectoryEnsemble ens;
    ens.n_walkers = n;
    ens.direction = Direction::Mean;
    ens.truncated_at.assign(n, -1);
    ens.times = snaps.times;
    const int n_snaps = static_cast<int>(snaps.times.size());
    ens.positions.assign(n_snaps, std::vector<std::vector<double>>(n, std::vector<double>(d, 0.0)));
    for (int w = 0; w < n; ++w)
        ens.positions[0][w] = initial_points[w];

#pragma omp parallel for schedule(static)
    for (int w = 0; w < n; ++w) {
        std::vector<double> x = initial_points[w];
        bool alive = true;
        int next_record = 1;
        auto vel = [&](double t, const std::vector<double>& p, std::vector<double>& out) {
            const int lo = snaps.locate(t);
            for (int a = 0; a < d; ++a)
                out[a] = snaps.v_at(lo, t, p, a);
        };
        std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);
        for (long s = 0; s < n_steps; ++s) {
            const double t = t0 + s * h;
            if (alive) {
                vel(t, x, k1);
                for (int a = 0; a < d; ++a)
                    tmp[a] = x[a] + 0.5 * h * k1[a];
                vel(t + 0.5 * h, tmp, k2);
                for (int a = 0; a < d; ++a)
                    tmp[a] = x[a] + 0.5 * h * k2[a];
                vel(t + 0.5 * h, tmp, k3);
                for (int a = 0; a < d; ++a)
                    tmp[a] = x[a] + h * k3[a];
                vel(t + h, tmp, k4);
                for (int a = 0; a < d; ++a)
                    x[a] = g.wrap(a, x[a] + h / 6.0 * (k1[a] + 2 * k2[a] + 2 * k3[a] + k4[a]));
                const int lo = snaps.locate(t + h);
                if (nearest_floored(g, snaps.floored[lo], x)) {
                    alive = false;
                    ens.truncated_at[w] = static_cast<int>(s);
                }
            }
            const double t_next = t0 + (s + 1) * h;
            while (next_record < n_snaps && snaps.times[next_record] <= t_next + 1e-12) {
                ens.positions[next_record][w] = x;
                ++next_record;
            }
        }
        for (; next_record < n_snaps; ++next_record)
            ens.positions[next_record][w] = x;
    }
    return ens;
}

ResidualReport mean_acceleration_residual(const DriftSnapshots& snaps, const dvec& v_ext_grid,
                                          const TrajectoryEnsemble& ens, double mass, double hbar,
                                          double q_scale) {
    const Grid& g = snaps.grid;
    if (g.dims() != 1)
        throw std::invalid_argument("mean acceleration residual: 1D grids supported");
    if (snaps.psi.empty())
        throw std::invalid_argument("mean acceleration residual: snapshots lack wavefunctions");
    Fft fft(g);
    const int n_snaps = static_cast<int>(snaps.times.size());
    const std::size_t n = g.size();

    // grad V spectral once (external potentials are smooth)
    dvec grad_v_ext;
    spectral_gradient(fft, v_ext_grid, 0, grad_v_ext);

    ResidualReport rep;
    double sq_sum = 0.0;
    long count = 0;
    rep.per_time_max.assign(n_snaps, 0.0);
    for (int k = 1; k + 1 < n_snaps; ++k) {
        const double dt2 = snaps.times[k + 1] - snaps.times[k - 1];
        // Pointwise force fields from psi and its first three spectral
        // derivatives; ratios are taken after differentiation so clamped
        // tails stay local instead of polluting a global transform.
        const cvec& psi = snaps.psi[k];
        cvec d1, d2, d3;
        spectral_gradient(fft, psi, 0, d1);
        spectral_gradient(fft, d1, 0, d2);
        spectral_gradient(fft, d2, 0, d3);
        double rho_max = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            rho_max = std::max(rho_max, std::norm(psi[i]));
        const double floor = 1e-12 * rho_max;
        dvec dv_dx(n), grad_q(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double rho = std::max(std::norm(psi[i]), floor);
            const cplx cpsi = std::conj(psi[i]);
            const double A = (cpsi * d2[i]).real() / rho;    // Re(psi''/psi)
            const double B = (cpsi * d1[i]).imag() / rho;    // Im(psi'/psi)
            const double drho = 2.0 * (cpsi * d1[i]).real(); // rho'
            const double dA = ((cpsi * d3[i]).real() + (std::conj(d1[i]) * d2[i]).real()) / rho -
                              A * drho / rho;
            const double dB = (cpsi * d2[i]).imag() / rho - B * drho / rho;
            // Q = -(hbar^2/2m)(A + B^2); v = hbar B / m
            grad_q[i] = -(hbar * hbar / (2.0 * mass)) * (dA + 2.0 * B * dB);
            dv_dx[i] = hbar * dB / mass;
        }

        for (int w = 0; w < ens.n_walkers; ++w) {
            const auto& x = ens.positions[k][w];
            const double dvdt = (interp_space(g, snaps.v[k + 1][0], x) -
                                 interp_space(g, snaps.v[k - 1][0], x)) /
                                dt2;
            const double adv = interp_space(g, snaps.v[k][0], x) * interp_space(g, dv_dx, x);
            const double res = mass * (dvdt + adv) + interp_space(g, grad_v_ext, x) +
                               q_scale * interp_space(g, grad_q, x);
            const double r = std::abs(res);
            rep.per_time_max[k] = std::max(rep.per_time_max[k], r);
            rep.max_abs = std::max(rep.max_abs, r);
            sq_sum += res * res;
            ++count;
        }
    }
    rep.l2 = count > 0 ? std::sqrt(sq_sum / static_cast<double>(count)) : 0.0;
    return rep;
}

double ks_distance(const DriftSnapshots& snaps, int snap, const TrajectoryEnsemble& ens) {
    const Grid& g = snaps.grid;
    const dvec& rho = snaps.rho[snap];
    const int m = g.points(0);
    dvec cdf(static_cast<std::size_t>(m) + 1, 0.0);
    for (int i = 0; i < m; ++i)
        cdf[i + 1] = cdf[i] + rho[i] * g.spacing(0);
    const double total = cdf[m];

    std::vector<double> xs(ens.n_walkers);
    for (int w = 0; w < ens.n_walkers; ++w)
        xs[w] = ens.positions[snap][w][0];
    std::sort(xs.begin(), xs.end());

    // same cell-centered convention as the sampler: cdf[i] is the mass below
    // the left edge x_i - dx/2
    auto model_cdf = [&](double x) {
        const double f = (g.wrap(0, x) - g.origin(0)) / g.spacing(0) + 0.5;
        const int i0 = std::clamp(static_cast<int>(std::floor(f)), 0, m - 1);
        const double w = std::clamp(f - i0, 0.0, 1.0);
        return (cdf[i0] + w * (cdf[i0 + 1] - cdf[i0])) / total;
    };
    double ks = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double fe_lo = static_cast<double>(i) / n;
        const double fe_hi = static_cast<double>(i + 1) / n;
        const double fm = model_cdf(xs[i]);
        ks = std::max(ks, std::max(std::abs(fm - fe_lo), std::abs(fm - fe_hi)));
    }
    return ks;
}

} // namespace zsm
