#include "zsm/cm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zsm/kernels.hpp"
#include "zsm/nelson.hpp"
#include "zsm/rng.hpp"

namespace zsm {

CMFrame CMFrame::transform(const std::vector<double>& X) {
    const int N = static_cast<int>(X.size());
    if (N < 2)
        throw std::invalid_argument("cm transform: N >= 2 required");
    CMFrame f;
    f.N = N;
    double s = 0.0;
    for (double x : X)
        s += x;
    f.x_cm = s / N;
    const double rt = std::sqrt(static_cast<double>(N));
    const double a = (rt * f.x_cm + X[0]) / (rt + 1.0);
    f.y.resize(N - 1);
    for (int j = 1; j < N; ++j)
        f.y[j - 1] = X[j] - a;
    return f;
}

std::vector<double> CMFrame::inverse(const CMFrame& f) {
    const int N = f.N;
    const double rt = std::sqrt(static_cast<double>(N));
    double sum_y = 0.0;
    for (double yj : f.y)
        sum_y += yj;
    const double a = f.x_cm - sum_y / (rt * (rt + 1.0));
    std::vector<double> X(N);
    X[0] = (rt + 1.0) * a - rt * f.x_cm;
    for (int j = 1; j < N; ++j)
        X[j] = f.y[j - 1] + a;
    return X;
}

ProductFields::ProductFields(const Grid& g, const std::vector<const cvec*>& factors,
                             double floor_rel)
    : grid_(g) {
    Fft fft(g);
    const std::size_t n = g.size();
    const int P = static_cast<int>(factors.size());
    h_.resize(P);
    hp_.resize(P);
    g_.resize(P);
    gp_.resize(P);
    vraw_.resize(P);
    for (int p = 0; p < P; ++p) {
        const cvec& psi = *factors[p];
        dvec amp(n);
        double amp_max = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            amp[i] = std::abs(psi[i]);
            amp_max = std::max(amp_max, amp[i]);
        }
        const double floor = std::sqrt(floor_rel) * amp_max;
        dvec d1, d2, d3;
        spectral_gradient(fft, amp, 0, d1);
        spectral_gradient(fft, d1, 0, d2);
        spectral_gradient(fft, d2, 0, d3);
        h_[p].resize(n);
        hp_[p].resize(n);
        g_[p].resize(n);
        gp_[p].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double a = std::max(amp[i], floor);
            const double h = d1[i] / a;
            h_[p][i] = h;
            hp_[p][i] = d2[i] / a - h * h;
            g_[p][i] = d2[i] / a;
            gp_[p][i] = d3[i] / a - (d2[i] / a) * h;
        }
        // current velocity v = hbar Im(psi' / psi) / m; store hbar/m-free part
        cvec dpsi;
        spectral_gradient(fft, psi, 0, dpsi);
        vraw_[p].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double rho = std::max(std::norm(psi[i]), floor * floor);
            vraw_[p][i] = (std::conj(psi[i]) * dpsi[i]).imag() / rho;
        }
    }
}

double ProductFields::interp(const dvec& f, double x) const {
    const Grid& g = grid_;
    const double fx = (g.wrap(0, x) - g.origin(0)) / g.spacing(0);
    const int n = g.points(0);
    const int i0 = static_cast<int>(std::floor(fx));
    const double w = fx - i0;
    const int ia = ((i0 % n) + n) % n, ib = (ia + 1) % n;
    return (1 - w) * f[ia] + w * f[ib];
}

double ProductFields::v(int particle, double x, double mass, double hbar) const {
    return hbar / mass * interp(vraw_[particle], x);
}

ForceTriple force_decomposition_product(const ProductFields& fields, const std::vector<double>& X,
                                        const std::vector<double>& masses, double hbar,
                                        const std::function<double(double)>& du_ext) {
    const int N = static_cast<int>(X.size());
    const double m = masses[0];
    const double M = m * N;
    ForceTriple f;
    f.N = N;
    double sum_h = 0.0, sum_hp = 0.0, sum_gp = 0.0, sum_hp_h = 0.0;
    for (int i = 0; i < N; ++i) {
        f.F_U -= du_ext(X[i]);
        const double h = fields.h(i, X[i]);
        const double hp = fields.hp(i, X[i]);
        sum_h += h;
        sum_hp += hp;
        sum_gp += fields.gp(i, X[i]);
        sum_hp_h += hp * h;
    }
    // F_cm = -d Q_cm / d x_cm with
    // Q_cm = -(hbar^2 / 2M) [sum_i g_i + sum_{i != j} h_i h_j];
    // the chain rule d/dx_cm = sum_k d/dx_k gives
    // F_cm = (hbar^2 / 2M) [sum_k g'_k + 2 sum_{k != j} h'_k h_j].
    const double pair = sum_hp * sum_h - sum_hp_h;
    f.F_cm = hbar * hbar / (2.0 * M) * (sum_gp + 2.0 * pair);
    // total quantum force on the CM is (hbar^2 / 2m) sum_k g'_k; the relative
    // share is the remainder.
    const double total_q = hbar * hbar / (2.0 * m) * sum_gp;
    f.F_rel = total_q - f.F_cm;
    return f;
}

ForceTriple force_decomposition_fullgrid(const WaveState& state, const std::vector<double>& X,
                                         const std::vector<double>& masses, double hbar,
                                         const std::function<double(double)>& du_ext) {
    const Grid& g = state.grid;
    const int N = g.dims();
    Fft fft(g);
    const std::size_t n = g.size();
    const double m = masses[0];
    const double M = m * N;

    dvec sqrt_rho(n);
    double amax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sqrt_rho[i] = std::abs(state.psi[i]);
        amax = std::max(amax, sqrt_rho[i]);
    }
    const double floor = 1e-6 * amax;

    // Spectral derivatives act on the smooth amplitude only; every division
    // happens pointwise afterwards so floored tails cannot ring across the
    // grid. With W = sum_i d_i and a = sqrt(rho):
    //   Q_cm  = -(hbar^2/2M) W^2 a / a
    //   F_cm  = -W Q_cm = (hbar^2/2M) [W^3 a / a - (W^2 a)(W a)/a^2]
    // and the same pattern with lap for the total quantum force.
    dvec d1(n, 0.0), d2(n, 0.0), d3(n, 0.0), tmp, tmp2;
    for (int a = 0; a < N; ++a) {
        spectral_gradient(fft, sqrt_rho, a, tmp);
        kernels::axpy(d1, tmp, 1.0);
    }
    for (int a = 0; a < N; ++a) {
        spectral_gradient(fft, d1, a, tmp);
        kernels::axpy(d2, tmp, 1.0);
    }
    for (int a = 0; a < N; ++a) {
        spectral_gradient(fft, d2, a, tmp);
        kernels::axpy(d3, tmp, 1.0);
    }
    dvec lap(n, 0.0), wlap(n, 0.0);
    for (int a = 0; a < N; ++a) {
        spectral_gradient(fft, sqrt_rho, a, tmp);
        spectral_gradient(fft, tmp, a, tmp2);
        kernels::axpy(lap, tmp2, 1.0);
    }
    for (int a = 0; a < N; ++a) {
        spectral_gradient(fft, lap, a, tmp);
        kernels::axpy(wlap, tmp, 1.0);
    }
    dvec f_cm_field(n), f_tot_field(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::max(sqrt_rho[i], floor);
        f_cm_field[i] = hbar * hbar / (2.0 * M) * (d3[i] / a - d2[i] * d1[i] / (a * a));
        f_tot_field[i] = hbar * hbar / (2.0 * m) * (wlap[i] / a - lap[i] * d1[i] / (a * a));
    }

    // multilinear interpolation at the configuration point
    auto interp_nd = [&](const dvec& f) {
        std::vector<int> base(N);
        std::vector<double> w(N);
        for (int a = 0; a < N; ++a) {
            const double fa = (g.wrap(a, X[a]) - g.origin(a)) / g.spacing(a);
            base[a] = static_cast<int>(std::floor(fa));
            w[a] = fa - base[a];
        }
        double acc = 0.0;
        for (int corner = 0; corner < (1 << N); ++corner) {
            double weight = 1.0;
            std::vector<int> idx(N);
            for (int a = 0; a < N; ++a) {
                const bool hi = corner & (1 << a);
                weight *= hi ? w[a] : 1.0 - w[a];
                idx[a] = base[a] + (hi ? 1 : 0);
            }
            acc += weight * f[g.index(idx)];
        }
        return acc;
    };

    ForceTriple f;
    f.N = N;
    for (int i = 0; i < N; ++i)
        f.F_U -= du_ext(X[i]);
    f.F_cm = interp_nd(f_cm_field);
    f.F_rel = interp_nd(f_tot_field) - f.F_cm;
    return f;
}

// ---------------------------------------------------------------- experiment

namespace {

struct PairState {
    std::vector<PacketSpec> packs;
};

// a pair of equal-weight packets with randomized widths, momenta and
// centers; opposite momenta so the packets head toward each other
PairState random_pair(double sigma0, double sep, double k0, double asym, std::uint64_t seed,
                      std::uint64_t salt) {
    auto u = [&](int i) { return 2.0 * CounterRng::uniform_at(seed, salt, i) - 1.0; };
    PairState p;
    PacketSpec l, r;
    l.weight = 1.0;
    r.weight = 1.0;
    l.sigma = sigma0 * (1.0 + 0.5 * asym * u(1));
    r.sigma = sigma0 * (1.0 + 0.5 * asym * u(2));
    l.x0 = -0.5 * sep * (1.0 + 0.3 * asym * u(3));
    r.x0 = 0.5 * sep * (1.0 + 0.3 * asym * u(4));
    l.k0 = k0 * (1.0 + asym * u(5));
    r.k0 = -k0 * (1.0 + asym * u(6));
    p.packs = {l, r};
    return p;
}

// stratified density quantiles (midpoint rule over the CDF)
std::vector<double> density_quantiles(const Grid& g, const dvec& rho, int n) {
    const int m = g.points(0);
    dvec cdf(static_cast<std::size_t>(m) + 1, 0.0);
    for (int i = 0; i < m; ++i)
        cdf[i + 1] = cdf[i] + rho[i] * g.spacing(0);
    const double total = cdf[m];
    std::vector<double> xs(n);
    for (int w = 0; w < n; ++w) {
        const double u = (w + 0.5) / n * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        int i = static_cast<int>(std::distance(cdf.begin(), it)) - 1;
        i = std::clamp(i, 0, m - 1);
        const double frac = (rho[i] > 0.0) ? (u - cdf[i]) / (rho[i] * g.spacing(0)) : 0.5;
        xs[w] = g.coord(0, i) + frac * g.spacing(0);
    }
    return xs;
}

// velocity field of a 1D state (for inline trajectory integration)
void velocity_field(const Fft& fft, const Grid& g, const cvec& psi, double mass, double hbar,
                    dvec& out, cvec& scratch) {
    spectral_gradient(fft, psi, 0, scratch);
    out.resize(g.size());
    double rho_max = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        rho_max = std::max(rho_max, std::norm(psi[i]));
    const double floor = 1e-12 * rho_max;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double rho = std::max(std::norm(psi[i]), floor);
        out[i] = hbar / mass * (std::conj(psi[i]) * scratch[i]).imag() / rho;
    }
}

double interp1(const Grid& g, const dvec& f, double x) {
    const double fx = (g.wrap(0, x) - g.origin(0)) / g.spacing(0);
    const int n = g.points(0);
    const int i0 = static_cast<int>(std::floor(fx));
    const double w = fx - i0;
    const int ia = ((i0 % n) + n) % n, ib = (ia + 1) % n;
    return (1 - w) * f[ia] + w * f[ib];
}

} // namespace

CmExperimentResult cm_experiment(const CmExperimentConfig& cfg, const Constants& c) {
    const Grid g = make_grid(1, cfg.grid_points, cfg.extent);
    const double m = c.mass(0);
    const double hbar = c.hbar;

    // per-particle states: one shared field when identical, else per particle
    const int n_states = cfg.identical ? 1 : cfg.N;
    std::vector<cvec> states(n_states);
    for (int s = 0; s < n_states; ++s) {
        const auto pair = random_pair(cfg.sigma0, cfg.packet_sep, cfg.k0, cfg.asym, cfg.seed,
                                      0xBEEF0000ULL + s);
        states[s] = packet_superposition_1d(g, pair.packs, hbar);
    }

    // initial positions per particle
    std::vector<double> x(cfg.N);
    std::vector<int> owner(cfg.N);
    {
        Fft fft(g);
        for (int i = 0; i < cfg.N; ++i)
            owner[i] = cfg.identical ? 0 : i;
        if (cfg.stratified) {
            if (cfg.identical) {
                dvec rho;
                kernels::density(states[0], rho);
                x = density_quantiles(g, rho, cfg.N);
            } else {
                for (int i = 0; i < cfg.N; ++i) {
                    dvec rho;
                    kernels::density(states[owner[i]], rho);
                    x[i] = density_quantiles(g, rho, 1)[0];
                }
            }
        } else {
            for (int i = 0; i < cfg.N; ++i) {
                dvec rho;
                kernels::density(states[owner[i]], rho);
                x[i] = draw_from_density_1d(g, rho, 1, cfg.seed, 0x5A17ULL + i)[0];
            }
        }
    }

    SplitStepper stepper(g, {m}, hbar);
    const Fft& fft = stepper.fft();
    dvec v_ext(g.size());
    for (int i = 0; i < g.points(0); ++i)
        v_ext[i] = cfg.slope * g.coord(0, i);

    // initial CM position and velocity
    std::vector<dvec> vf_now(n_states), vf_next(n_states);
    cvec scratch;
    for (int s = 0; s < n_states; ++s)
        velocity_field(fft, g, states[s], m, hbar, vf_now[s], scratch);
    double x_cm0 = 0.0, v_cm0 = 0.0;
    for (int i = 0; i < cfg.N; ++i) {
        x_cm0 += x[i];
        v_cm0 += interp1(g, vf_now[owner[i]], x[i]);
    }
    x_cm0 /= cfg.N;
    v_cm0 /= cfg.N;

    const long n_steps = std::max<long>(1, std::lround(cfg.T / cfg.dt));
    const double dt = cfg.T / static_cast<double>(n_steps);

    CmExperimentResult res;
    res.error_definition =
        "error(t) = |x_q(t) - x_cl(t)| / (|x_cl(T) - x_cl(0)| + sigma0)";
    auto x_cl_at = [&](double t) {
        return x_cm0 + v_cm0 * t - 0.5 * cfg.slope / m * t * t;
    };
    const double denom = std::abs(x_cl_at(cfg.T) - x_cl_at(0.0)) + cfg.sigma0;

    auto record = [&](double t) {
        double xq;
        if (cfg.disable_quantum_force) {
            xq = x_cl_at(t);
        } else {
            double s = 0.0;
            for (int i = 0; i < cfg.N; ++i)
                s += x[i];
            xq = s / cfg.N;
        }
        res.times.push_back(t);
        res.x_quantum.push_back(xq);
        res.x_classical.push_back(x_cl_at(t));
        const double err = std::abs(xq - x_cl_at(t)) / denom;
        res.error.push_back(err);
        res.max_error = std::max(res.max_error, err);
    };
    record(0.0);

    const int record_every = static_cast<int>(std::max<long>(1, n_steps / 200));
    for (long s = 0; s < n_steps; ++s) {
        for (int st = 0; st < n_states; ++st) {
            stepper.step(states[st], v_ext, dt);
            velocity_field(fft, g, states[st], m, hbar, vf_next[st], scratch);
        }
        if (!cfg.disable_quantum_force) {
            // Heun step per particle trajectory: the CM of these mean paths
            // obeys M x_cm'' = F_U + F_cm + F_rel for separable states.
            for (int i = 0; i < cfg.N; ++i) {
                const dvec& v0 = vf_now[owner[i]];
                const dvec& v1 = vf_next[owner[i]];
                const double k1 = interp1(g, v0, x[i]);
                const double k2 = interp1(g, v1, g.wrap(0, x[i] + dt * k1));
                x[i] = g.wrap(0, x[i] + 0.5 * dt * (k1 + k2));
            }
        }
        for (int st = 0; st < n_states; ++st)
            vf_now[st].swap(vf_next[st]);
        if ((s + 1) % record_every == 0 || s + 1 == n_steps)
            record(dt * static_cast<double>(s + 1));
    }
    return res;
}

// ------------------------------------------------------------ scaling study

ScalingResult scaling_study(const std::vector<int>& N_list, int n_seeds, std::uint64_t seed,
                            const Constants& c) {
    ScalingResult res;
    res.N_list = N_list;
    const double slope = 8.0; // external linear slope; F_U = -N * slope exactly
    const Grid g = make_grid(1, 512, 64.0);
    const double m = c.mass(0), hbar = c.hbar;

    for (int N : N_list) {
        std::vector<double> fu, fcm, ratio;
        for (int s = 0; s < n_seeds; ++s) {
            const auto pair =
                random_pair(1.0, 5.0, 1.2, 0.35, seed, 0x5001ULL + static_cast<std::uint64_t>(s));
            cvec psi = packet_superposition_1d(g, pair.packs, hbar);
            dvec rho;
            kernels::density(psi, rho);
            std::vector<double> X(N);
            for (int i = 0; i < N; ++i)
                X[i] = draw_from_density_1d(g, rho, 1, seed,
                                            0xAB00ULL + 1000 * s + i + 131 * N)[0];
            ProductFields fields(g, std::vector<const cvec*>(N, &psi));
            auto f = force_decomposition_product(fields, X, std::vector<double>(N, m), hbar,
                                                 [&](double) { return slope; });
            fu.push_back(std::abs(f.F_U));
            fcm.push_back(std::abs(f.F_cm));
            ratio.push_back(std::abs(f.F_rel) / std::max(1e-300, std::abs(f.F_U)));
        }
        auto median = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            return v[v.size() / 2];
        };
        res.median_F_U.push_back(median(fu));
        res.median_F_cm.push_back(median(fcm));
        res.median_ratio_rel.push_back(median(ratio));
    }

    // log-log least squares
    auto fit = [&](const std::vector<double>& ys) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(ys.size());
        for (int i = 0; i < n; ++i) {
            const double lx = std::log(static_cast<double>(res.N_list[i]));
            const double ly = std::log(std::max(1e-300, ys[i]));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double denom = n * sxx - sx * sx;
        return (n * sxy - sx * sy) / denom;
    };
    double spread_cm = 0.0;
    for (double v : res.median_F_cm)
        spread_cm = std::max(spread_cm, v);
    res.degenerate = spread_cm <= 0.0;
    res.alpha_U = fit(res.median_F_U);
    res.alpha_cm = fit(res.median_F_cm);
    return res;
}

SigmaCmResult sigma_cm_check(const std::function<double(std::uint64_t)>& draw, double sigma_sq,
                             int N, int preparations) {
    SigmaCmResult r;
    std::vector<double> cms(preparations);
    std::uint64_t ctr = 0;
    for (int p = 0; p < preparations; ++p) {
        double s = 0.0;
        for (int i = 0; i < N; ++i)
            s += draw(ctr++);
        cms[p] = s / N;
    }
    double mean = 0.0;
    for (double v : cms)
        mean += v;
    mean /= preparations;
    double var = 0.0;
    for (double v : cms)
        var += (v - mean) * (v - mean);
    r.sigma_cm_sq = var / std::max(1, preparations - 1);
    r.bound = sigma_sq / N;
    r.pass = r.sigma_cm_sq <= 1.1 * r.bound;
    return r;
}

// ------------------------------------------------------------- K-body CMs

KBodyResult kbody_cm_evolve(const KBodyConfig& cfg, const Constants& c) {
    const int K = static_cast<int>(cfg.masses.size());
    const int d = static_cast<int>(cfg.x0[0].size());
    KBodyResult res;

    // width / separation precondition
    double min_sep = 1e300;
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) {
            double r2 = 0.0;
            for (int a = 0; a < d; ++a) {
                const double dd = cfg.x0[i][a] - cfg.x0[j][a];
                r2 += dd * dd;
            }
            min_sep = std::min(min_sep, std::sqrt(r2));
        }
    for (double w : cfg.widths)
        if (K > 1 && w > 0.1 * min_sep)
            res.width_warning = true;

    auto forces = [&](const std::vector<std::vector<double>>& x,
                      std::vector<std::vector<double>>& f) {
        for (int i = 0; i < K; ++i)
            std::fill(f[i].begin(), f[i].end(), 0.0);
        if (!cfg.interacting)
            return;
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j) {
                double r2 = cfg.eps * cfg.eps;
                for (int a = 0; a < d; ++a) {
                    const double dd = x[i][a] - x[j][a];
                    r2 += dd * dd;
                }
                const double inv = cfg.coupling * c.G * cfg.masses[i] * cfg.masses[j] /
                                   (r2 * std::sqrt(r2));
                for (int a = 0; a < d; ++a) {
                    const double dd = x[i][a] - x[j][a];
                    f[i][a] -= inv * dd;
                    f[j][a] += inv * dd;
                }
            }
    };

    std::vector<std::vector<double>> x = cfg.x0, v = cfg.v0;
    std::vector<std::vector<double>> f(K, std::vector<double>(d, 0.0)),
        f_new(K, std::vector<double>(d, 0.0));
    forces(x, f);
    const long n_steps = std::max<long>(1, std::lround(cfg.T / cfg.dt));
    const double h = cfg.T / static_cast<double>(n_steps);
    const int record_every = static_cast<int>(std::max<long>(1, n_steps / 400));

    auto record = [&](double t) {
        res.times.push_back(t);
        res.positions.push_back(x);
    };
    record(0.0);
    for (long s = 0; s < n_steps; ++s) {
        for (int i = 0; i < K; ++i)
            for (int a = 0; a < d; ++a)
                x[i][a] += v[i][a] * h + 0.5 * f[i][a] / cfg.masses[i] * h * h;
        forces(x, f_new);
        for (int i = 0; i < K; ++i)
            for (int a = 0; a < d; ++a)
                v[i][a] += 0.5 * (f[i][a] + f_new[i][a]) / cfg.masses[i] * h;
        f.swap(f_new);
        if ((s + 1) % record_every == 0 || s + 1 == n_steps)
            record(h * static_cast<double>(s + 1));
    }
    return res;
}

// ------------------------------------------------------------ crossing demo

CrossingReport crossing_demo(const Constants& c, bool zero_momentum) {
    CrossingReport rep;
    const double k = zero_momentum ? 0.0 : 1.5;
    const double x0 = 6.0;
    const Grid g = make_grid(1, 1024, 64.0);
    cvec psi = packet_superposition_1d(
        g, {{1.0, -x0, 1.0, k}, {1.0, x0, 1.0, -k}}, c.hbar);

    SplitStepper stepper(g, {c.mass(0)}, c.hbar);
    const Fft& fft = stepper.fft();
    dvec v_ext(g.size(), 0.0);
    const double T = zero_momentum ? 2.0 : 8.0;
    const double dt = 2e-3;
    const long n_steps = std::lround(T / dt);

    double xl = -x0, xr = x0;
    dvec vf0, vf1;
    cvec scratch;
    velocity_field(fft, g, psi, c.mass(0), c.hbar, vf0, scratch);
    double min_sep = xr - xl;
    rep.times.push_back(0.0);
    rep.exact_left.push_back(xl);
    rep.exact_right.push_back(xr);
    for (long s = 0; s < n_steps; ++s) {
        stepper.step(psi, v_ext, dt);
        velocity_field(fft, g, psi, c.mass(0), c.hbar, vf1, scratch);
        auto advance = [&](double x) {
            const double k1 = interp1(g, vf0, x);
            const double k2 = interp1(g, vf1, g.wrap(0, x + dt * k1));
            return g.wrap(0, x + 0.5 * dt * (k1 + k2));
        };
        xl = advance(xl);
        xr = advance(xr);
        vf0.swap(vf1);
        min_sep = std::min(min_sep, xr - xl);
        if ((s + 1) % 40 == 0 || s + 1 == n_steps) {
            rep.times.push_back(dt * static_cast<double>(s + 1));
            rep.exact_left.push_back(xl);
            rep.exact_right.push_back(xr);
        }
    }
    rep.exact_min_separation = min_sep;
    rep.exact_crossed = min_sep <= 0.0;

    // effectively-classical CM packets: free flight, head-on
    KBodyConfig kb;
    kb.masses = {50.0, 50.0};
    kb.x0 = {{-x0}, {x0}};
    kb.v0 = {{zero_momentum ? 0.0 : 1.5}, {zero_momentum ? 0.0 : -1.5}};
    kb.widths = {0.05, 0.05};
    kb.interacting = false;
    kb.dt = 1e-3;
    kb.T = T;
    auto kr = kbody_cm_evolve(kb, c);
    rep.cm_left.reserve(kr.times.size());
    for (std::size_t i = 0; i < kr.times.size(); ++i) {
        rep.cm_left.push_back(kr.positions[i][0][0]);
        rep.cm_right.push_back(kr.positions[i][1][0]);
    }
    rep.cm_crossed = (kr.positions.back()[0][0] - kr.positions.back()[1][0]) *
                         (kb.x0[0][0] - kb.x0[1][0]) <
                     0.0;
    if (zero_momentum)
        rep.cm_crossed = false;
    return rep;
}

} // namespace zsm
