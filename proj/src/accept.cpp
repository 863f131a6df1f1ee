#include "zsm/accept.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "zsm/cat_probe.hpp"
#include "zsm/cm.hpp"
#include "zsm/conditional.hpp"
#include "zsm/evolve.hpp"
#include "zsm/kernels.hpp"
#include "zsm/loop_integral.hpp"
#include "zsm/madelung.hpp"
#include "zsm/meanfield.hpp"
#include "zsm/nelson.hpp"
#include "zsm/zbw.hpp"

namespace zsm {

namespace {

struct Detail {
    std::ostringstream os;
    bool ok = true;
    void req(bool cond, const std::string& what) {
        ok = ok && cond;
        os << (cond ? "" : "FAILED: ") << what << "; ";
    }
    CheckOutcome done() const {
        CheckOutcome o;
        o.pass = ok;
        o.detail = os.str();
        return o;
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- 1: Bohr

CheckOutcome crit_bohr() {
    Detail d;
    auto lvl1 = bohr_spectrum(1);
    d.req(std::abs(lvl1.E_eV - (-13.6)) / 13.6 < 5e-4,
          "E1 = " + fmt(lvl1.E_eV) + " eV within 0.05% of -13.6");
    const double bohr_radius = 5.29177210903e-11;
    d.req(std::abs(lvl1.r_m - bohr_radius) / bohr_radius < 5e-4,
          "r1 = " + fmt(lvl1.r_m) + " m within 0.05% of the Bohr radius");
    for (int n = 1; n <= 10; ++n) {
        auto lvl = bohr_spectrum(n);
        d.req(std::abs(lvl.E_eV / lvl1.E_eV - 1.0 / (n * n)) < 1e-12,
              "E_" + std::to_string(n) + "/E_1 = 1/n^2 to 1e-12");
        // force balance m v^2 / r = k e^2 / r^2
        const double lhs = SiConstants::m_e * lvl.v_ms * lvl.v_ms / lvl.r_m;
        const double rhs = SiConstants::e * SiConstants::e /
                           (4.0 * M_PI * SiConstants::eps0 * lvl.r_m * lvl.r_m);
        d.req(std::abs(lhs - rhs) / rhs < 1e-12, "force balance at n=" + std::to_string(n));
    }
    return d.done();
}

// ----------------------------------------------------------- 2: Wallstrom

CheckOutcome crit_wallstrom() {
    Detail d;
    const Grid g = make_grid(2, 128, 20.0);
    const double hbar = 1.0;
    for (int m = 1; m <= 3; ++m) {
        cvec psi(g.size());
        for (int i = 0; i < g.points(0); ++i)
            for (int j = 0; j < g.points(1); ++j) {
                const double x = g.coord(0, i), y = g.coord(1, j);
                cplx z(x, y), zp(1.0, 0.0);
                for (int k = 0; k < m; ++k)
                    zp *= z;
                psi[static_cast<std::size_t>(i) * g.points(1) + j] =
                    zp * std::exp(-(x * x + y * y) / 2.0);
            }
        normalize_field(g, psi);
        auto st = WaveState::full_grid(g, psi);
        auto field = MomentumField::from_wavefunction(st, hbar);
        auto r = loop_phase_integral(field, circle_loop(0, 0, 3.0, 256), hbar);
        d.req(std::abs(r.winding - m) < 1e-6,
              "psi_m winding m=" + std::to_string(m) + " got " + fmt(r.winding));
    }
    // constructed non-quantized field: v'_a = 1.5 (hbar / m r) phi_hat
    auto field = MomentumField::analytic(2, [&](const std::vector<double>& x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        const double f = 1.5 * hbar / r2;
        return std::vector<double>{-f * x[1], f * x[0]};
    });
    auto r = loop_phase_integral(field, circle_loop(0, 0, 2.0, 512), hbar);
    d.req(std::abs(r.winding - 1.5) < 1e-6, "HJM field circulation 1.5 h, got " + fmt(r.winding));
    d.req(std::abs(r.nearest_int_dist - 0.5) < 1e-6,
          "distance to nearest integer 0.5, got " + fmt(r.nearest_int_dist));
    return d.done();
}

// --------------------------------------- 3: Madelung <-> Schroedinger residuals

struct ResidualPair {
    double continuity = 0.0;
    double qhj = 0.0;
};

// Relative L2 residuals of the continuity and quantum Hamilton-Jacobi
// equations for psi evolved by split-step, evaluated with spectral space
// derivatives and centered time differences at t = T/2.
ResidualPair madelung_residuals(const Grid& g, const cvec& psi0, const dvec& v_ext, double dt,
                                long steps_half, double mass, double hbar,
                                double floor_rel = 1e-8) {
    SplitStepper stepper(g, {mass}, hbar);
    const Fft& fft = stepper.fft();
    cvec psi = psi0;
    for (long s = 0; s < steps_half - 1; ++s)
        stepper.step(psi, v_ext, dt);
    cvec psi_m = psi; // t - dt
    stepper.step(psi, v_ext, dt);
    cvec psi_c = psi; // t
    stepper.step(psi, v_ext, dt);
    cvec psi_p = psi; // t + dt

    const std::size_t n = g.size();
    dvec rho_m, rho_c, rho_p;
    kernels::density(psi_m, rho_m);
    kernels::density(psi_c, rho_c);
    kernels::density(psi_p, rho_p);
    double rho_max = 0.0;
    for (double r : rho_c)
        rho_max = std::max(rho_max, r);
    const double floor = floor_rel * rho_max;

    auto st = WaveState::full_grid(g, psi_c);
    Fft fft_local(g);
    auto f = madelung_extract(st, fft_local, mass, hbar, 1e-8);

    // continuity: d rho / dt + div(rho v)
    dvec flux(n), div_flux;
    for (std::size_t i = 0; i < n; ++i)
        flux[i] = rho_c[i] * f.v[0][i];
    spectral_gradient(fft, flux, 0, div_flux);
    double num_c = 0.0, den_c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (rho_c[i] < floor)
            continue;
        const double drho_dt = (rho_p[i] - rho_m[i]) / (2.0 * dt);
        const double res = drho_dt + div_flux[i];
        num_c += res * res;
        den_c += drho_dt * drho_dt;
    }

    // QHJ: -dS/dt = (grad S)^2 / 2m + V + Q; dS/dt from the phase difference
    double num_q = 0.0, den_q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (rho_c[i] < floor)
            continue;
        const double ds_dt =
            hbar * std::arg(psi_p[i] * std::conj(psi_m[i])) / (2.0 * dt);
        const double rhs = f.grad_S[0][i] * f.grad_S[0][i] / (2.0 * mass) + v_ext[i] + f.Q[i];
        const double res = ds_dt + rhs;
        num_q += res * res;
        den_q += rhs * rhs;
    }
    ResidualPair rp;
    rp.continuity = std::sqrt(num_c / std::max(1e-300, den_c));
    rp.qhj = std::sqrt(num_q / std::max(1e-300, den_q));
    return rp;
}

CheckOutcome crit_madelung_equivalence() {
    Detail d;
    const double hbar = 1.0, mass = 1.0;
    const double dt = 1e-3;

    struct Case {
        const char* name;
        int points;
        double extent;
        cvec psi;
        dvec v;
    };
    std::vector<Case> cases;
    auto harmonic_v = [&](const Grid& g, double omega) {
        dvec v(g.size());
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            v[i] = 0.5 * mass * omega * omega * x * x;
        }
        return v;
    };
    auto linear_v = [&](const Grid& g, double slope) {
        dvec v(g.size());
        for (int i = 0; i < g.points(0); ++i)
            v[i] = slope * g.coord(0, i);
        return v;
    };

    {
        Grid g = make_grid(1, 256, 40.0);
        cases.push_back({"free gaussian", 256, 40.0, gaussian_packet_1d(g, 0.0, 1.2, 0.6),
                         dvec(g.size(), 0.0)});
    }
    {
        Grid g = make_grid(1, 256, 40.0);
        cases.push_back({"harmonic coherent", 256, 40.0,
                         gaussian_packet_1d(g, 2.0, std::sqrt(0.5), 0.0), harmonic_v(g, 1.0)});
    }
    {
        Grid g = make_grid(1, 256, 40.0);
        cvec psi(g.size());
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            psi[i] = (1.0 + 0.5 * x) * std::exp(-x * x / 2.0); // ground + excited mix
        }
        normalize_field(g, psi);
        cases.push_back({"HO superposition", 256, 40.0, psi, harmonic_v(g, 1.0)});
    }
    {
        Grid g = make_grid(1, 256, 40.0);
        cases.push_back({"boosted packet in linear", 256, 40.0,
                         gaussian_packet_1d(g, -3.0, 1.0, 1.2), linear_v(g, 0.4)});
    }
    {
        Grid g = make_grid(1, 256, 40.0);
        dvec v(g.size());
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            v[i] = 0.05 * (x * x - 9.0) * (x * x - 9.0) / 9.0; // double well
        }
        cases.push_back({"double well", 256, 40.0, gaussian_packet_1d(g, -3.0, 0.9, 0.3), v});
    }

    for (auto& cse : cases) {
        Grid g = make_grid(1, cse.points, cse.extent);
        auto rp = madelung_residuals(g, cse.psi, cse.v, dt, 400, mass, hbar);
        d.req(rp.continuity < 1e-4, std::string(cse.name) + " continuity residual " +
                                        fmt(rp.continuity) + " < 1e-4");
        d.req(rp.qhj < 1e-4, std::string(cse.name) + " QHJ residual " + fmt(rp.qhj) + " < 1e-4");
    }

    // refinement: residual ~ dt^2
    {
        Grid g = make_grid(1, 256, 40.0);
        cvec psi = gaussian_packet_1d(g, 2.0, 1.0, 0.4);
        dvec v = harmonic_v(g, 1.0);
        const double r4 = madelung_residuals(g, psi, v, 4e-3, 100, mass, hbar).qhj;
        const double r2 = madelung_residuals(g, psi, v, 2e-3, 200, mass, hbar).qhj;
        const double r1 = madelung_residuals(g, psi, v, 1e-3, 400, mass, hbar).qhj;
        const double p1 = std::log2(r4 / r2);
        const double p2 = std::log2(r2 / r1);
        d.req(p1 > 1.6 && p1 < 2.4 && p2 > 1.6 && p2 < 2.4,
              "dt refinement order ~2 (got " + fmt(p1) + ", " + fmt(p2) + ")");
    }
    // refinement: spectral in dx (fitted order beyond 4)
    {
        const double sig = 0.42, dt_fine = 2.5e-4;
        std::vector<int> Ns = {24, 32, 40};
        std::vector<double> errs;
        for (int N : Ns) {
            Grid g = make_grid(1, N, 18.0);
            cvec psi = gaussian_packet_1d(g, 0.7, sig, 0.5);
            auto rp = madelung_residuals(g, psi, dvec(g.size(), 0.0), dt_fine, 200, mass, hbar);
            errs.push_back(rp.qhj);
        }
        const double p_a = std::log(errs[0] / errs[1]) / std::log(32.0 / 24.0);
        const double p_b = std::log(errs[1] / errs[2]) / std::log(40.0 / 32.0);
        d.req(errs[0] > errs[1] && errs[1] > errs[2],
              "dx refinement monotone (" + fmt(errs[0]) + " > " + fmt(errs[1]) + " > " +
                  fmt(errs[2]) + ")");
        d.req(p_a > 4.0 || p_b > 4.0,
              "dx refinement beyond 4th order (got " + fmt(p_a) + ", " + fmt(p_b) + ")");
    }
    return d.done();
}

// ------------------------------------------------- 4: quantum equilibrium

CheckOutcome crit_quantum_equilibrium() {
    Detail d;
    Constants c;
    const double dt = 5e-3;
    const int n_walkers = 10000;

    auto run_case = [&](const char* name, const Grid& g, cvec psi0, const dvec& v) {
        SplitStepper stepper(g, {1.0}, 1.0);
        auto psi = WaveState::full_grid(g, std::move(psi0));
        // drift fields stored densely (0.05 apart) so the sampler's linear
        // time interpolation tracks the moving state; the KS gate is checked
        // at five report times spread over the run
        const double snap_spacing = 0.05;
        const int snaps = 97; // t in [0, 4.8]
        const long per = std::lround(snap_spacing / dt);
        std::vector<WaveState> states;
        states.push_back(psi);
        for (int s = 1; s < snaps; ++s) {
            stepper.evolve(psi, v, dt, per);
            states.push_back(psi);
        }
        auto drift = DriftSnapshots::from_states(states, 1.0, 1.0);
        auto ens = sample_forward(drift, n_walkers, dt / 2.0, 20240517ULL, c);
        for (int s = 0; s < snaps; s += 24) {
            const double ks = ks_distance(drift, s, ens);
            d.req(ks < 0.02, std::string(name) + " KS at t = " + fmt(drift.times[s]) + " is " +
                                 fmt(ks) + " < 0.02");
        }
    };

    {
        Grid g = make_grid(1, 256, 40.0);
        dvec v(g.size());
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            v[i] = 0.5 * x * x;
        }
        run_case("harmonic coherent", g, gaussian_packet_1d(g, 2.0, std::sqrt(0.5), 0.0), v);
    }
    {
        Grid g = make_grid(1, 192, 24.0);
        dvec v(g.size());
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            v[i] = 0.08 * (x * x - 6.25) * (x * x - 6.25) / 6.25;
        }
        run_case("double well", g, gaussian_packet_1d(g, -2.5, 0.8, 0.0), v);
    }
    return d.done();
}

// --------------------------------------------- 5: large-N classical limit

CheckOutcome crit_large_n() {
    Detail d;
    Constants c;
    CmExperimentConfig base;
    base.sigma0 = 1.0;
    base.packet_sep = 6.0;
    base.k0 = 1.5;
    base.asym = 0.35;
    base.slope = 0.06;
    base.T = 30.0;
    base.dt = 0.01;
    base.grid_points = 2048;
    base.extent = 256.0;
    base.seed = 7;

    auto cfg1 = base;
    cfg1.N = 1;
    auto r1 = cm_experiment(cfg1, c);
    d.req(r1.max_error >= 0.30 && r1.max_error <= 0.60,
          "N=1 max error " + fmt(r1.max_error) + " in [0.30, 0.60]");

    auto cfg20 = base;
    cfg20.N = 20;
    cfg20.identical = true;
    auto r20 = cm_experiment(cfg20, c);
    d.req(r20.max_error < 0.05, "N=20 identical max error " + fmt(r20.max_error) + " < 0.05");

    auto cfg_off = base;
    cfg_off.N = 1;
    cfg_off.disable_quantum_force = true;
    auto r_off = cm_experiment(cfg_off, c);
    d.req(r_off.max_error < 1e-9,
          "quantum force disabled: error " + fmt(r_off.max_error) + " < 1e-9");
    return d.done();
}

// ------------------------------------------------------ 6: force scalings

CheckOutcome crit_scalings() {
    Detail d;
    Constants c;
    auto res = scaling_study({8, 16, 32, 64, 128}, 400, 99, c);
    d.req(std::abs(res.alpha_U - 1.0) < 0.05, "alpha_U = " + fmt(res.alpha_U) + " in 1 +- 0.05");
    d.req(std::abs(res.alpha_cm - 0.5) < 0.1, "alpha_cm = " + fmt(res.alpha_cm) + " in 0.5 +- 0.1");
    const std::size_t i64 = 3; // N = 64 entry
    d.req(res.median_ratio_rel[i64] < 0.01,
          "median F_rel/F_U at N=64 = " + fmt(res.median_ratio_rel[i64]) + " < 0.01");
    // decreasing trend of the median ratio: log-log slope clearly negative
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int nn = static_cast<int>(res.N_list.size());
    for (int i = 0; i < nn; ++i) {
        const double lx = std::log(static_cast<double>(res.N_list[i]));
        const double ly = std::log(std::max(1e-300, res.median_ratio_rel[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    d.req(slope < -0.2, "F_rel/F_U decreasing in N (log-log slope " + fmt(slope) + ")");
    return d.done();
}

// -------------------------------------------- 7: classical NLS dispersion

CheckOutcome crit_classical_nls() {
    Detail d;
    // free case: 10 spreading times of the quantum packet
    {
        const Grid g = make_grid(1, 1024, 128.0);
        ClassicalNls solver(g, 1.0, 1.0);
        auto psi = WaveState::full_grid(g, gaussian_packet_1d(g, -30.0, 1.0, 1.0));
        dvec v(g.size(), 0.0);
        const double t_spread = 2.0; // 2 m sigma^2 / hbar
        const double T = 10.0 * t_spread;
        const double dt = 2e-3;
        const double w0 = packet_width(g, psi.psi);
        double w_dev = 0.0;
        const long chunks = 40;
        for (long ch = 0; ch < chunks; ++ch) {
            solver.evolve(psi, v, dt, std::lround(T / dt / chunks));
            w_dev = std::max(w_dev, std::abs(packet_width(g, psi.psi) - w0) / w0);
        }
        d.req(w_dev < 0.01, "free packet width drift " + fmt(w_dev) + " < 1% over 10 spread times");
        // quantum comparison: same packet under the linear equation spreads x ~10
        SplitStepper stepper(g, {1.0}, 1.0);
        auto psi_q = WaveState::full_grid(g, gaussian_packet_1d(g, -30.0, 1.0, 1.0));
        stepper.evolve(psi_q, v, dt, std::lround(T / dt));
        const double wq = packet_width(g, psi_q.psi);
        d.req(wq > 5.0 * w0, "quantum reference spreads (width x" + fmt(wq / w0) + ")");
    }
    // linear potential: centroid on the classical parabola
    {
        const Grid g = make_grid(1, 1024, 128.0);
        ClassicalNls solver(g, 1.0, 1.0);
        const double k0 = 1.0, slope = 0.15;
        auto psi = WaveState::full_grid(g, gaussian_packet_1d(g, -25.0, 1.0, k0));
        dvec v(g.size());
        for (int i = 0; i < g.points(0); ++i)
            v[i] = slope * g.coord(0, i);
        const double T = 12.0, dt = 2e-3;
        solver.evolve(psi, v, dt, std::lround(T / dt));
        const double x_expect = -25.0 + k0 * T - 0.5 * slope * T * T;
        const double x_got = packet_center(g, psi.psi);
        d.req(std::abs(x_got - x_expect) < 1e-3,
              "linear potential centroid " + fmt(x_got) + " vs " + fmt(x_expect));
    }
    // Harmonic, width sampled at period multiples. Known red: the equation
    // transports the density along the cold classical flow, and every cold
    // 1D ensemble in a harmonic trap focuses (width ~ sigma0 |cos wt|) into
    // a caustic each quarter period -- a finite-time singularity no fixed
    // grid survives, so stroboscopic width constancy is not reachable from
    // a breathing initial state. Kept as stated; the free and linear cases
    // above carry the non-dispersion content.
    {
        const Grid g = make_grid(1, 1024, 64.0);
        ClassicalNls solver(g, 1.0, 1.0);
        const double omega = 1.0;
        auto psi = WaveState::full_grid(g, gaussian_packet_1d(g, 3.0, 1.0, 0.0));
        dvec v(g.size());
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            v[i] = 0.5 * omega * omega * x * x;
        }
        const double Tp = 2.0 * M_PI / omega;
        const double dt = 1e-3;
        const double w0 = packet_width(g, psi.psi);
        double w_dev = 0.0;
        for (int period = 1; period <= 5; ++period) {
            solver.evolve(psi, v, dt, std::lround(Tp / dt));
            w_dev = std::max(w_dev, std::abs(packet_width(g, psi.psi) - w0) / w0);
        }
        d.req(w_dev < 0.01, "harmonic width at period multiples drift " + fmt(w_dev) +
                                " < 1% over 5 periods (quarter-period caustic of the cold flow)");
    }
    return d.done();
}

// ------------------------------------------- 8: mean-field SN stationarity

CheckOutcome crit_sn_stationarity() {
    Detail d;
    Constants c;
    const Grid g = make_grid(1, 256, 48.0);
    MeanFieldSpec spec;
    spec.kernel = SourceKernel::Gravity;
    spec.coupling_n = 12.0;
    MeanFieldSolver solver(g, c, spec);
    auto gs = solver.ground_state(WaveState::full_grid(g, gaussian_packet_1d(g, 0.0, 2.0, 0.0)),
                                  1e-13, 0.002);
    d.req(gs.iterations > 0, "imaginary-time ground state converged (E = " + fmt(gs.energy) + ")");

    // dynamical time from the ground-state energy scale
    const double t_dyn = 1.0 / std::abs(gs.energy);
    const double T = 10.0 * t_dyn;
    const double dt = 2.5e-4;
    dvec amp0(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        amp0[i] = std::abs(gs.state.psi[i]);
    const double e0 = solver.energy(gs.state.psi);
    const double p0 = solver.momentum(gs.state.psi);
    auto chi = gs.state;
    auto rep = solver.evolve(chi, dt, std::lround(T / dt));
    double l2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double dd = std::abs(chi.psi[i]) - amp0[i];
        l2 += dd * dd;
    }
    l2 = std::sqrt(l2 * g.cell_volume());
    d.req(l2 < 1e-4, "|chi| L2 drift " + fmt(l2) + " < 1e-4 over 10 dynamical times");
    d.req(rep.norm_drift < 1e-10, "norm drift " + fmt(rep.norm_drift) + " < 1e-10");
    const double e_drift = std::abs(solver.energy(chi.psi) - e0) / std::max(1e-300, std::abs(e0));
    d.req(e_drift < 1e-7, "energy drift " + fmt(e_drift) + " < 1e-7 relative");
    const double p_drift = std::abs(solver.momentum(chi.psi) - p0);
    d.req(p_drift < 1e-9, "momentum drift " + fmt(p_drift) + " < 1e-9");
    return d.done();
}

// -------------------------------------------------------- 9: cat-state probe

CheckOutcome crit_cat_probe() {
    Detail d;
    Constants c;
    const Grid g = make_grid(1, 256, 40.0);
    CatParams cat;
    cat.sigma = 0.5;
    cat.L = 10.0;
    cat.M = 1.0;
    ProbeParams probe;
    auto mf = cat_probe(cat, probe, CatMode::MeanField, g, c, 0.25, 1, 3, nullptr);
    d.req(std::abs(mf.mean_deflection) < 1e-12,
          "meanfield midline deflection " + fmt(mf.mean_deflection) + " < 1e-12");
    auto tc = cat_probe(cat, probe, CatMode::TwoChannel, g, c, 0.25, 10000, 3, nullptr);
    d.req(std::abs(tc.left_fraction - 0.5) <= 0.015,
          "two-channel left fraction " + fmt(tc.left_fraction) + " = 0.5 +- 0.015");
    // binomial test at alpha = 0.01: |p_hat - 0.5| < z_0.995 / (2 sqrt(n))
    const double z995 = 2.5758293;
    d.req(std::abs(tc.left_fraction - 0.5) < z995 / (2.0 * std::sqrt(10000.0)),
          "binomial test at alpha = 0.01 passes");
    // deflection magnitude vs closed-form single-source impulse
    const double b = std::sqrt(0.25 * cat.L * cat.L + 0.25 * 0.25);
    const double analytic =
        single_source_impulse(c.G, probe.mass, cat.M, b, probe.speed, probe.half_window);
    d.req(std::abs(std::abs(tc.deflections[0]) - analytic) / analytic < 1e-4,
          "two-channel magnitude matches single-source impulse within 1e-4");
    return d.done();
}

// ------------------------------------------------- 10: stochastic SN noise

CheckOutcome crit_stochastic_noise() {
    Detail d;
    Constants c;
    const Grid g = make_grid(1, 64, 16.0);
    cvec chi = gaussian_packet_1d(g, 0.0, 1.5, 0.0);
    NoiseKernelSpec spec;
    spec.sigma_s = 3.0 * g.spacing(0);
    spec.tau_s = 0.05;
    const int n_real = 1000;
    auto nf = sample_noise(g, chi, 1.0, c, spec, n_real, 424242);

    // pointwise sample mean within 3 standard errors of zero
    int mean_fail = 0;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double m = 0, v = 0;
        for (int r = 0; r < n_real; ++r)
            m += nf.realizations[r][i];
        m /= n_real;
        for (int r = 0; r < n_real; ++r) {
            const double dd = nf.realizations[r][i] - m;
            v += dd * dd;
        }
        v /= (n_real - 1);
        const double se = std::sqrt(v / n_real);
        if (se > 0 && std::abs(m) > 3.0 * se)
            ++mean_fail;
        if (se > 0)
            worst_ratio = std::max(worst_ratio, std::abs(m) / se);
    }
    d.req(mean_fail <= static_cast<int>(0.02 * g.size()),
          "sample mean within 3 SE at all but <=2% of points (worst " + fmt(worst_ratio) + " SE)");

    // empirical variance matches the kernel diagonal within 15%
    const dvec cov = noise_covariance_matrix(g, chi, 1.0, c, spec);
    double worst_var = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double want = cov[i * g.size() + i];
        if (want < 1e-6)
            continue;
        double m = 0, v = 0;
        for (int r = 0; r < n_real; ++r)
            m += nf.realizations[r][i];
        m /= n_real;
        for (int r = 0; r < n_real; ++r) {
            const double dd = nf.realizations[r][i] - m;
            v += dd * dd;
        }
        v /= (n_real - 1);
        worst_var = std::max(worst_var, std::abs(v - want) / want);
    }
    d.req(worst_var < 0.15, "empirical variance within 15% of kernel diagonal (worst " +
                                fmt(worst_var) + ")");

    // PSD guard on a constructed failing kernel: wide smearing on a cat state
    bool guarded = false;
    std::string guard_msg;
    try {
        CatParams cat;
        cat.sigma = 0.5;
        cat.L = 8.0;
        cvec bad = cat_state(g, cat);
        NoiseKernelSpec wide;
        wide.sigma_s = 6.0; // delta term diluted; anti-correlated tail dominates
        wide.tau_s = 0.05;
        sample_noise(g, bad, 1.0, c, wide, 2, 7);
    } catch (const std::exception& e) {
        guarded = true;
        guard_msg = e.what();
    }
    d.req(guarded, "PSD guard triggers on constructed failing kernel (" + guard_msg + ")");

    // determinism
    auto nf2 = sample_noise(g, chi, 1.0, c, spec, 3, 424242);
    bool identical = true;
    for (int r = 0; r < 3; ++r)
        for (std::size_t i = 0; i < g.size(); ++i)
            identical = identical && nf2.realizations[r][i] == nf.realizations[r][i];
    d.req(identical, "fixed seed reproduces bit-identical realizations");
    return d.done();
}

// --------------------------------- 11: product vs FullGrid + k-body oracle

CheckOutcome crit_oracles() {
    Detail d;
    Constants c;
    const double hbar = 1.0;
    // chain-rule ForceTriple vs FullGrid spectral evaluation, N = 2 and 3
    for (int N : {2, 3}) {
        const int pts = N == 2 ? 128 : 48;
        const Grid g1 = make_grid(1, pts, 24.0);
        std::vector<cvec> factors(N);
        std::vector<const cvec*> fptr(N);
        for (int i = 0; i < N; ++i) {
            factors[i] = packet_superposition_1d(
                g1, {{1.0, -1.5 + 0.4 * i, 0.9 + 0.1 * i, 0.5}, {0.8, 1.5 - 0.3 * i, 1.1, -0.4}});
            fptr[i] = &factors[i];
        }
        ProductFields fields(g1, fptr);
        const Grid gn = make_grid(N, std::vector<int>(N, pts), std::vector<double>(N, 24.0));
        cvec psi(gn.size());
        for (std::size_t flat = 0; flat < gn.size(); ++flat) {
            const auto idx = gn.unindex(flat);
            cplx v(1.0, 0.0);
            for (int a = 0; a < N; ++a)
                v *= factors[a][idx[a]];
            psi[flat] = v;
        }
        auto st = WaveState::full_grid(gn, psi);
        auto du = [](double) { return 0.3; };
        const std::vector<double> X = N == 2 ? std::vector<double>{-0.8, 1.1}
                                             : std::vector<double>{-0.8, 1.1, 0.2};
        auto fp = force_decomposition_product(fields, X, std::vector<double>(N, 1.0), hbar, du);
        auto fg = force_decomposition_fullgrid(st, X, std::vector<double>(N, 1.0), hbar, du);
        const double scale = std::max({1.0, std::abs(fp.F_cm), std::abs(fp.F_rel)});
        d.req(std::abs(fp.F_U - fg.F_U) < 1e-9, "N=" + std::to_string(N) + " F_U match");
        d.req(std::abs(fp.F_cm - fg.F_cm) / scale < 1e-6,
              "N=" + std::to_string(N) + " F_cm chain rule vs grid (" + fmt(fp.F_cm) + " vs " +
                  fmt(fg.F_cm) + ")");
        d.req(std::abs(fp.F_rel - fg.F_rel) / scale < 1e-6,
              "N=" + std::to_string(N) + " F_rel chain rule vs grid (" + fmt(fp.F_rel) + " vs " +
                  fmt(fg.F_rel) + ")");
    }

    // k-body vs independent symplectic oracle (finer-step leapfrog)
    {
        KBodyConfig kb;
        kb.masses = {1.0, 1.0, 1.0};
        kb.x0 = {{-1.0, 0.3}, {1.0, -0.3}, {0.0, 0.9}};
        kb.v0 = {{0.35, 0.2}, {-0.35, 0.2}, {0.0, -0.4}};
        kb.widths = {0.01, 0.01, 0.01};
        kb.eps = 0.05;
        kb.dt = 2e-4;
        kb.T = 4.0;
        auto res = kbody_cm_evolve(kb, c);

        // oracle: plain leapfrog at half step
        const int K = 3, dim = 2;
        auto x = kb.x0;
        auto v = kb.v0;
        auto acc = [&](const std::vector<std::vector<double>>& xx, int i) {
            std::vector<double> a(dim, 0.0);
            for (int j = 0; j < K; ++j) {
                if (j == i)
                    continue;
                double r2 = kb.eps * kb.eps;
                for (int b = 0; b < dim; ++b) {
                    const double dd = xx[i][b] - xx[j][b];
                    r2 += dd * dd;
                }
                const double inv = c.G * kb.masses[j] / (r2 * std::sqrt(r2));
                for (int b = 0; b < dim; ++b)
                    a[b] -= inv * (xx[i][b] - xx[j][b]);
            }
            return a;
        };
        const double h = 1e-4;
        const long n = std::lround(kb.T / h);
        std::vector<std::vector<double>> vh = v;
        for (int i = 0; i < K; ++i) {
            auto a = acc(x, i);
            for (int b = 0; b < dim; ++b)
                vh[i][b] = v[i][b] + 0.5 * h * a[b];
        }
        for (long s = 0; s < n; ++s) {
            for (int i = 0; i < K; ++i)
                for (int b = 0; b < dim; ++b)
                    x[i][b] += vh[i][b] * h;
            if (s + 1 < n)
                for (int i = 0; i < K; ++i) {
                    auto a = acc(x, i);
                    for (int b = 0; b < dim; ++b)
                        vh[i][b] += h * a[b];
                }
        }
        double scale = 0.0, err = 0.0;
        for (int i = 0; i < K; ++i)
            for (int b = 0; b < dim; ++b) {
                scale = std::max(scale, std::abs(x[i][b]));
                err = std::max(err, std::abs(res.positions.back()[i][b] - x[i][b]));
            }
        d.req(err / std::max(1.0, scale) < 1e-4,
              "3-body trajectories match symplectic oracle within 1e-4 (err " + fmt(err) + ")");
    }

    // 2-body circular orbit against the Kepler period
    {
        const double Mb = 2.0, dsep = 2.0;
        const double omega = std::sqrt(c.G * 2.0 * Mb / (dsep * dsep * dsep));
        const double vcirc = omega * dsep / 2.0;
        KBodyConfig kb;
        kb.masses = {Mb, Mb};
        kb.x0 = {{-dsep / 2, 0.0}, {dsep / 2, 0.0}};
        kb.v0 = {{0.0, -vcirc}, {0.0, vcirc}};
        kb.widths = {0.01, 0.01};
        kb.eps = 0.0;
        kb.dt = 1e-4;
        const double period = 2.0 * M_PI / omega;
        kb.T = period;
        auto res = kbody_cm_evolve(kb, c);
        double err = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int b = 0; b < 2; ++b)
                err = std::max(err, std::abs(res.positions.back()[i][b] - kb.x0[i][b]));
        d.req(err / dsep < 1e-3, "circular orbit closes to 0.1% after one Kepler period (err " +
                                     fmt(err / dsep) + ")");
    }
    return d.done();
}

// ------------------------------- 12: conditional semiclassical ordering

CheckOutcome crit_conditional_ordering() {
    Detail d;
    Constants c;
    ConditionalSetup setup;
    setup.light_grid = make_grid(1, 512, 80.0);
    setup.m_light = 1.0;
    setup.M_heavy = 1000.0;
    setup.x0_heavy = 0.0;
    setup.v0_heavy = 0.0;
    const double omega_h = 0.5;
    setup.u_heavy = [&](double q2) { return 0.5 * 1000.0 * omega_h * omega_h * q2 * q2; };
    setup.du_heavy = [&](double q2) { return 1000.0 * omega_h * omega_h * q2; };
    const double A = 6.0, w = 0.8;
    setup.v_int = [=](double q1, double q2) {
        const double dd = q1 - q2;
        return A * std::exp(-dd * dd / (2 * w * w));
    };
    setup.dv_int_dq2 = [=](double q1, double q2) {
        const double dd = q1 - q2;
        return A * std::exp(-dd * dd / (2 * w * w)) * dd / (w * w);
    };
    setup.psi_light0 = gaussian_packet_1d(setup.light_grid, -12.0, 1.5, 2.0);
    setup.light_q0 = -12.0;
    setup.dt = 2e-3;
    setup.steps = 6000;
    setup.snapshot_every = 60;

    const Grid heavy_grid = make_grid(1, 64, 8.0);
    const double heavy_sigma = std::sqrt(c.hbar / (2.0 * setup.M_heavy * omega_h));
    auto exact = exact_two_body(setup, heavy_grid, heavy_sigma, c);

    auto scattering_prob = [&](const dvec& red, const Grid& g, double x_split) {
        double p = 0.0;
        for (int i = 0; i < g.points(0); ++i)
            if (g.coord(0, i) < x_split)
                p += red[i] * g.spacing(0);
        return p; // reflected fraction
    };

    auto run_scheme = [&](SemiclassicalScheme scheme) {
        auto s = setup;
        s.scheme = scheme;
        auto res = conditional_semiclassical(s, c);
        // time-integrated error of the reflected probability vs exact
        double err = 0.0;
        const double x_split = -4.0;
        for (std::size_t k = 0; k < res.times.size() && k < exact.times.size(); ++k) {
            dvec red(setup.light_grid.size());
            kernels::density(res.light_history[k].psi, red);
            const double p = scattering_prob(red, setup.light_grid, x_split);
            const double pe = scattering_prob(exact.light_density[k], setup.light_grid, x_split);
            err += std::abs(p - pe);
        }
        return err;
    };

    const double err_cond = run_scheme(SemiclassicalScheme::Conditional);
    const double err_std = run_scheme(SemiclassicalScheme::StandardQm);
    d.req(err_cond < err_std, "conditional scheme error " + fmt(err_cond) +
                                  " < standard scheme error " + fmt(err_std));
    return d.done();
}

} // namespace

const std::vector<Criterion>& acceptance_criteria() {
    static const std::vector<Criterion> criteria = {
        {1, "bohr-spectrum", crit_bohr},
        {2, "wallstrom-winding", crit_wallstrom},
        {3, "madelung-equivalence", crit_madelung_equivalence},
        {4, "quantum-equilibrium", crit_quantum_equilibrium},
        {5, "large-n-classical-limit", crit_large_n},
        {6, "force-scalings", crit_scalings},
        {7, "classical-nls-non-dispersion", crit_classical_nls},
        {8, "sn-stationarity", crit_sn_stationarity},
        {9, "cat-state-probe", crit_cat_probe},
        {10, "stochastic-sn-noise", crit_stochastic_noise},
        {11, "product-vs-fullgrid-oracles", crit_oracles},
        {12, "conditional-scheme-ordering", crit_conditional_ordering},
    };
    return criteria;
}

int run_acceptance(bool verbose) {
    int failures = 0;
    for (const auto& cr : acceptance_criteria()) {
        const auto t0 = std::chrono::steady_clock::now();
        CheckOutcome out;
        try {
            out = cr.fn();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!out.pass)
            ++failures;
        std::printf("[%s] criterion %2d %-32s (%.1fs)%s%s\n", out.pass ? "PASS" : "FAIL", cr.id,
                    cr.name.c_str(), out.seconds, verbose ? " " : "",
                    verbose ? out.detail.c_str() : "");
        std::fflush(stdout);
    }
    return failures;
}

} // namespace zsm
