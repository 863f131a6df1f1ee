#include "zsm/run.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "zsm/cat_probe.hpp"
#include "zsm/cm.hpp"
#include "zsm/corrections.hpp"
#include "zsm/evolve.hpp"
#include "zsm/io.hpp"
#include "zsm/kernels.hpp"
#include "zsm/loop_integral.hpp"
#include "zsm/meanfield.hpp"
#include "zsm/nelson.hpp"
#include "zsm/vlasov.hpp"
#include "zsm/zbw.hpp"

namespace zsm {

namespace fs = std::filesystem;

std::string resolve_output_dir(const ExperimentConfig& cfg) {
    std::string base = cfg.output_dir;
    if (base.empty()) {
        const char* env = std::getenv("ZSM_OUT");
        base = env ? env : "out";
    }
    fs::create_directories(base);
    return base;
}

namespace {

double param(const ExperimentConfig& cfg, const char* key, double fallback) {
    if (cfg.params.contains(key))
        return cfg.params.at(key).get<double>();
    return fallback;
}

bool param_flag(const ExperimentConfig& cfg, const char* key, bool fallback) {
    if (cfg.params.contains(key))
        return cfg.params.at(key).get<bool>();
    return fallback;
}

RunRecord run_bohr(const ExperimentConfig& cfg, const std::string& dir) {
    RunRecord rec;
    const int n_max = static_cast<int>(param(cfg, "n_max", 10));
    auto table = bohr_table(n_max);
    const std::string path = dir + "/bohr_table.csv";
    std::ofstream out(path);
    out << "n,r_m,E_eV,v_ms\n";
    char buf[160];
    for (const auto& lvl : table) {
        std::snprintf(buf, sizeof(buf), "%d,%.12e,%.12e,%.12e\n", lvl.n, lvl.r_m, lvl.E_eV,
                      lvl.v_ms);
        out << buf;
    }
    out.close();
    rec.outputs.push_back(path);
    rec.checks.emplace_back("E1 within 0.05% of -13.6 eV",
                            std::abs(table[0].E_eV + 13.6) / 13.6 < 5e-4);
    rec.summary = {{"E1_eV", table[0].E_eV}, {"r1_m", table[0].r_m}};
    return rec;
}

RunRecord run_wallstrom(const ExperimentConfig& cfg, const std::string& dir) {
    RunRecord rec;
    const Grid g = make_grid(2, cfg.grid_points, cfg.grid_extent);
    json results = json::array();
    for (int m = 1; m <= 3; ++m) {
        cvec psi(g.size());
        for (int i = 0; i < g.points(0); ++i)
            for (int j = 0; j < g.points(1); ++j) {
                const double x = g.coord(0, i), y = g.coord(1, j);
                cplx z(x, y), zp(1.0, 0.0);
                for (int kk = 0; kk < m; ++kk)
                    zp *= z;
                psi[static_cast<std::size_t>(i) * g.points(1) + j] =
                    zp * std::exp(-(x * x + y * y) / 2.0);
            }
        normalize_field(g, psi);
        auto st = WaveState::full_grid(g, psi);
        auto field = MomentumField::from_wavefunction(st, cfg.constants.hbar);
        auto r = loop_phase_integral(field, circle_loop(0, 0, 3.0, 256), cfg.constants.hbar);
        results.push_back({{"m", m}, {"winding", r.winding}, {"dist", r.nearest_int_dist}});
        rec.checks.emplace_back("winding m=" + std::to_string(m),
                                std::abs(r.winding - m) < 1e-6);
    }
    auto field = MomentumField::analytic(2, [&](const std::vector<double>& x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        const double f = 1.5 * cfg.constants.hbar / r2;
        return std::vector<double>{-f * x[1], f * x[0]};
    });
    auto r = loop_phase_integral(field, circle_loop(0, 0, 2.0, 512), cfg.constants.hbar);
    results.push_back({{"m", 1.5}, {"winding", r.winding}, {"dist", r.nearest_int_dist}});
    rec.checks.emplace_back("non-quantized field winds 1.5", std::abs(r.winding - 1.5) < 1e-6);
    rec.summary = {{"loops", results}};
    const std::string path = dir + "/wallstrom.json";
    std::ofstream(path) << rec.summary.dump(2) << "\n";
    rec.outputs.push_back(path);
    return rec;
}

RunRecord run_cm(const ExperimentConfig& cfg, const std::string& dir) {
    RunRecord rec;
    CmExperimentConfig c;
    c.N = static_cast<int>(param(cfg, "N", 1));
    c.identical = param_flag(cfg, "identical", true);
    c.T = param(cfg, "T", 30.0);
    c.dt = param(cfg, "dt", 0.01);
    c.slope = param(cfg, "slope", 0.02);
    c.sigma0 = param(cfg, "sigma0", 1.0);
    c.packet_sep = param(cfg, "packet_sep", 6.0);
    c.k0 = param(cfg, "k0", 1.5);
    c.asym = param(cfg, "asym", 0.35);
    c.grid_points = cfg.grid_points;
    c.extent = cfg.grid_extent;
    c.seed = cfg.seed_root;
    c.disable_quantum_force = param_flag(cfg, "disable_quantum_force", false);
    c.stratified = param_flag(cfg, "stratified", true);
    auto res = cm_experiment(c, cfg.constants);

    const std::string path = dir + "/cm_experiment.csv";
    std::ofstream out(path);
    out << "t,x_quantum,x_classical,error\n";
    char buf[200];
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", res.times[i],
                      res.x_quantum[i], res.x_classical[i], res.error[i]);
        out << buf;
    }
    out.close();
    rec.outputs.push_back(path);
    rec.summary = {{"max_error", res.max_error}, {"error_definition", res.error_definition},
                   {"N", c.N}, {"identical", c.identical}};
    if (c.N >= 20)
        rec.checks.emplace_back("N>=20 max error < 5%", res.max_error < 0.05);
    return rec;
}

RunRecord run_scaling(const ExperimentConfig& cfg, const std::string& dir) {
    RunRecord rec;
    std::vector<int> N_list;
    if (cfg.params.contains("N_list"))
        for (const auto& v : cfg.params.at("N_list"))
            N_list.push_back(v.get<int>());
    else
        N_list = {4, 8, 16, 32, 64};
    const int seeds = static_cast<int>(param(cfg, "seeds", 200));
    auto res = scaling_study(N_list, seeds, cfg.seed_root, cfg.constants);
    json ratios = json::array();
    for (std::size_t i = 0; i < res.N_list.size(); ++i)
        ratios.push_back({{"N", res.N_list[i]},
                          {"F_U", res.median_F_U[i]},
                          {"F_cm", res.median_F_cm[i]},
                          {"F_rel_over_F_U", res.median_ratio_rel[i]}});
    rec.summary = {{"alpha_U", res.alpha_U}, {"alpha_cm", res.alpha_cm}, {"medians", ratios}};
    const std::string path = dir + "/scaling.json";
    std::ofstream(path) << rec.summary.dump(2) << "\n";
    rec.outputs.push_back(path);
    // log-log medians with fitted-line overlays
    {
        Series s_u{"F_U_median", {}, {}}, s_cm{"F_cm_median", {}, {}},
            s_uf{"F_U_fit", {}, {}}, s_cmf{"F_cm_fit", {}, {}};
        double anchor_u = res.median_F_U.front(), anchor_cm = res.median_F_cm.front();
        for (std::size_t i = 0; i < res.N_list.size(); ++i) {
            const double lx = std::log10(static_cast<double>(res.N_list[i]));
            s_u.x.push_back(lx);
            s_u.y.push_back(std::log10(res.median_F_U[i]));
            s_cm.x.push_back(lx);
            s_cm.y.push_back(std::log10(res.median_F_cm[i]));
            const double lx0 = std::log10(static_cast<double>(res.N_list[0]));
            s_uf.x.push_back(lx);
            s_uf.y.push_back(std::log10(anchor_u) + res.alpha_U * (lx - lx0));
            s_cmf.x.push_back(lx);
            s_cmf.y.push_back(std::log10(anchor_cm) + res.alpha_cm * (lx - lx0));
        }
        const std::string csv = dir + "/scaling_loglog.csv";
        write_series_csv(csv, {s_u, s_uf, s_cm, s_cmf});
        rec.outputs.push_back(csv);
    }
    rec.checks.emplace_back("alpha_U within 1 +- 0.05", std::abs(res.alpha_U - 1.0) < 0.05);
    rec.checks.emplace_back("alpha_cm within 0.5 +- 0.1", std::abs(res.alpha_cm - 0.5) < 0.1);
    return rec;
}

RunRecord run_cat(const ExperimentConfig& cfg, const std::string& dir) {
    RunRecord rec;
    CatParams cat;
    cat.sigma = param(cfg, "sigma", 0.5);
    cat.L = param(cfg, "L", 10.0);
    cat.M = param(cfg, "M", 1.0);
    ProbeParams probe;
    probe.speed = param(cfg, "probe_speed", 1.0);
    probe.half_window = param(cfg, "half_window", 50.0);
    const std::string mode_s =
        cfg.params.contains("mode") ? cfg.params.at("mode").get<std::string>() : "two_channel";
    CatMode mode = mode_s == "meanfield"    ? CatMode::MeanField
                   : mode_s == "stochastic" ? CatMode::Stochastic
                                            : CatMode::TwoChannel;
    const int trials = static_cast<int>(param(cfg, "trials", 10000));
    const Grid g = make_grid(1, cfg.grid_points, cfg.grid_extent);
    NoiseKernelSpec noise;
    noise.sigma_s = param(cfg, "sigma_s", 4.0 * g.spacing(0));
    noise.tau_s = param(cfg, "tau_s", 0.1);
    auto res = cat_probe(cat, probe, mode, g, cfg.constants, param(cfg, "eps", 0.25), trials,
                         cfg.seed_root, &noise);
    const std::string path = dir + "/cat_deflections.csv";
    std::ofstream out(path);
    out << "trial,deflection\n";
    char buf[80];
    for (std::size_t i = 0; i < res.deflections.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, res.deflections[i]);
        out << buf;
    }
    out.close();
    rec.outputs.push_back(path);
    rec.summary = {{"mode", mode_s},
                   {"left_fraction", res.left_fraction},
                   {"mean_deflection", res.mean_deflection},
                   {"std_deflection", res.std_deflection},
                   {"single_source_impulse", res.single_source_impulse}};
    if (mode == CatMode::TwoChannel)
        rec.checks.emplace_back("left fraction 0.5 +- 0.015",
                                std::abs(res.left_fraction - 0.5) < 0.015);
    if (mode == CatMode::MeanField)
        rec.checks.emplace_back("midline deflection < 1e-12",
                                std::abs(res.mean_deflection) < 1e-12);
    return rec;
}

RunRecord run_sn_ground(const ExperimentConfig& cfg, const std::string& dir) {
    RunRecord rec;
    const Grid g = make_grid(1, cfg.grid_points, cfg.grid_extent);
    MeanFieldSpec spec;
    spec.kernel = SourceKernel::Gravity;
    spec.coupling_n = param(cfg, "coupling_n", 20.0);
    MeanFieldSolver solver(g, cfg.constants, spec);
    auto seed_state = WaveState::full_grid(g, gaussian_packet_1d(g, 0.0, 2.0, 0.0));
    auto gs = solver.ground_state(std::move(seed_state), param(cfg, "tol", 1e-10));
    const std::string path = dir + "/sn_ground.zsmf";
    write_zsmf(path, g, gs.state.psi);
    rec.outputs.push_back(path);
    rec.summary = {{"energy", gs.energy}, {"iterations", gs.iterations}};
    rec.checks.emplace_back("imaginary time converged", gs.iterations > 0);
    return rec;
}

RunRecord run_classical_nls(const ExperimentConfig& cfg, const std::string& dir) {
    RunRecord rec;
    const Grid g = make_grid(1, cfg.grid_points, cfg.grid_extent);
    ClassicalNls solver(g, cfg.constants.mass(0), cfg.constants.hbar);
    auto psi = WaveState::full_grid(g, gaussian_packet_1d(g, 0.0, param(cfg, "sigma0", 1.0),
                                                          param(cfg, "k0", 1.0)));
    dvec v_ext(g.size(), 0.0);
    if (cfg.has_potential) {
        v_ext = cfg.potential.sample_full(g, cfg.constants);
    } else {
        const double slope = param(cfg, "slope", 0.0);
        for (int i = 0; i < g.points(0); ++i)
            v_ext[i] = slope * g.coord(0, i);
    }
    const double T = param(cfg, "T", 20.0);
    const double dt = param(cfg, "dt", 2e-3);
    const long steps = std::lround(T / dt);
    const int chunks = 50;
    std::vector<double> ts, widths, centers;
    ts.push_back(0);
    widths.push_back(packet_width(g, psi.psi));
    centers.push_back(packet_center(g, psi.psi));
    for (int ch = 0; ch < chunks; ++ch) {
        solver.evolve(psi, v_ext, dt, steps / chunks);
        ts.push_back(psi.time);
        widths.push_back(packet_width(g, psi.psi));
        centers.push_back(packet_center(g, psi.psi));
    }
    const std::string path = dir + "/classical_nls_width.csv";
    std::ofstream out(path);
    out << "t,width,center\n";
    char buf[120];
    for (std::size_t i = 0; i < ts.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", ts[i], widths[i], centers[i]);
        out << buf;
    }
    out.close();
    rec.outputs.push_back(path);
    double wmax = 0;
    for (double w : widths)
        wmax = std::max(wmax, std::abs(w - widths[0]) / widths[0]);
    rec.summary = {{"max_rel_width_drift", wmax}};
    rec.checks.emplace_back("width drift < 1%", wmax < 0.01);
    return rec;
}

RunRecord run_equilibrium(const ExperimentConfig& cfg, const std::string& dir) {
    RunRecord rec;
    const Grid g = make_grid(1, cfg.grid_points, cfg.grid_extent);
    Constants c = cfg.constants;
    PotentialSpec pot;
    if (cfg.has_potential) {
        pot = cfg.potential;
    } else {
        ExternalTerm t;
        t.kind = ExternalTerm::Kind::Harmonic;
        t.omega = 1.0;
        pot.external_terms.push_back(t);
    }
    auto psi = WaveState::full_grid(
        g, gaussian_packet_1d(g, param(cfg, "x0", 2.0), std::sqrt(0.5), 0.0));
    SplitStepper stepper(g, {c.mass(0)}, c.hbar);
    const dvec v = pot.sample_full(g, c);
    const double dt = param(cfg, "dt", 5e-3);
    // dense drift snapshots keep the sampler's time interpolation honest for
    // moving states
    const int snaps = static_cast<int>(param(cfg, "snapshots", 97));
    const long per =
        std::max<long>(1, std::lround(param(cfg, "T", 4.8) / dt) / (snaps - 1));
    std::vector<WaveState> states;
    states.push_back(psi);
    for (int s = 1; s < snaps; ++s) {
        stepper.evolve(psi, v, dt, per);
        states.push_back(psi);
    }
    auto drift = DriftSnapshots::from_states(states, c.mass(0), c.hbar);
    auto ens = sample_forward(drift, static_cast<int>(param(cfg, "walkers", 10000)), dt / 2.0,
                              cfg.seed_root, c);
    const std::string path = dir + "/equilibrium_ks.csv";
    std::ofstream out(path);
    out << "t,ks\n";
    double worst = 0.0;
    for (int s = 0; s < snaps; s += 8) {
        const double ks = ks_distance(drift, s, ens);
        worst = std::max(worst, ks);
        char buf[80];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", drift.times[s], ks);
        out << buf;
    }
    out.close();
    rec.outputs.push_back(path);
    {
        std::vector<double> frame_times;
        std::vector<std::vector<std::vector<double>>> frames;
        for (int s = 0; s < snaps; s += 24) {
            frame_times.push_back(drift.times[s]);
            // cap the persisted walkers; the CSV is a sample, not the store
            const int keep = std::min(ens.n_walkers, 2000);
            frames.emplace_back(ens.positions[s].begin(), ens.positions[s].begin() + keep);
        }
        const std::string traj_path = dir + "/equilibrium_walkers.csv";
        write_trajectories_csv(traj_path, frame_times, frames);
        rec.outputs.push_back(traj_path);
    }
    {
        // final-frame empirical density histogram on the run grid
        dvec hist(g.size(), 0.0);
        const auto& last = ens.positions.back();
        const double dx = g.spacing(0);
        for (const auto& xw : last) {
            const double f = (g.wrap(0, xw[0]) - g.origin(0)) / dx + 0.5;
            const int i = std::clamp(static_cast<int>(f), 0, g.points(0) - 1);
            hist[i] += 1.0 / (static_cast<double>(last.size()) * dx);
        }
        const std::string dens_path = dir + "/equilibrium_density.zsmf";
        write_zsmf(dens_path, g, hist);
        rec.outputs.push_back(dens_path);
    }
    rec.summary = {{"worst_ks", worst}};
    rec.checks.emplace_back("KS < 0.02 at all snapshots", worst < 0.02);
    return rec;
}

RunRecord run_vlasov(const ExperimentConfig& cfg, const std::string& dir) {
    RunRecord rec;
    const Grid g = make_grid(1, cfg.grid_points, cfg.grid_extent);
    const int K = static_cast<int>(param(cfg, "K", 2000));
    dvec rho0(g.size());
    for (int i = 0; i < g.points(0); ++i) {
        const double x = g.coord(0, i);
        rho0[i] = std::exp(-x * x / (2.0 * 4.0));
    }
    auto xs = cold_stream_positions(g, rho0, K);
    std::vector<double> ps(K);
    const double p0 = param(cfg, "p0", 0.6);
    for (int i = 0; i < K; ++i)
        ps[i] = (i % 2 == 0) ? p0 : -p0;
    VlasovConfig vc;
    vc.mass = param(cfg, "mass", 1.0);
    vc.dt = param(cfg, "dt", 5e-3);
    vc.T = param(cfg, "T", 4.0);
    auto res = vlasov_poisson_evolve(g, xs, ps, vc, cfg.constants);
    const std::string path = dir + "/vlasov_energy.csv";
    std::ofstream out(path);
    out << "t,kinetic,potential,total\n";
    char buf[160];
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", res.times[i], res.kinetic[i],
                      res.potential[i], res.total[i]);
        out << buf;
    }
    out.close();
    rec.outputs.push_back(path);
    double drift = 0.0;
    for (double e : res.total)
        drift = std::max(drift, std::abs(e - res.total.front()) /
                                    std::max(1e-300, std::abs(res.total.front())));
    rec.summary = {{"energy_drift_rel", drift}};
    rec.checks.emplace_back("energy conserved within 1%", drift < 0.01);
    return rec;
}

RunRecord run_crossing(const ExperimentConfig& cfg, const std::string& dir) {
    RunRecord rec;
    auto rep = crossing_demo(cfg.constants, param_flag(cfg, "zero_momentum", false));
    const std::string path = dir + "/crossing_exact.csv";
    std::ofstream out(path);
    out << "t,exact_left,exact_right\n";
    char buf[160];
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", rep.times[i], rep.exact_left[i],
                      rep.exact_right[i]);
        out << buf;
    }
    out.close();
    rec.outputs.push_back(path);
    const std::string cm_path = dir + "/crossing_cm.csv";
    std::ofstream out_cm(cm_path);
    out_cm << "index,cm_left,cm_right\n";
    for (std::size_t i = 0; i < rep.cm_left.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i, rep.cm_left[i], rep.cm_right[i]);
        out_cm << buf;
    }
    out_cm.close();
    rec.outputs.push_back(cm_path);
    rec.summary = {{"exact_min_separation", rep.exact_min_separation},
                   {"exact_crossed", rep.exact_crossed},
                   {"cm_crossed", rep.cm_crossed}};
    rec.checks.emplace_back("exact mean trajectories do not cross", !rep.exact_crossed);
    return rec;
}

RunRecord run_corrections(const ExperimentConfig& cfg, const std::string& dir) {
    RunRecord rec;
    const Grid g = make_grid(2, cfg.grid_points, cfg.grid_extent);
    cvec pair(g.size());
    const double s1 = param(cfg, "sigma1", 1.0), s2 = param(cfg, "sigma2", 1.0);
    const double k1 = param(cfg, "k1", 0.0), k2 = param(cfg, "k2", 0.0);
    for (int i = 0; i < g.points(0); ++i)
        for (int j = 0; j < g.points(1); ++j) {
            const double x1 = g.coord(0, i), x2 = g.coord(1, j);
            pair[static_cast<std::size_t>(i) * g.points(1) + j] =
                std::exp(-x1 * x1 / (4 * s1 * s1) - x2 * x2 / (4 * s2 * s2)) *
                std::polar(1.0, k1 * x1 + k2 * x2);
        }
    normalize_field(g, pair);
    auto st = WaveState::full_grid(g, pair);
    auto corr = nonlinear_corrections(st, cfg.constants);
    for (const auto& [name, field] : corr.terms) {
        std::string fname = name;
        for (auto& ch : fname)
            if (ch == '*' || ch == '/')
                ch = '_';
        const std::string path = dir + "/" + fname + ".zsmf";
        write_zsmf(path, g, field);
        rec.outputs.push_back(path);
    }
    rec.summary = {{"leading_ratio", corr.leading_ratio}};
    rec.checks.emplace_back("corrections finite", std::isfinite(corr.leading_ratio));
    return rec;
}

RunRecord run_stochastic_sn(const ExperimentConfig& cfg, const std::string& dir) {
    RunRecord rec;
    const Grid g = make_grid(1, cfg.grid_points, cfg.grid_extent);
    MeanFieldSpec spec;
    spec.coupling_n = param(cfg, "coupling_n", 10.0);
    MeanFieldSolver solver(g, cfg.constants, spec);
    NoiseKernelSpec noise;
    noise.sigma_s = param(cfg, "sigma_s", 4.0 * g.spacing(0));
    noise.tau_s = param(cfg, "tau_s", 0.05);
    noise.amplitude = param(cfg, "amplitude", 1.0);
    auto chi = WaveState::full_grid(g, gaussian_packet_1d(g, 0.0, 1.5, 0.0));
    auto rep = stochastic_sn_evolve(solver, chi, noise, param(cfg, "dt", 1e-3),
                                    std::lround(param(cfg, "steps", 2000)), cfg.seed_root);
    rec.summary = {{"norm_drift", rep.evolution.norm_drift},
                   {"realizations", rep.realizations_used}};
    rec.checks.emplace_back("norm conserved to 1e-10", rep.evolution.norm_drift < 1e-10);
    const std::string path = dir + "/stochastic_sn_final.zsmf";
    write_zsmf(path, g, chi.psi);
    rec.outputs.push_back(path);
    return rec;
}

} // namespace

RunRecord run_experiment(const ExperimentConfig& cfg) {
    const std::string dir = resolve_output_dir(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    RunRecord rec;
    if (cfg.experiment == "bohr")
        rec = run_bohr(cfg, dir);
    else if (cfg.experiment == "wallstrom")
        rec = run_wallstrom(cfg, dir);
    else if (cfg.experiment == "cm-experiment")
        rec = run_cm(cfg, dir);
    else if (cfg.experiment == "scaling")
        rec = run_scaling(cfg, dir);
    else if (cfg.experiment == "cat-probe")
        rec = run_cat(cfg, dir);
    else if (cfg.experiment == "sn-ground")
        rec = run_sn_ground(cfg, dir);
    else if (cfg.experiment == "classical-nls")
        rec = run_classical_nls(cfg, dir);
    else if (cfg.experiment == "quantum-equilibrium")
        rec = run_equilibrium(cfg, dir);
    else if (cfg.experiment == "vlasov")
        rec = run_vlasov(cfg, dir);
    else if (cfg.experiment == "crossing")
        rec = run_crossing(cfg, dir);
    else if (cfg.experiment == "stochastic-sn")
        rec = run_stochastic_sn(cfg, dir);
    else if (cfg.experiment == "corrections")
        rec = run_corrections(cfg, dir);
    else
        throw std::invalid_argument("run: unknown experiment " + cfg.experiment);
    rec.experiment = cfg.experiment;
    rec.config_hash = cfg.config_hash();
    rec.code_version = kCodeVersion;
    rec.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.write(dir + "/run_record.json");
    rec.outputs.push_back(dir + "/run_record.json");
    return rec;
}

namespace {

Series extract_series(const RunRecord& record, const std::string& series_name,
                      const std::string& label) {
    if (series_name.empty())
        throw std::invalid_argument("emit_plotdata: empty series request");
    // series are re-derived from the record's first CSV output
    std::string csv;
    for (const auto& o : record.outputs)
        if (o.size() > 4 && o.substr(o.size() - 4) == ".csv") {
            csv = o;
            break;
        }
    if (csv.empty())
        throw std::invalid_argument("emit_plotdata: run has no CSV output");
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (start <= header.size()) {
        auto pos = header.find(',', start);
        if (pos == std::string::npos)
            pos = header.size();
        cols.push_back(header.substr(start, pos - start));
        start = pos + 1;
    }
    int target = -1;
    for (std::size_t i = 1; i < cols.size(); ++i)
        if (cols[i] == series_name)
            target = static_cast<int>(i);
    if (target < 0)
        throw std::invalid_argument("emit_plotdata: unknown series '" + series_name + "'");
    Series s;
    s.label = label;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<double> vals;
        std::size_t p = 0;
        while (p <= line.size() && vals.size() < cols.size()) {
            auto q = line.find(',', p);
            if (q == std::string::npos)
                q = line.size();
            try {
                vals.push_back(std::stod(line.substr(p, q - p)));
            } catch (...) {
                vals.push_back(0.0);
            }
            p = q + 1;
        }
        if (static_cast<int>(vals.size()) > target) {
            s.x.push_back(vals[0]);
            s.y.push_back(vals[target]);
        }
    }
    return s;
}

} // namespace

void emit_plotdata(const RunRecord& record, const std::string& out_dir,
                   const std::string& series_name) {
    Series s = extract_series(record, series_name, series_name);
    write_series_csv(out_dir + "/" + series_name + "_series.csv", {s});
    write_svg_chart(out_dir + "/" + series_name + ".svg", {s},
                    record.experiment + ": " + series_name);
}

void emit_plotdata(const std::vector<std::pair<RunRecord, std::string>>& runs,
                   const std::string& out_dir, const std::string& series_name) {
    std::vector<Series> all;
    for (const auto& [rec, label] : runs)
        all.push_back(extract_series(rec, series_name, label));
    write_series_csv(out_dir + "/" + series_name + "_series.csv", all);
    write_svg_chart(out_dir + "/" + series_name + ".svg", all, series_name);
}

} // namespace zsm
