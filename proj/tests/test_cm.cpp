#include <cmath>

#include "test_harness.hpp"
#include "zsm/cm.hpp"
#include "zsm/evolve.hpp"
#include "zsm/kernels.hpp"
#include "zsm/nelson.hpp"
#include "zsm/rng.hpp"

using namespace zsm;

int main() {
    test::Harness h;
    Constants c;

    // --- cm_transform examples
    {
        auto f = CMFrame::transform({1.0, -1.0});
        h.close("N=2 x_cm", f.x_cm, 0.0, 1e-15);
        const double want = -1.0 - (std::sqrt(2.0) * 0.0 + 1.0) / (std::sqrt(2.0) + 1.0);
        h.close("N=2 y2 per formula", f.y[0], want, 1e-15);

        // round trip at N = 20
        std::vector<double> X(20);
        for (int i = 0; i < 20; ++i)
            X[i] = std::sin(1.7 * i) * 3.0 + 0.3 * i;
        auto fr = CMFrame::transform(X);
        auto back = CMFrame::inverse(fr);
        double err = 0.0;
        for (int i = 0; i < 20; ++i)
            err = std::max(err, std::abs(back[i] - X[i]));
        h.less("transform round trip 1e-14", err, 1e-14);

        auto fe = CMFrame::transform(std::vector<double>(7, 2.5));
        double ymax = 0.0;
        for (double y : fe.y)
            ymax = std::max(ymax, std::abs(y));
        h.less("all-equal X gives y = 0", ymax, 1e-14);
    }

    // --- kinetic-energy invariance under the transform (no cross terms)
    {
        // psi(x1, x2) = phi1(x1) phi2(x2) on a 2D grid; evaluate the same
        // state in (x_cm, y2) coordinates and compare spectral kinetic
        // energies with masses (2m, m).
        const Grid g1 = make_grid(1, 128, 24.0);
        for (int trial = 0; trial < 10; ++trial) {
            auto u = [&](int i) {
                return 2.0 * CounterRng::uniform_at(42, trial, i) - 1.0;
            };
            PacketSpec a{1.0, 1.5 * u(0), 0.8 + 0.3 * std::abs(u(1)), 0.8 * u(2)};
            PacketSpec b{1.0, 1.5 * u(3), 0.8 + 0.3 * std::abs(u(4)), 0.8 * u(5)};
            cvec phi1 = packet_superposition_1d(g1, {a});
            cvec phi2 = packet_superposition_1d(g1, {b});
            const Grid g2 = make_grid(2, 128, 24.0);
            cvec psi_x(g2.size());
            for (int i = 0; i < 128; ++i)
                for (int j = 0; j < 128; ++j)
                    psi_x[static_cast<std::size_t>(i) * 128 + j] = phi1[i] * phi2[j];
            normalize_field(g2, psi_x);
            SplitStepper sx(g2, {1.0, 1.0}, 1.0);
            const double ke_x = sx.kinetic_energy(psi_x);

            // same state sampled in (x_cm, y2): X = inverse(x_cm, y2)
            cvec psi_cm(g2.size());
            const double rt = std::sqrt(2.0);
            for (int i = 0; i < 128; ++i)
                for (int j = 0; j < 128; ++j) {
                    const double x_cm = g2.coord(0, i);
                    const double y2 = g2.coord(1, j);
                    const double aa = x_cm - y2 / (rt * (rt + 1.0));
                    const double x1 = (rt + 1.0) * aa - rt * x_cm;
                    const double x2 = y2 + aa;
                    // evaluate the packets analytically at (x1, x2)
                    auto packval = [&](const PacketSpec& p, double x) {
                        const double dx = x - p.x0;
                        return std::exp(-dx * dx / (4 * p.sigma * p.sigma)) *
                               std::polar(1.0, p.k0 * x);
                    };
                    psi_cm[static_cast<std::size_t>(i) * 128 + j] =
                        packval(a, x1) * packval(b, x2);
                }
            normalize_field(g2, psi_cm);
            SplitStepper scm(g2, {2.0, 1.0}, 1.0);
            const double ke_cm = scm.kinetic_energy(psi_cm);
            h.close_rel("kinetic energy invariant under transform #" + std::to_string(trial),
                        ke_cm, ke_x, 1e-9);
        }
    }

    // --- product of identical real Gaussians: F_rel = 0 exactly
    {
        const Grid g = make_grid(1, 256, 32.0);
        cvec phi = gaussian_packet_1d(g, 0.0, 1.2, 0.0);
        const int N = 8;
        ProductFields fields(g, std::vector<const cvec*>(N, &phi));
        std::vector<double> X = {-1.2, -0.4, 0.1, 0.5, 0.9, 1.4, -0.8, 0.2};
        auto f = force_decomposition_product(fields, X, std::vector<double>(N, 1.0), 1.0,
                                             [](double) { return 0.0; });
        h.less("identical gaussians F_rel = 0", std::abs(f.F_rel), 1e-8);
    }

    // --- linear external slope: F_U = -N g exactly
    {
        const Grid g = make_grid(1, 128, 32.0);
        cvec phi = gaussian_packet_1d(g, 0.0, 1.0, 0.0);
        const int N = 12;
        ProductFields fields(g, std::vector<const cvec*>(N, &phi));
        std::vector<double> X(N, 0.3);
        auto f = force_decomposition_product(fields, X, std::vector<double>(N, 1.0), 1.0,
                                             [](double) { return 0.7; });
        h.close("F_U = -N g", f.F_U, -12 * 0.7, 1e-12);
    }

    // --- force decomposition total equals M times the CM path curvature
    {
        // evolve a packet-pair state, track the h-trajectory CM and compare
        // the centered second difference against (F_U + F_cm + F_rel)/M
        const Grid g = make_grid(1, 1024, 96.0);
        const double slope = 0.05;
        cvec phi = packet_superposition_1d(g, {{1.0, -3.0, 1.0, 0.8}, {0.9, 3.2, 1.2, -0.7}});
        SplitStepper stepper(g, {1.0}, 1.0);
        dvec v_ext(g.size());
        for (int i = 0; i < g.points(0); ++i)
            v_ext[i] = slope * g.coord(0, i);
        const int N = 4;
        std::vector<double> X = {-3.4, -2.7, 2.9, 3.6};
        const double dt = 2e-3;
        Fft fft(g);
        // three consecutive CM positions for the second difference
        std::vector<double> cm_hist;
        std::vector<cvec> psi_hist;
        cvec psi = phi;
        auto vel_at = [&](const cvec& f, double x) {
            cvec d;
            spectral_gradient(fft, f, 0, d);
            const double fx = (g.wrap(0, x) - g.origin(0)) / g.spacing(0);
            const int i0 = static_cast<int>(std::floor(fx));
            const double w = fx - i0;
            const int n = g.points(0);
            const int ia = ((i0 % n) + n) % n, ib = (ia + 1) % n;
            auto vv = [&](int idx) {
                const double rho = std::max(std::norm(f[idx]), 1e-14);
                return (std::conj(f[idx]) * d[idx]).imag() / rho;
            };
            return (1 - w) * vv(ia) + w * vv(ib);
        };
        for (int s = 0; s < 3; ++s) {
            double cm = 0.0;
            for (double x : X)
                cm += x;
            cm_hist.push_back(cm / N);
            psi_hist.push_back(psi);
            // advance trajectories with Heun using fields at t and t+dt
            cvec psi_next = psi;
            stepper.step(psi_next, v_ext, dt);
            for (auto& x : X) {
                const double k1 = vel_at(psi, x);
                const double k2 = vel_at(psi_next, g.wrap(0, x + dt * k1));
                x = g.wrap(0, x + 0.5 * dt * (k1 + k2));
            }
            psi = psi_next;
        }
        const double acc_fd = (cm_hist[2] - 2 * cm_hist[1] + cm_hist[0]) / (dt * dt);
        // forces at the middle configuration
        std::vector<double> X_mid = {-3.4, -2.7, 2.9, 3.6};
        // re-run one step to recover the middle positions
        {
            cvec psi0 = phi;
            cvec psi1 = psi0;
            stepper.step(psi1, v_ext, dt);
            for (auto& x : X_mid) {
                const double k1 = vel_at(psi0, x);
                const double k2 = vel_at(psi1, g.wrap(0, x + dt * k1));
                x = g.wrap(0, x + 0.5 * dt * (k1 + k2));
            }
        }
        ProductFields fields(g, std::vector<const cvec*>(N, &psi_hist[1]));
        auto f = force_decomposition_product(fields, X_mid, std::vector<double>(N, 1.0), 1.0,
                                             [&](double) { return slope; });
        const double acc_force = f.total() / (1.0 * N);
        h.close_rel("CM second difference matches force total", acc_fd, acc_force, 5e-2);
    }

    // --- cm_experiment: monotone error N=1 -> 20 (median over seeds)
    {
        CmExperimentConfig cfg;
        cfg.T = 30.0;
        cfg.dt = 0.02;
        cfg.grid_points = 2048;
        cfg.extent = 256.0;
        std::vector<int> Ns = {1, 5, 20};
        std::vector<double> med;
        for (int N : Ns) {
            std::vector<double> errs;
            for (std::uint64_t seed : {3ULL, 7ULL, 11ULL, 19ULL, 23ULL}) {
                auto c2 = cfg;
                c2.N = N;
                c2.seed = seed;
                errs.push_back(cm_experiment(c2, c).max_error);
            }
            std::sort(errs.begin(), errs.end());
            med.push_back(errs[2]);
        }
        h.record("median max-error non-increasing in N",
                 med[0] >= med[1] - 1e-12 && med[1] >= med[2] - 1e-12,
                 "medians " + std::to_string(med[0]) + " " + std::to_string(med[1]) + " " +
                     std::to_string(med[2]));
    }

    // --- sigma_cm bound
    {
        auto draw_gauss = [&](std::uint64_t i) {
            CounterRng r(1234, i);
            return r.normal();
        };
        auto res = sigma_cm_check(draw_gauss, 1.0, 100, 1000);
        h.record("iid gaussian bound (equality case)", res.pass,
                 "sigma_cm^2 = " + std::to_string(res.sigma_cm_sq));
        h.close_rel("sigma_cm^2 ~ sigma^2/N", res.sigma_cm_sq, 0.01, 0.15);

        // bimodal identical marginals
        auto draw_bimodal = [&](std::uint64_t i) {
            CounterRng r(77, i);
            const double side = r.uniform() < 0.5 ? -2.0 : 2.0;
            return side + 0.5 * r.normal();
        };
        const double sigma_sq_bimodal = 4.0 + 0.25;
        auto res2 = sigma_cm_check(draw_bimodal, sigma_sq_bimodal, 1000, 1000);
        h.record("bimodal bound holds", res2.pass);

        auto res3 = sigma_cm_check(draw_gauss, 1.0, 1, 2000);
        h.close_rel("N=1: sigma_cm^2 = sigma^2", res3.sigma_cm_sq, 1.0, 0.15);
    }

    // --- WFP: single-preparation empirical marginal fills the density
    {
        const Grid g = make_grid(1, 256, 32.0);
        cvec phi = packet_superposition_1d(g, {{1.0, -2.5, 1.0, 0.0}, {1.0, 2.5, 1.0, 0.0}});
        dvec rho;
        kernels::density(phi, rho);
        const int N = 1000;
        auto xs = draw_from_density_1d(g, rho, N, 2024, 9);
        std::sort(xs.begin(), xs.end());
        // KS against the marginal
        dvec cdf(g.size() + 1, 0.0);
        for (int i = 0; i < g.points(0); ++i)
            cdf[i + 1] = cdf[i] + rho[i] * g.spacing(0);
        double ks = 0.0;
        for (int i = 0; i < N; ++i) {
            const double fx = (g.wrap(0, xs[i]) - g.origin(0)) / g.spacing(0);
            const int i0 = std::clamp(static_cast<int>(fx), 0, g.points(0) - 1);
            const double fm = (cdf[i0] + (fx - i0) * (cdf[i0 + 1] - cdf[i0])) / cdf[g.points(0)];
            ks = std::max(ks, std::max(std::abs(fm - double(i) / N),
                                       std::abs(fm - double(i + 1) / N)));
        }
        h.less("single-preparation marginal KS < 0.05 at N=1000", ks, 0.05);
    }

    // --- kbody: two-body crossing without interaction
    {
        KBodyConfig kb;
        kb.masses = {1.0, 1.0};
        kb.x0 = {{-2.0}, {2.0}};
        kb.v0 = {{1.0}, {-1.0}};
        kb.widths = {0.01, 0.01};
        kb.interacting = false;
        kb.dt = 1e-3;
        kb.T = 6.0;
        auto res = kbody_cm_evolve(kb, c);
        const double final_gap = res.positions.back()[0][0] - res.positions.back()[1][0];
        h.less("non-interacting head-on packets cross", 0.0, final_gap);
    }

    // --- crossing demo: exact repels, CM passes, zero-momentum stationary
    {
        auto rep = crossing_demo(c, false);
        h.record("exact superposition trajectories do not cross", !rep.exact_crossed,
                 "min separation " + std::to_string(rep.exact_min_separation));
        h.record("CM packets exchange sides", rep.cm_crossed);
        auto rep0 = crossing_demo(c, true);
        h.less("zero-momentum exact trajectories stay put",
               std::abs(rep0.exact_left.back() + 6.0) + std::abs(rep0.exact_right.back() - 6.0),
               0.05);
        h.record("zero-momentum CM packets stationary", !rep0.cm_crossed);
    }

    // --- kbody width/separation warning
    {
        KBodyConfig kb;
        kb.masses = {1.0, 1.0};
        kb.x0 = {{-0.5}, {0.5}};
        kb.v0 = {{0.0}, {0.0}};
        kb.widths = {0.4, 0.4};
        kb.dt = 1e-3;
        kb.T = 0.01;
        auto res = kbody_cm_evolve(kb, c);
        h.record("width precondition violation warns", res.width_warning);
    }

    return h.summary("large-n-cm");
}
