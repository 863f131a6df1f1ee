#include <cmath>

#include "test_harness.hpp"
#include "zsm/kernels.hpp"
#include "zsm/vlasov.hpp"
#include "zsm/wavefunction.hpp"

using namespace zsm;

int main() {
    test::Harness h;
    Constants c;

    // --- cold uniform non-interacting stream: free translation
    {
        const Grid g = make_grid(1, 128, 32.0);
        const int K = 512;
        std::vector<double> xs(K), ps(K, 0.5);
        for (int i = 0; i < K; ++i)
            xs[i] = g.coord(0, (i * g.points(0)) / K);
        VlasovConfig cfg;
        cfg.interacting = false;
        cfg.dt = 1e-2;
        cfg.T = 2.0;
        auto res = vlasov_poisson_evolve(g, xs, ps, cfg, c);
        double err = 0.0;
        for (int i = 0; i < K; ++i)
            err = std::max(err, std::abs(g.min_image(0, res.positions.back()[i] -
                                                            (xs[i] + 0.5 * 2.0))));
        h.less("force-free stream translates", err, 1e-12);
        h.close_rel("density variance invariant", res.var_x.back(), res.var_x.front(), 1e-9);
    }

    // --- two cold counter-streams under gravity: energy bookkeeping
    {
        const Grid g = make_grid(1, 256, 32.0);
        const int K = 4000;
        dvec rho0(g.size());
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            rho0[i] = std::exp(-x * x / 8.0);
        }
        auto xs = cold_stream_positions(g, rho0, K);
        std::vector<double> ps(K);
        for (int i = 0; i < K; ++i)
            ps[i] = (i % 2 == 0) ? 0.4 : -0.4;
        VlasovConfig cfg;
        cfg.dt = 2e-3;
        cfg.T = 3.0;
        cfg.mass = 0.02;
        auto res = vlasov_poisson_evolve(g, xs, ps, cfg, c);
        double drift = 0.0;
        const double scale = std::abs(res.kinetic.front()) + std::abs(res.potential.front());
        for (double e : res.total)
            drift = std::max(drift, std::abs(e - res.total.front()) / scale);
        h.less("counter-stream energy conserved within 1%", drift, 0.01);
    }

    // --- sample moments converge to grid mean-field moments as K doubles
    {
        const Grid g = make_grid(1, 256, 32.0);
        dvec rho0(g.size());
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            rho0[i] = std::exp(-x * x / 4.0);
        }
        // reference: very large K
        // hold the total mass fixed as K grows (weak-coupling scaling)
        const double M_tot = 1.0;
        auto make_run = [&](int K) {
            auto xs = cold_stream_positions(g, rho0, K);
            std::vector<double> ps(K);
            const double m_s = M_tot / K;
            for (int i = 0; i < K; ++i)
                ps[i] = m_s * 0.3 * std::sin(2.0 * M_PI * xs[i] / 32.0);
            VlasovConfig cfg;
            cfg.dt = 2e-3;
            cfg.T = 2.0;
            cfg.mass = m_s;
            return vlasov_poisson_evolve(g, xs, ps, cfg, c);
        };
        auto ref = make_run(32768);
        std::vector<double> errs;
        for (int K : {512, 1024, 2048}) {
            auto r = make_run(K);
            errs.push_back(std::abs(r.var_x.back() - ref.var_x.back()) +
                           std::abs(r.mean_x.back() - ref.mean_x.back()));
        }
        h.record("moment error decreases as K doubles",
                 errs[0] > errs[1] && errs[1] > errs[2],
                 std::to_string(errs[0]) + " > " + std::to_string(errs[1]) + " > " +
                     std::to_string(errs[2]));
        // error at least halves per doubling (stratified sampling)
        h.less("halving trend K 512 -> 1024", errs[1] / errs[0], 0.75);
        h.less("halving trend K 1024 -> 2048", errs[2] / errs[1], 0.75);
    }

    // --- empty samples rejected
    {
        const Grid g = make_grid(1, 64, 16.0);
        VlasovConfig cfg;
        h.expect_throw("empty samples rejected",
                       [&] { vlasov_poisson_evolve(g, {}, {}, cfg, c); });
    }

    return h.summary("vlasov");
}
