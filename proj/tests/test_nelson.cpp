#include <omp.h>

#include <algorithm>
#include <cmath>

#include "test_harness.hpp"
#include "zsm/evolve.hpp"
#include "zsm/kernels.hpp"
#include "zsm/nelson.hpp"
#include "zsm/rng.hpp"

using namespace zsm;

namespace {

std::vector<WaveState> evolve_snapshots(const Grid& g, cvec psi0, const dvec& v, double dt,
                                        long steps_per, int snaps) {
    SplitStepper stepper(g, {1.0}, 1.0);
    auto psi = WaveState::full_grid(g, std::move(psi0));
    std::vector<WaveState> states;
    states.push_back(psi);
    for (int s = 1; s < snaps; ++s) {
        stepper.evolve(psi, v, dt, steps_per);
        states.push_back(psi);
    }
    return states;
}

dvec harmonic_v(const Grid& g) {
    dvec v(g.size());
    for (int i = 0; i < g.points(0); ++i) {
        const double x = g.coord(0, i);
        v[i] = 0.5 * x * x;
    }
    return v;
}

} // namespace

int main() {
    test::Harness h;
    Constants c;

    // --- stationary harmonic ground state: equilibrium holds
    {
        Grid g = make_grid(1, 256, 30.0);
        cvec psi = gaussian_packet_1d(g, 0.0, std::sqrt(0.5), 0.0); // HO ground, v = 0
        auto states = evolve_snapshots(g, psi, harmonic_v(g), 5e-3, 200, 6);
        auto drift = DriftSnapshots::from_states(states, 1.0, 1.0);
        auto ens = sample_forward(drift, 10000, 2.5e-3, 99, c);
        for (int s = 0; s < 6; ++s)
            h.less("ground-state KS at snap " + std::to_string(s),
                   ks_distance(drift, s, ens), 0.02);

        // backward ensemble statistically identical for the stationary state
        auto bens = sample_backward(drift, 10000, 2.5e-3, 123, c);
        for (int s : {0, 3, 5})
            h.less("backward KS at snap " + std::to_string(s), ks_distance(drift, s, bens),
                   0.02);
    }

    // --- plane-wave drift with noise off: exact translation
    {
        Grid g = make_grid(1, 128, 32.0);
        const double k = 2.0 * M_PI / 32.0 * 4;
        cvec psi(g.size());
        for (int i = 0; i < g.points(0); ++i)
            psi[i] = std::polar(1.0, k * g.coord(0, i));
        normalize_field(g, psi);
        // stationary drift field (plane wave is an eigenstate of the free H)
        std::vector<WaveState> states;
        for (int s = 0; s < 3; ++s) {
            auto st = WaveState::full_grid(g, psi);
            st.time = 0.5 * s;
            states.push_back(st);
        }
        auto drift = DriftSnapshots::from_states(states, 1.0, 1.0);
        SampleOptions opt;
        opt.noise_off = true;
        // cap must not bite for this drift
        opt.drift_cap_factor = 100.0;
        auto ens = sample_forward(drift, 32, 0.01, 5, c, opt);
        double err = 0.0;
        for (int w = 0; w < ens.n_walkers; ++w) {
            const double x0 = ens.positions.front()[w][0];
            const double xT = ens.positions.back()[w][0];
            err = std::max(err, std::abs(g.min_image(0, xT - (x0 + k * 1.0))));
        }
        h.less("noise-off walkers translate at v t", err, 1e-9);
    }

    // --- Wiener variance: v = u = 0 forced
    {
        Grid g = make_grid(1, 64, 16.0);
        std::vector<WaveState> states;
        cvec flat(g.size(), cplx(1.0, 0.0));
        normalize_field(g, flat);
        for (int s = 0; s < 3; ++s) {
            auto st = WaveState::full_grid(g, flat);
            st.time = 0.5 * s;
            states.push_back(st);
        }
        auto drift = DriftSnapshots::from_states(states, 1.0, 1.0);
        const int n = 20000;
        auto ens = sample_forward(drift, n, 0.01, 31, c);
        // displacement accumulated over T = 1 (hbar/m = 1)
        double var = 0.0;
        for (int w = 0; w < n; ++w) {
            const double d = g.min_image(0, ens.positions.back()[w][0] -
                                                ens.positions.front()[w][0]);
            var += d * d;
        }
        var /= n;
        const double se = std::sqrt(2.0 / n); // relative SE of a variance estimate
        h.close_rel("wiener displacement variance = (hbar/m) t", var, 1.0, 3.0 * se);
    }

    // --- b - b* = 2u and b + b* = 2v pointwise
    {
        Grid g = make_grid(1, 128, 24.0);
        cvec psi = gaussian_packet_1d(g, 0.5, 1.1, 0.7);
        auto st = WaveState::full_grid(g, psi);
        Fft fft(g);
        auto f = madelung_extract(st, fft, 1.0, 1.0);
        double err_u = 0, err_v = 0;
        for (int i = 0; i < g.points(0); ++i) {
            const double b = f.v[0][i] + f.u[0][i];
            const double bs = f.v[0][i] - f.u[0][i];
            err_u = std::max(err_u, std::abs((b - bs) - 2 * f.u[0][i]));
            err_v = std::max(err_v, std::abs((b + bs) - 2 * f.v[0][i]));
        }
        h.less("b - b* = 2u", err_u, 1e-14);
        h.less("b + b* = 2v", err_v, 1e-14);
    }

    // --- determinism across thread counts (same seed, same ensemble)
    {
        Grid g = make_grid(1, 128, 24.0);
        auto states = evolve_snapshots(g, gaussian_packet_1d(g, 1.0, 1.0, 0.0), harmonic_v(g),
                                       5e-3, 100, 3);
        auto drift = DriftSnapshots::from_states(states, 1.0, 1.0);
        omp_set_num_threads(1);
        auto e1 = sample_forward(drift, 500, 2.5e-3, 777, c);
        omp_set_num_threads(2);
        auto e2 = sample_forward(drift, 500, 2.5e-3, 777, c);
        bool identical = true;
        for (std::size_t t = 0; t < e1.positions.size(); ++t)
            for (int w = 0; w < 500; ++w)
                identical = identical && e1.positions[t][w][0] == e2.positions[t][w][0];
        h.record("ensemble bit-identical across thread counts", identical);
    }

    // --- 2D equilibrium: rejection-sampled walkers track the marginals
    {
        Grid g = make_grid(2, 64, 20.0);
        dvec v(g.size());
        for (int i = 0; i < g.points(0); ++i)
            for (int j = 0; j < g.points(1); ++j) {
                const double x = g.coord(0, i), y = g.coord(1, j);
                v[static_cast<std::size_t>(i) * g.points(1) + j] = 0.5 * (x * x + y * y);
            }
        cvec psi(g.size());
        for (int i = 0; i < g.points(0); ++i)
            for (int j = 0; j < g.points(1); ++j) {
                const double x = g.coord(0, i), y = g.coord(1, j);
                psi[static_cast<std::size_t>(i) * g.points(1) + j] =
                    std::exp(-(x * x + y * y) / 2.0); // ground state, v = 0
            }
        normalize_field(g, psi);
        SplitStepper stepper(g, {1.0, 1.0}, 1.0);
        auto st = WaveState::full_grid(g, psi);
        std::vector<WaveState> states;
        states.push_back(st);
        for (int s = 1; s < 4; ++s) {
            stepper.evolve(st, v, 5e-3, 100);
            states.push_back(st);
        }
        auto drift = DriftSnapshots::from_states(states, 1.0, 1.0);
        auto ens = sample_forward(drift, 4000, 2.5e-3, 404, c);
        // marginal KS on each axis against the exact N(0, 1/2) CDF
        for (int axis = 0; axis < 2; ++axis) {
            std::vector<double> xs(ens.n_walkers);
            for (int w = 0; w < ens.n_walkers; ++w)
                xs[w] = ens.positions.back()[w][axis];
            std::sort(xs.begin(), xs.end());
            double ks = 0.0;
            const double n = static_cast<double>(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double F = 0.5 * (1.0 + std::erf(xs[i]));
                ks = std::max(ks, std::max(std::abs(F - i / n), std::abs(F - (i + 1) / n)));
            }
            h.less("2D walker marginal KS axis " + std::to_string(axis), ks, 0.03);
        }
    }

    // --- mean trajectories: harmonic ground state fixed points
    {
        Grid g = make_grid(1, 256, 30.0);
        cvec psi = gaussian_packet_1d(g, 0.0, std::sqrt(0.5), 0.0);
        auto states = evolve_snapshots(g, psi, harmonic_v(g), 1e-3, 500, 5);
        auto drift = DriftSnapshots::from_states(states, 1.0, 1.0);
        auto ens = mean_trajectories(drift, {{-1.0}, {0.5}, {1.5}}, 1e-3);
        double moved = 0.0;
        for (int w = 0; w < 3; ++w)
            moved = std::max(moved, std::abs(ens.positions.back()[w][0] -
                                             ens.positions.front()[w][0]));
        h.less("ground-state mean trajectories are fixed points", moved, 1e-6);
    }

    // --- free Gaussian: mean trajectory follows the spreading flow
    {
        Grid g = make_grid(1, 512, 60.0);
        const double sig0 = 1.0;
        cvec psi = gaussian_packet_1d(g, 0.0, sig0, 0.0);
        dvec v0(g.size(), 0.0);
        auto states = evolve_snapshots(g, psi, v0, 2e-3, 50, 21); // T = 2
        auto drift = DriftSnapshots::from_states(states, 1.0, 1.0);
        const double x0 = 1.2;
        auto ens = mean_trajectories(drift, {{x0}}, 5e-4);
        const double T = states.back().time;
        const double expect = x0 * std::sqrt(1.0 + T * T / (4.0 * sig0 * sig0 * sig0 * sig0)) /
                              1.0; // sigma(t)/sigma0 with sigma0 = 1
        h.close_rel("free packet mean trajectory ~ x0 sigma(t)/sigma0",
                    ens.positions.back()[0][0], expect, 2e-3);
    }

    // --- two-packet head-on: mean trajectories never cross the midplane
    {
        Grid g = make_grid(1, 1024, 64.0);
        cvec psi = packet_superposition_1d(g, {{1.0, -6.0, 1.0, 1.5}, {1.0, 6.0, 1.0, -1.5}});
        dvec v0(g.size(), 0.0);
        auto states = evolve_snapshots(g, psi, v0, 2e-3, 400, 11); // T = 8
        auto drift = DriftSnapshots::from_states(states, 1.0, 1.0);
        auto ens = mean_trajectories(drift, {{-6.0}, {6.0}}, 1e-3);
        double min_sep = 1e300;
        for (std::size_t t = 0; t < ens.positions.size(); ++t)
            min_sep = std::min(min_sep, ens.positions[t][1][0] - ens.positions[t][0][0]);
        h.less("head-on mean trajectories keep positive separation", 0.0, min_sep);
    }

    // --- mean acceleration residual: free packet, then corrupted Q
    {
        Grid g = make_grid(1, 512, 60.0);
        cvec psi = gaussian_packet_1d(g, 0.0, 1.0, 0.4);
        dvec v0(g.size(), 0.0);
        auto states = evolve_snapshots(g, psi, v0, 1e-3, 20, 101); // T = 2
        auto drift = DriftSnapshots::from_states(states, 1.0, 1.0);
        auto ens = mean_trajectories(drift, {{-0.8}, {0.0}, {0.9}}, 5e-4);
        auto rep = mean_acceleration_residual(drift, v0, ens, 1.0, 1.0);
        h.less("free-particle mean acceleration residual", rep.max_abs, 1e-4);
        auto rep_bad = mean_acceleration_residual(drift, v0, ens, 1.0, 1.0, 2.0);
        h.less("corrupted Q detected (residual grows x50+)", 50.0 * rep.max_abs,
               rep_bad.max_abs + 1e-12);
    }

    // --- harmonic coherent state residual relative to max |grad V|
    {
        Grid g = make_grid(1, 512, 40.0);
        cvec psi = gaussian_packet_1d(g, 2.0, std::sqrt(0.5), 0.0);
        const dvec v = harmonic_v(g);
        auto states = evolve_snapshots(g, psi, v, 1e-3, 20, 101);
        auto drift = DriftSnapshots::from_states(states, 1.0, 1.0);
        auto ens = mean_trajectories(drift, {{1.5}, {2.0}, {2.5}}, 5e-4);
        auto rep = mean_acceleration_residual(drift, v, ens, 1.0, 1.0);
        const double grad_v_max = 20.0; // max |x| on the grid
        h.less("coherent-state residual < 1e-3 of max grad V", rep.max_abs / grad_v_max, 1e-3);
    }

    // --- backward noise-off retraces the forward mean path
    {
        Grid g = make_grid(1, 512, 40.0);
        cvec psi = gaussian_packet_1d(g, 2.0, std::sqrt(0.5), 0.0);
        auto states = evolve_snapshots(g, psi, harmonic_v(g), 1e-3, 250, 9);
        auto drift = DriftSnapshots::from_states(states, 1.0, 1.0);
        // u = 0 only for real states; here compare forward/backward mean flow
        auto fwd = mean_trajectories(drift, {{2.0}}, 2.5e-4);
        // reverse: integrate v backwards from the forward endpoint
        DriftSnapshots rev = drift;
        std::reverse(rev.times.begin(), rev.times.end());
        for (auto& t : rev.times)
            t = states.back().time - t;
        std::reverse(rev.v.begin(), rev.v.end());
        for (auto& vs : rev.v)
            for (auto& va : vs)
                for (auto& x : va)
                    x = -x;
        std::reverse(rev.u.begin(), rev.u.end());
        std::reverse(rev.rho.begin(), rev.rho.end());
        std::reverse(rev.floored.begin(), rev.floored.end());
        auto bwd = mean_trajectories(rev, {{fwd.positions.back()[0]}}, 2.5e-4);
        h.close("noise-off reverse retraces forward path", bwd.positions.back()[0][0], 2.0,
                1e-6);
    }

    return h.summary("nelson-dynamics");
}
