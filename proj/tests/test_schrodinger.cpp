#include <Eigen/Dense>

#include <cmath>

#include "test_harness.hpp"
#include "zsm/evolve.hpp"
#include "zsm/kernels.hpp"
#include "zsm/potential.hpp"
#include "zsm/wavefunction.hpp"

using namespace zsm;

namespace {

// dense-matrix ground-state oracle: central-difference Hamiltonian on the
// periodic grid, lowest eigenvalue via Eigen
double dense_ground_energy(const Grid& g, const dvec& v, double mass, double hbar) {
    const int n = g.points(0);
    const double dx = g.spacing(0);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    const double t = hbar * hbar / (2.0 * mass * dx * dx);
    for (int i = 0; i < n; ++i) {
        H(i, i) = 2.0 * t + v[i];
        H(i, (i + 1) % n) = -t;
        H((i + 1) % n, i) = -t;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    return es.eigenvalues()(0);
}

double dense_ground_energy_2d(const Grid& g, const dvec& v, double mass, double hbar) {
    const int n = g.points(0);
    const int total = n * n;
    const double dx = g.spacing(0);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(total, total);
    const double t = hbar * hbar / (2.0 * mass * dx * dx);
    auto id = [&](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int a = id(i, j);
            H(a, a) = 4.0 * t + v[a];
            H(a, id(i + 1, j)) -= t;
            H(a, id(i - 1, j)) -= t;
            H(a, id(i, j + 1)) -= t;
            H(a, id(i, j - 1)) -= t;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    return es.eigenvalues()(0);
}

} // namespace

int main() {
    test::Harness h;
    Constants c;

    // --- free Gaussian spreading law
    {
        Grid g = make_grid(1, 512, 80.0);
        const double sig0 = 1.0;
        auto psi = WaveState::full_grid(g, gaussian_packet_1d(g, 0.0, sig0, 0.0));
        PotentialSpec pot;
        const double T = 4.0;
        auto [state, rep] = split_step(std::move(psi), pot, c, 1e-3, 4000);
        double m1 = 0, m2 = 0;
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            const double w = std::norm(state.psi[i]);
            m1 += w * x;
            m2 += w * x * x;
        }
        m1 *= g.cell_volume();
        m2 *= g.cell_volume();
        const double width = std::sqrt(m2 - m1 * m1);
        const double expect = std::sqrt(sig0 * sig0 + T * T / (4.0 * sig0 * sig0));
        h.close_rel("free packet width follows sigma(t)", width, expect, 1e-6);
        h.less("norm drift < 1e-10 per 1e3 steps", rep.norm_drift / 4.0, 1e-10);
    }

    // --- harmonic coherent state: center oscillates, width fixed
    {
        Grid g = make_grid(1, 512, 40.0);
        const double x0 = 2.0, omega = 1.0;
        auto psi = WaveState::full_grid(g, gaussian_packet_1d(g, x0, std::sqrt(0.5), 0.0));
        PotentialSpec pot;
        ExternalTerm t;
        t.kind = ExternalTerm::Kind::Harmonic;
        t.omega = omega;
        pot.external_terms.push_back(t);
        const double T = 2.0 * M_PI; // one period
        auto [state, rep] = split_step(std::move(psi), pot, c, 1e-3, std::lround(T / 1e-3));
        double m1 = 0, m2 = 0;
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            const double w = std::norm(state.psi[i]);
            m1 += w * x;
            m2 += w * x * x;
        }
        m1 *= g.cell_volume();
        m2 *= g.cell_volume();
        h.close("coherent state returns to center", m1, x0, 1e-5);
        h.close_rel("coherent state width constant", std::sqrt(m2 - m1 * m1), std::sqrt(0.5),
                    1e-6);
    }

    // --- time reversal
    {
        Grid g = make_grid(1, 256, 30.0);
        auto psi0 = gaussian_packet_1d(g, -2.0, 1.0, 1.0);
        SplitStepper stepper(g, {1.0}, 1.0);
        dvec v(g.size());
        for (int i = 0; i < g.points(0); ++i)
            v[i] = 0.3 * g.coord(0, i);
        cvec psi = psi0;
        for (int s = 0; s < 500; ++s)
            stepper.step(psi, v, 1e-3);
        for (int s = 0; s < 500; ++s)
            stepper.step(psi, v, -1e-3);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            err += std::norm(psi[i] - psi0[i]);
        err = std::sqrt(err * g.cell_volume());
        h.less("forward then backward returns initial state (L2)", err, 1e-9);
    }

    // --- two-particle softened gravity: energy conservation
    {
        Grid g = make_grid(2, 96, 24.0);
        Constants c2;
        c2.masses = {1.0, 1.0};
        PotentialSpec pot;
        pot.pair.kind = PairKernel::Kind::Gravity;
        pot.pair.eps = 2.0 * g.spacing(0);
        cvec psi(g.size());
        for (int i = 0; i < g.points(0); ++i)
            for (int j = 0; j < g.points(1); ++j) {
                const double x1 = g.coord(0, i), x2 = g.coord(1, j);
                psi[static_cast<std::size_t>(i) * g.points(1) + j] =
                    std::exp(-(x1 + 3) * (x1 + 3) / 2.0 - (x2 - 3) * (x2 - 3) / 2.0);
            }
        normalize_field(g, psi);
        auto state = WaveState::full_grid(g, psi);
        SplitStepper stepper(g, {1.0, 1.0}, 1.0);
        const dvec v = pot.sample_full(g, c2);
        const double e0 = stepper.energy(state.psi, v);
        auto rep = stepper.evolve(state, v, 1e-3, 1000);
        const double e1 = stepper.energy(state.psi, v);
        h.less("two-body energy drift over 1e3 steps", std::abs(e1 - e0) / std::abs(e0), 1e-8);
        h.less("two-body norm drift", rep.norm_drift, 1e-10);
    }

    // --- dt rejection with computed bound
    {
        Grid g = make_grid(1, 64, 16.0);
        SplitStepper stepper(g, {1.0}, 1.0);
        dvec v(g.size(), 0.0);
        v[10] = 4000.0;
        h.expect_throw("over-large dt rejected with bound",
                       [&] { stepper.check_dt(0.01, v); });
    }

    // --- imaginary time: 1D harmonic exact energy
    {
        Grid g = make_grid(1, 256, 24.0);
        PotentialSpec pot;
        ExternalTerm t;
        t.kind = ExternalTerm::Kind::Harmonic;
        t.omega = 1.0;
        pot.external_terms.push_back(t);
        auto gs = imaginary_time_ground(
            WaveState::full_grid(g, gaussian_packet_1d(g, 1.0, 1.4, 0.0)), pot, c, 1e-12, 0.01);
        h.close("harmonic ground energy 0.5", gs.energy, 0.5, 1e-8);
    }

    // --- imaginary time vs dense diagonalization: quartic double well
    {
        Grid g = make_grid(1, 256, 16.0);
        PotentialSpec pot;
        ExternalTerm t;
        t.kind = ExternalTerm::Kind::Sampled;
        t.sampled = [](const std::vector<double>& x) {
            const double q = x[0];
            return 0.5 * (q * q - 2.25) * (q * q - 2.25) / 2.25;
        };
        pot.external_terms.push_back(t);
        auto gs = imaginary_time_ground(
            WaveState::full_grid(g, gaussian_packet_1d(g, 1.2, 0.8, 0.0)), pot, c, 1e-13, 0.005);
        const dvec v = pot.sample_full(g, c);
        const double oracle = dense_ground_energy(g, v, 1.0, 1.0);
        // central differences are 2nd order; agreement at the oracle's accuracy
        h.close_rel("double-well ground energy vs dense oracle", gs.energy, oracle, 1e-3);
    }

    // --- 2-particle softened Coulomb attraction vs coarse dense oracle
    {
        Grid g = make_grid(2, 48, 16.0);
        Constants c2;
        c2.masses = {1.0, 1.0};
        PotentialSpec pot;
        pot.pair.kind = PairKernel::Kind::Coulomb;
        pot.pair.eps = 0.6;
        pot.pair.charges = {1.0, -1.0};
        cvec seed(g.size());
        for (int i = 0; i < g.points(0); ++i)
            for (int j = 0; j < g.points(1); ++j) {
                const double x1 = g.coord(0, i), x2 = g.coord(1, j);
                seed[static_cast<std::size_t>(i) * g.points(1) + j] =
                    std::exp(-(x1 * x1 + x2 * x2) / 4.0 - (x1 - x2) * (x1 - x2) / 4.0);
            }
        normalize_field(g, seed);
        auto gs = imaginary_time_ground(WaveState::full_grid(g, seed), pot, c2, 1e-12, 0.01);
        const dvec v = pot.sample_full(g, c2);
        const double oracle = dense_ground_energy_2d(g, v, 1.0, 1.0);
        h.close_rel("coulomb pair ground energy vs dense oracle", gs.energy, oracle, 1e-2);
    }

    // --- pairwise energy
    {
        Constants cg;
        cg.masses = {2.0, 2.0};
        PairKernel k;
        k.kind = PairKernel::Kind::Gravity;
        k.eps = 0.0;
        const double e = pairwise_energy({{0.0, 0.0}, {3.0, 4.0}}, k, cg);
        h.close_rel("two masses gravity -G m^2/d", e, -2.0 * 2.0 / 5.0, 1e-14);
        k.eps = 1.0;
        const double es = pairwise_energy({{0.0, 0.0}, {3.0, 4.0}}, k, cg);
        h.close_rel("softened pair energy", es, -4.0 / std::sqrt(26.0), 1e-14);

        PairKernel kc;
        kc.kind = PairKernel::Kind::Coulomb;
        kc.eps = 0.1;
        kc.charges = {1.0, -2.0, 0.5};
        Constants cc;
        cc.masses = {1.0, 1.0, 1.0};
        std::vector<std::vector<double>> pos = {{0, 0}, {1.5, 0.2}, {-0.7, 1.1}};
        // brute-force double loop oracle
        double brute = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j)
                    continue;
                const double dx = pos[i][0] - pos[j][0], dy = pos[i][1] - pos[j][1];
                brute += kc.charges[i] * kc.charges[j] /
                         std::sqrt(dx * dx + dy * dy + kc.eps * kc.eps);
            }
        brute *= 0.5;
        h.close_rel("three mixed charges vs brute force", pairwise_energy(pos, kc, cc), brute,
                    1e-14);
        PairKernel k0;
        k0.kind = PairKernel::Kind::Gravity;
        k0.eps = 0.0;
        h.expect_throw("zero separation with eps = 0 rejected",
                       [&] { pairwise_energy({{0, 0}, {0, 0}}, k0, cg); });
    }

    // --- rest-energy flag contributes only a global phase
    {
        Grid g = make_grid(1, 128, 24.0);
        Constants cr;
        cr.c = 3.0;
        PotentialSpec base;
        ExternalTerm t;
        t.kind = ExternalTerm::Kind::Harmonic;
        t.omega = 1.0;
        base.external_terms.push_back(t);
        PotentialSpec with_rest = base;
        with_rest.include_rest_energy = true;
        auto psi0 = gaussian_packet_1d(g, 1.0, 1.0, 0.3);
        const double T = 0.8, dt = 1e-3;
        auto [a, ra] = split_step(WaveState::full_grid(g, psi0), base, cr, dt, std::lround(T / dt));
        auto [b, rb] =
            split_step(WaveState::full_grid(g, psi0), with_rest, cr, dt, std::lround(T / dt));
        cplx overlap(0.0, 0.0);
        for (std::size_t i = 0; i < g.size(); ++i)
            overlap += std::conj(a.psi[i]) * b.psi[i];
        overlap *= g.cell_volume();
        h.close("rest-energy term is a pure global phase (|overlap| = 1)", std::abs(overlap),
                1.0, 1e-10);
        const double expected_phase = -cr.mass(0) * cr.c * cr.c * T; // exp(-i m c^2 T / hbar)
        const double got = std::arg(overlap);
        const double want = std::remainder(expected_phase, 2.0 * M_PI);
        h.close("rest-energy phase advance m c^2 T", std::remainder(got - want, 2.0 * M_PI), 0.0,
                1e-6);
    }

    // --- absorbing strip eats an outgoing packet instead of wrapping it
    {
        Grid g = make_grid(1, 256, 40.0);
        SplitStepper stepper(g, {1.0}, 1.0);
        dvec v(g.size(), 0.0);
        const dvec strip = absorbing_strip(g, 6.0, 4.0);
        cvec psi = gaussian_packet_1d(g, 0.0, 1.0, 3.0); // heading for the edge
        for (int s = 0; s < 8000; ++s)
            stepper.step_absorbing(psi, v, strip, 2e-3);
        const double survived = kernels::norm_sq(psi) * g.cell_volume();
        h.less("absorbing strip removes the packet", survived, 1e-3);
        // reference: without the strip the norm is conserved (packet wraps)
        cvec psi_ref = gaussian_packet_1d(g, 0.0, 1.0, 3.0);
        for (int s = 0; s < 8000; ++s)
            stepper.step(psi_ref, v, 2e-3);
        h.close("no strip: norm conserved", kernels::norm_sq(psi_ref) * g.cell_volume(), 1.0,
                1e-9);
    }

    // --- weak-coupling scale: interaction energy of clustered particles ~ N
    {
        PairKernel k;
        k.kind = PairKernel::Kind::Gravity;
        k.eps = 0.5;
        std::vector<int> Ns = {16, 32, 64, 128, 256};
        std::vector<double> es;
        for (int N : Ns) {
            Constants cn;
            cn.masses.assign(N, 1.0);
            std::vector<std::vector<double>> pos(N);
            for (int i = 0; i < N; ++i) {
                // deterministic cluster on a jittered ring
                const double th = 2.0 * M_PI * i / N;
                pos[i] = {std::cos(th) + 0.1 * std::sin(7 * th), std::sin(th)};
            }
            es.push_back(std::abs(pairwise_energy(pos, k, cn, 1.0 / N)));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < Ns.size(); ++i) {
            const double lx = std::log(Ns[i]), ly = std::log(es[i]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const int n = static_cast<int>(Ns.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        h.close("weak-coupling interaction energy exponent ~1", slope, 1.0, 0.05);
    }

    return h.summary("schrodinger-engine");
}
