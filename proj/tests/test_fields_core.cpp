#include <cmath>

#include "test_harness.hpp"
#include "zsm/fft.hpp"
#include "zsm/grid.hpp"
#include "zsm/loop_integral.hpp"
#include "zsm/madelung.hpp"
#include "zsm/wavefunction.hpp"

using namespace zsm;

namespace {

// 2D vortex state (x + iy)^m * exp(-r^2 / 2 s^2): phase m*phi, numerically
// band-limited on a wide grid.
cvec vortex_state(const Grid& g, int m, double s) {
    cvec psi(g.size());
    for (int i = 0; i < g.points(0); ++i)
        for (int j = 0; j < g.points(1); ++j) {
            const double x = g.coord(0, i), y = g.coord(1, j);
            cplx z(x, y);
            cplx zp(1.0, 0.0);
            for (int k = 0; k < m; ++k)
                zp *= z;
            psi[static_cast<std::size_t>(i) * g.points(1) + j] =
                zp * std::exp(-(x * x + y * y) / (2 * s * s));
        }
    normalize_field(g, psi);
    return psi;
}

} // namespace

int main() {
    test::Harness h;

    // --- make_grid basics
    {
        Grid g = make_grid(1, 8, 8.0);
        h.close("grid spacing 8/8", g.spacing(0), 1.0, 0.0);
        h.close("grid k1 = 2 pi/8", g.wavenumbers(0)[1], 2.0 * M_PI / 8.0, 1e-15);
        h.close("grid k(n/2) Nyquist", g.wavenumbers(0)[4], 2.0 * M_PI / 8.0 * 4, 1e-15);
        h.close("grid k(n-1) = -2 pi/8", g.wavenumbers(0)[7], -2.0 * M_PI / 8.0, 1e-15);

        Grid g2 = make_grid(2, 64, 20.0);
        h.close("grid 2d spacing", g2.spacing(0), 0.3125, 0.0);
        h.close("grid 2d spacing axis 1", g2.spacing(1), 0.3125, 0.0);

        h.expect_throw("grid odd points rejected", [] { make_grid(1, 7, 8.0); });
        h.expect_throw("grid tiny points rejected", [] { make_grid(1, 6, 8.0); });
        h.expect_throw("grid non-positive extent rejected", [] { make_grid(1, 16, 0.0); });
    }

    // --- spectral derivative of a band-limited function
    {
        Grid g = make_grid(1, 64, 2.0 * M_PI);
        Fft fft(g);
        cvec f(g.size()), df;
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            f[i] = std::sin(3.0 * x) + 0.5 * std::cos(7.0 * x);
        }
        spectral_gradient(fft, f, 0, df);
        double err = 0.0;
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            err = std::max(err, std::abs(df[i].real() - (3.0 * std::cos(3.0 * x) -
                                                         3.5 * std::sin(7.0 * x))));
        }
        h.less("spectral gradient matches analytic (1e-10 rel)", err, 1e-10 * 3.5);
    }

    // --- madelung extraction: plane wave
    {
        Grid g = make_grid(1, 64, 16.0);
        Fft fft(g);
        const double k = 2.0 * M_PI / 16.0 * 3; // resolvable mode
        cvec psi(g.size());
        for (int i = 0; i < g.points(0); ++i)
            psi[i] = std::polar(1.0, k * g.coord(0, i));
        normalize_field(g, psi);
        auto st = WaveState::full_grid(g, psi);
        auto f = madelung_extract(st, fft, 1.0, 1.0);
        double verr = 0, uerr = 0, qerr = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            verr = std::max(verr, std::abs(f.v[0][i] - k));
            uerr = std::max(uerr, std::abs(f.u[0][i]));
            qerr = std::max(qerr, std::abs(f.Q[i]));
        }
        h.less("plane wave v = k", verr, 1e-9);
        h.less("plane wave u = 0", uerr, 1e-9);
        h.less("plane wave Q = 0", qerr, 1e-8);
        h.close("plane wave integral rho = 1", f.integral_rho(), 1.0, 1e-10);
    }

    // --- madelung extraction: resting Gaussian, closed forms
    {
        Grid g = make_grid(1, 256, 32.0);
        Fft fft(g);
        const double sig = 1.3;
        cvec psi = gaussian_packet_1d(g, 0.0, sig, 0.0);
        auto st = WaveState::full_grid(g, psi);
        auto f = madelung_extract(st, fft, 1.0, 1.0);
        double uerr = 0, qerr = 0, verr = 0;
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            if (std::abs(x) > 4 * sig)
                continue;
            const double u_exact = -x / (2 * sig * sig); // (hbar/2m) d rho/dx / rho
            const double q_exact =
                1.0 / (4 * sig * sig) - x * x / (8 * sig * sig * sig * sig);
            uerr = std::max(uerr, std::abs(f.u[0][i] - u_exact));
            qerr = std::max(qerr, std::abs(f.Q[i] - q_exact));
            verr = std::max(verr, std::abs(f.v[0][i]));
        }
        h.less("gaussian v = 0", verr, 1e-10);
        h.less("gaussian u = -(hbar/2m) x/sigma^2", uerr, 1e-8);
        h.less("gaussian Q closed form", qerr, 1e-8);
    }

    // --- Q spectral vs central finite differences for HO first excited state
    {
        Grid g = make_grid(1, 512, 24.0);
        Fft fft(g);
        cvec psi(g.size());
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            psi[i] = x * std::exp(-x * x / 2.0); // first excited, node at 0
        }
        normalize_field(g, psi);
        auto st = WaveState::full_grid(g, psi);
        auto f = madelung_extract(st, fft, 1.0, 1.0, 1e-6);
        // independent oracle: central differences of the analytic profile |x| e^{-x^2/2}
        // at a step fine enough for 1e-6 relative accuracy
        const double dx_fd = 5e-4;
        auto sr = [](double x) { return std::abs(x) * std::exp(-x * x / 2.0); };
        double max_rel = 0.0;
        for (int i = 1; i + 1 < g.points(0); ++i) {
            const double x = g.coord(0, i);
            if (std::abs(x) < 0.5 || f.floored[i])
                continue; // away from the node; clamped points carry the flag
            const double lap_fd = (sr(x + dx_fd) - 2 * sr(x) + sr(x - dx_fd)) / (dx_fd * dx_fd);
            const double q_fd = -0.5 * lap_fd / sr(x);
            max_rel = std::max(max_rel, std::abs(f.Q[i] - q_fd) / std::max(1.0, std::abs(q_fd)));
        }
        h.less("HO excited state Q spectral vs finite differences", max_rel, 1e-6);
    }

    // --- loop integral: vortex winding (wavefunction-backed sampler)
    {
        Grid g = make_grid(2, 128, 20.0);
        for (int m : {1, 2, 3}) {
            cvec psi = vortex_state(g, m, 1.0);
            auto st = WaveState::full_grid(g, psi);
            auto field = MomentumField::from_wavefunction(st, 1.0);
            auto loop = circle_loop(0.0, 0.0, 3.0, 256);
            auto r = loop_phase_integral(field, loop, 1.0);
            h.close("vortex winding m = " + std::to_string(m), r.winding, m, 1e-9);
        }
    }

    // --- loop integral: Wallstrom non-quantized field
    {
        // v'_a = 1.5 * (hbar/m r) phi_hat; quadrature of the closed form
        auto field = MomentumField::analytic(2, [](const std::vector<double>& x) {
            const double r2 = x[0] * x[0] + x[1] * x[1];
            const double f = 1.5 / r2;
            return std::vector<double>{-f * x[1], f * x[0]};
        });
        auto loop = circle_loop(0.0, 0.0, 2.0, 512);
        auto r = loop_phase_integral(field, loop, 1.0);
        h.close("wallstrom field circulation 1.5 h", r.winding, 1.5, 1e-9);
        h.close("wallstrom nearest-integer distance", r.nearest_int_dist, 0.5, 1e-9);
    }

    // --- loop integral: constant-phase state -> 0
    {
        auto field = MomentumField::analytic(
            2, [](const std::vector<double>&) { return std::vector<double>{0.0, 0.0}; });
        auto loop = circle_loop(0.5, -0.25, 1.0, 64);
        auto r = loop_phase_integral(field, loop, 1.0);
        h.close("constant phase loop integral", r.integral, 0.0, 1e-15);
    }

    // --- loop through a floored cell errors out naming the cell
    {
        Grid g = make_grid(2, 64, 16.0);
        cvec psi = vortex_state(g, 1, 1.0); // node at origin
        auto st = WaveState::full_grid(g, psi);
        auto field = MomentumField::from_wavefunction(st, 1.0, 1e-4);
        h.expect_throw("loop crossing node cell rejected", [&] {
            // tiny loop hugging the origin node
            auto loop = circle_loop(0.0, 0.0, 0.1, 16);
            loop_phase_integral(field, loop, 1.0);
        });
        h.expect_throw("open loop rejected", [&] {
            std::vector<std::vector<double>> open_path = {{1, 0}, {0, 1}, {-1, 0}};
            loop_phase_integral(field, open_path, 1.0);
        });
    }

    // --- unit circle superposition
    {
        auto r = unit_circle_superposition(2.0, 1.0);
        h.record("k1=2,k2=1 single-valued", r.single_valued);
        h.close("k1=2,k2=1 wrap mismatch", r.wrap_mismatch, 0.0, 1e-12);
        auto r2 = unit_circle_superposition(1.5, 0.0);
        h.record("k1=1.5 multi-valued verdict", !r2.single_valued);
        h.less("k1=1.5 wrap mismatch reported", 0.1, r2.wrap_mismatch);
        auto r3 = unit_circle_superposition(0.7, 0.7);
        h.record("k1=k2 single-valued", r3.single_valued);
        double dmin = 1e300, dmax = 0;
        for (double d : r3.density) {
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
        h.close("k1=k2 uniform density 4 N^2", dmin, 4.0, 1e-12);
        h.close("k1=k2 uniform density max", dmax, 4.0, 1e-12);
    }

    // --- single-valued psi => loop integral lands on integer multiples of h
    {
        Grid g = make_grid(2, 96, 18.0);
        Fft fft(g);
        // superposition with vorticity 2 off-center plus smooth envelope
        cvec psi(g.size());
        for (int i = 0; i < g.points(0); ++i)
            for (int j = 0; j < g.points(1); ++j) {
                const double x = g.coord(0, i), y = g.coord(1, j);
                const cplx z(x - 0.5, y + 0.3);
                psi[static_cast<std::size_t>(i) * g.points(1) + j] =
                    (z * z + cplx(0.2, 0.0)) * std::exp(-(x * x + y * y) / 6.0);
            }
        normalize_field(g, psi);
        auto st = WaveState::full_grid(g, psi);
        auto field = MomentumField::from_wavefunction(st, 1.0);
        auto loop = circle_loop(0.0, 0.0, 3.5, 512);
        auto r = loop_phase_integral(field, loop, 1.0);
        h.less("generic single-valued state: distance to integer winding", r.nearest_int_dist,
               1e-6);
    }

    // --- reassembly reproduces |psi| exactly and the phase gradient
    {
        Grid g = make_grid(1, 128, 20.0);
        Fft fft(g);
        // strictly positive band-limited amplitude: no floored cells anywhere
        cvec psi(g.size());
        for (int i = 0; i < g.points(0); ++i) {
            const double x = g.coord(0, i);
            const double amp = 1.2 + std::cos(2 * M_PI * x / 20.0);
            psi[i] = amp * std::polar(1.0, 0.8 * std::sin(2 * M_PI * x / 20.0));
        }
        normalize_field(g, psi);
        auto st = WaveState::full_grid(g, psi);
        auto f = madelung_extract(st, fft, 1.0, 1.0);
        cvec re = reassemble(f, 1.0);
        double amp_err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            amp_err = std::max(amp_err, std::abs(std::abs(re[i]) - std::abs(psi[i])));
        h.less("reassembly amplitude exact", amp_err, 1e-14);
        auto st2 = WaveState::full_grid(g, re);
        auto f2 = madelung_extract(st2, fft, 1.0, 1.0);
        double gerr = 0.0;
        for (int i = 0; i < g.points(0); ++i)
            if (!f.floored[i])
                gerr = std::max(gerr, std::abs(f2.grad_S[0][i] - f.grad_S[0][i]));
        h.less("reassembly phase gradient within 1e-9", gerr, 1e-9);
    }

    // --- non-finite amplitudes rejected
    {
        Grid g = make_grid(1, 16, 4.0);
        Fft fft(g);
        cvec psi(g.size(), cplx(0.25, 0.0));
        psi[3] = cplx(std::nan(""), 0.0);
        auto st = WaveState::full_grid(g, psi);
        h.expect_throw("non-finite amplitude rejected",
                       [&] { madelung_extract(st, fft, 1.0, 1.0); });
    }

    return h.summary("fields-core");
}
