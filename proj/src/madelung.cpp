#include "zsm/madelung.hpp"

#include <cmath>
#include <stdexcept>

#include "zsm/kernels.hpp"

namespace zsm {

double MadelungFields::integral_rho() const {
    return kernels::reduce_sum(rho) * grid.cell_volume();
}

MadelungFields madelung_extract(const WaveState& state, const Fft& fft, double mass,
                                double hbar, double floor_rel) {
    if (state.rep != WaveState::Rep::FullGrid)
        throw std::invalid_argument("madelung_extract: FullGrid state required");
    if (!(floor_rel > 0.0) || floor_rel > 1e-3)
        throw std::invalid_argument("madelung_extract: floor_rel must be in (0, 1e-3]");
    state.check_finite();

    const Grid& g = state.grid;
    const int d = g.dims();
    const std::size_t n = g.size();

    MadelungFields f;
    f.grid = g;
    kernels::density(state.psi, f.rho);

    double rho_max = 0.0;
    for (double r : f.rho)
        rho_max = std::max(rho_max, r);
    const double floor = floor_rel * rho_max;
    f.rho_floor_used = floor;
    f.floored.assign(n, false);
    dvec rho_eff(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (f.rho[i] < floor) {
            f.floored[i] = true;
            rho_eff[i] = floor;
        } else {
            rho_eff[i] = f.rho[i];
        }
    }

    f.grad_S.resize(d);
    f.v.resize(d);
    f.u.resize(d);
    cvec dpsi;
    for (int a = 0; a < d; ++a) {
        spectral_gradient(fft, state.psi, a, dpsi);
        f.grad_S[a].resize(n);
        f.u[a].resize(n);
        f.v[a].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx cross = std::conj(state.psi[i]) * dpsi[i];
            // Im(grad psi / psi) = Im(conj(psi) grad psi) / |psi|^2
            f.grad_S[a][i] = hbar * cross.imag() / rho_eff[i];
            // grad rho = 2 Re(conj(psi) grad psi)
            f.u[a][i] = (hbar / (2.0 * mass)) * 2.0 * cross.real() / rho_eff[i];
            f.v[a][i] = f.grad_S[a][i] / mass;
        }
    }

    // Q from psi itself: lap(sqrt rho)/sqrt rho = Re(lap psi / psi)
    // + (Im(grad psi / psi))^2, which stays spectrally exact for band-limited
    // psi even where sqrt(rho) has nodal cusps.
    cvec lap_psi;
    spectral_laplacian(fft, state.psi, lap_psi);
    f.Q.resize(n);
    const double qf = -hbar * hbar / (2.0 * mass);
    for (std::size_t i = 0; i < n; ++i) {
        const double re_lap = (std::conj(state.psi[i]) * lap_psi[i]).real() / rho_eff[i];
        double grad_s_sq = 0.0;
        for (int a = 0; a < d; ++a)
            grad_s_sq += f.grad_S[a][i] * f.grad_S[a][i];
        f.Q[i] = qf * re_lap - grad_s_sq / (2.0 * mass);
    }

    return f;
}

UnitCircleResult unit_circle_superposition(double k1, double k2, int samples) {
    UnitCircleResult r;
    const double dk = k1 - k2;
    r.theta.resize(samples);
    r.density.resize(samples);
    for (int i = 0; i < samples; ++i) {
        const double th = 2.0 * M_PI * i / (samples - 1);
        r.theta[i] = th;
        r.density[i] = 2.0 * (1.0 + std::cos(dk * th));
    }
    const double nearest = std::round(dk);
    r.single_valued = std::abs(dk - nearest) < 1e-12;
    r.wrap_mismatch = std::abs(2.0 * (1.0 + std::cos(0.0)) - 2.0 * (1.0 + std::cos(dk * 2.0 * M_PI)));
    return r;
}

cvec reassemble(const MadelungFields& f, double hbar) {
    const Grid& g = f.grid;
    const int d = g.dims();
    const std::size_t n = g.size();
    Fft fft(g);

    // Spectral anti-gradient: S_hat(k) = -i sum_a k_a ghat_a / |k|^2, exact
    // for single-valued band-limited phase fields; the k = 0 mode (the
    // additive constant of S) is set to zero.
    std::vector<cvec> ghat(d);
    for (int a = 0; a < d; ++a) {
        ghat[a].resize(n);
        for (std::size_t i = 0; i < n; ++i)
            ghat[a][i] = f.grad_S[a][i];
        fft.forward(ghat[a]);
    }
    std::vector<std::size_t> strides(d);
    {
        std::size_t s = 1;
        for (int a = d - 1; a >= 0; --a) {
            strides[a] = s;
            s *= g.points(a);
        }
    }
    cvec shat(n, cplx(0.0, 0.0));
    for (std::size_t flat = 0; flat < n; ++flat) {
        double k2 = 0.0;
        cplx acc(0.0, 0.0);
        std::size_t rem = flat;
        for (int a = 0; a < d; ++a) {
            const std::size_t i = rem / strides[a];
            rem %= strides[a];
            const double ka = g.wavenumbers(a)[i];
            k2 += ka * ka;
            acc += cplx(0.0, -ka) * ghat[a][flat];
        }
        shat[flat] = (k2 > 0.0) ? acc / k2 : cplx(0.0, 0.0);
    }
    fft.backward(shat);

    cvec psi(n);
    for (std::size_t i = 0; i < n; ++i)
        psi[i] = std::sqrt(f.rho[i]) * std::polar(1.0, shat[i].real() / hbar);
    return psi;
}

} // namespace zsm
