#include "zsm/corrections.hpp"

#include <cmath>
#include <stdexcept>

#include "zsm/kernels.hpp"

namespace zsm {

CorrectionFields nonlinear_corrections(const WaveState& state, const Constants& c,
                                       double floor_rel) {
    if (state.rep != WaveState::Rep::FullGrid || state.grid.dims() != 2)
        throw std::invalid_argument("nonlinear corrections: two-particle FullGrid state required");
    const Grid& g = state.grid;
    Fft fft(g);
    const std::size_t n = g.size();
    const double m1 = c.mass(0);
    const double m2 = c.masses.size() > 1 ? c.mass(1) : c.mass(0);
    const double hb = c.hbar;
    const double c2 = c.c * c.c;
    const double c4 = c2 * c2;

    dvec rho;
    kernels::density(state.psi, rho);
    double rho_max = 0.0;
    for (double r : rho)
        rho_max = std::max(rho_max, r);
    const double floor = floor_rel * rho_max;

    CorrectionFields out;
    out.floored.assign(n, false);
    dvec rho_eff(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.floored[i] = rho[i] < floor;
        rho_eff[i] = std::max(rho[i], floor);
    }

    // per-axis classical kinetic T_i and quantum kinetic Q_i fields
    dvec T[2], Q[2];
    dvec sqrt_rho(n);
    for (std::size_t i = 0; i < n; ++i)
        sqrt_rho[i] = std::sqrt(rho[i]);
    cvec dpsi;
    for (int a = 0; a < 2; ++a) {
        const double m = a == 0 ? m1 : m2;
        spectral_gradient(fft, state.psi, a, dpsi);
        T[a].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double grad_s = hb * (std::conj(state.psi[i]) * dpsi[i]).imag() / rho_eff[i];
            T[a][i] = grad_s * grad_s / (2.0 * m);
        }
        // lap along one axis only: differentiate twice
        dvec sr_d, sr_dd;
        spectral_gradient(fft, sqrt_rho, a, sr_d);
        spectral_gradient(fft, sr_d, a, sr_dd);
        Q[a].resize(n);
        for (std::size_t i = 0; i < n; ++i)
            Q[a][i] = -(hb * hb / (2.0 * m)) * sr_dd[i] / std::sqrt(rho_eff[i]);
    }

    auto put = [&](const std::string& name, const dvec& f) { out.terms[name] = f; };
    dvec f(n);
    auto combine = [&](const dvec& x, const dvec& y, double scale) {
        for (std::size_t i = 0; i < n; ++i)
            f[i] = scale * x[i] * y[i];
        return f;
    };
    dvec ones(n, 1.0);

    put("m1*T2/c2", combine(ones, T[1], m1 / c2));
    put("m1*Q2/c2", combine(ones, Q[1], m1 / c2));
    put("m2*T1/c2", combine(ones, T[0], m2 / c2));
    put("m2*Q1/c2", combine(ones, Q[0], m2 / c2));
    put("T1*T2/c4", combine(T[0], T[1], 1.0 / c4));
    put("T1*Q2/c4", combine(T[0], Q[1], 1.0 / c4));
    put("T2*Q1/c4", combine(T[1], Q[0], 1.0 / c4));
    put("Q1*Q2/c4", combine(Q[0], Q[1], 1.0 / c4));

    out.sum.assign(n, 0.0);
    for (const auto& [name, field] : out.terms)
        for (std::size_t i = 0; i < n; ++i)
            out.sum[i] += field[i];
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (!out.floored[i])
            max_abs = std::max(max_abs, std::abs(out.sum[i]));
    out.leading_ratio = max_abs / (m1 * m2);
    return out;
}

} // namespace zsm
