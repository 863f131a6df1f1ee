#include "zsm/wavefunction.hpp"

#include <cmath>
#include <stdexcept>

#include "zsm/kernels.hpp"

namespace zsm {

WaveState WaveState::full_grid(const Grid& g, cvec amplitudes, double t) {
    if (amplitudes.size() != g.size())
        throw std::invalid_argument("wave state: amplitude count does not match grid");
    if (g.dims() > 3)
        throw std::invalid_argument("wave state: FullGrid limited to N*dims <= 3");
    WaveState s;
    s.rep = Rep::FullGrid;
    s.grid = g;
    s.psi = std::move(amplitudes);
    s.time = t;
    return s;
}

WaveState WaveState::product(std::vector<Grid> grids, std::vector<cvec> factors,
                             Symmetrization sym, double t) {
    if (grids.size() != factors.size())
        throw std::invalid_argument("wave state: one grid per factor required");
    for (std::size_t i = 0; i < grids.size(); ++i)
        if (factors[i].size() != grids[i].size())
            throw std::invalid_argument("wave state: factor size does not match its grid");
    WaveState s;
    s.rep = Rep::Product;
    s.factor_grids = std::move(grids);
    s.factors = std::move(factors);
    s.sym = sym;
    s.time = t;
    return s;
}

double WaveState::norm_sq(const Fft&) const {
    return kernels::norm_sq(psi) * grid.cell_volume();
}

void WaveState::normalize(const Fft& fft) {
    const double n = std::sqrt(norm_sq(fft));
    const double inv = 1.0 / n;
    for (auto& z : psi)
        z *= inv;
}

void WaveState::check_finite() const {
    auto scan = [](const cvec& f) {
        for (const auto& z : f)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw std::runtime_error("wave state: non-finite amplitude");
    };
    if (rep == Rep::FullGrid)
        scan(psi);
    else
        for (const auto& f : factors)
            scan(f);
}

void normalize_field(const Grid& g, cvec& psi) {
    double s = kernels::norm_sq(psi) * g.cell_volume();
    const double inv = 1.0 / std::sqrt(s);
    for (auto& z : psi)
        z *= inv;
}

cvec gaussian_packet_1d(const Grid& g, double x0, double sigma, double k0, double hbar) {
    return packet_superposition_1d(g, {{1.0, x0, sigma, k0}}, hbar);
}

cvec packet_superposition_1d(const Grid& g, const std::vector<PacketSpec>& packs, double hbar) {
    if (g.dims() != 1)
        throw std::invalid_argument("packet: 1D grid expected");
    const int n = g.points(0);
    cvec psi(static_cast<std::size_t>(n), cplx(0.0, 0.0));
    for (const auto& p : packs) {
        for (int i = 0; i < n; ++i) {
            const double x = g.coord(0, i);
            const double dx = g.min_image(0, x - p.x0);
            const double amp = p.weight * std::exp(-dx * dx / (4.0 * p.sigma * p.sigma));
            psi[static_cast<std::size_t>(i)] += amp * std::polar(1.0, p.k0 * x / hbar);
        }
    }
    normalize_field(g, psi);
    return psi;
}

} // namespace zsm
