#include "zsm/loop_integral.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zsm {

MomentumField MomentumField::analytic(int dims, Analytic f) {
    MomentumField m;
    m.dims_ = dims;
    m.fn_ = std::move(f);
    return m;
}

MomentumField MomentumField::from_wavefunction(const WaveState& state, double hbar, double floor_rel) {
    if (state.rep != WaveState::Rep::FullGrid)
        throw std::invalid_argument("momentum field: FullGrid state required");
    MomentumField m;
    m.dims_ = state.grid.dims();
    m.wave_backed_ = true;
    m.grid_ = state.grid;
    m.fft_ = std::make_shared<Fft>(state.grid);
    m.spectrum_ = state.psi;
    m.fft_->forward(m.spectrum_);
    m.hbar_ = hbar;
    double rho_max = 0.0;
    for (const auto& z : state.psi)
        rho_max = std::max(rho_max, std::norm(z));
    m.floor_abs_ = floor_rel * rho_max;
    // flag grid cells at or below the density floor
    m.floored_.assign(state.grid.size(), false);
    for (std::size_t i = 0; i < state.grid.size(); ++i)
        m.floored_[i] = std::norm(state.psi[i]) < m.floor_abs_;
    return m;
}

MomentumField MomentumField::from_grid(const Grid& g, std::vector<dvec> components,
                                       std::vector<bool> floored) {
    MomentumField m;
    m.dims_ = g.dims();
    m.grid_backed_ = true;
    m.grid_ = g;
    m.comp_ = std::move(components);
    m.floored_ = std::move(floored);
    return m;
}

std::vector<double> MomentumField::sample(const std::vector<double>& x) const {
    if (fn_)
        return fn_(x);
    if (wave_backed_) {
        cplx psi;
        std::vector<cplx> grad;
        fourier_eval_with_gradient(*fft_, spectrum_, x, psi, grad);
        const double rho = std::max(std::norm(psi), floor_abs_);
        std::vector<double> p(dims_);
        for (int a = 0; a < dims_; ++a)
            p[a] = hbar_ * (std::conj(psi) * grad[a]).imag() / rho;
        return p;
    }
    // bilinear interpolation on the periodic grid
    std::vector<double> p(dims_, 0.0);
    if (dims_ == 1) {
        const double fx = (grid_.wrap(0, x[0]) - grid_.origin(0)) / grid_.spacing(0);
        const int i0 = static_cast<int>(std::floor(fx));
        const double wx = fx - i0;
        const int n = grid_.points(0);
        const int ia = ((i0 % n) + n) % n, ib = (ia + 1) % n;
        p[0] = (1 - wx) * comp_[0][ia] + wx * comp_[0][ib];
        return p;
    }
    const double fx = (grid_.wrap(0, x[0]) - grid_.origin(0)) / grid_.spacing(0);
    const double fy = (grid_.wrap(1, x[1]) - grid_.origin(1)) / grid_.spacing(1);
    const int i0 = static_cast<int>(std::floor(fx));
    const int j0 = static_cast<int>(std::floor(fy));
    const double wx = fx - i0, wy = fy - j0;
    const int nx = grid_.points(0), ny = grid_.points(1);
    const int ia = ((i0 % nx) + nx) % nx, ib = (ia + 1) % nx;
    const int ja = ((j0 % ny) + ny) % ny, jb = (ja + 1) % ny;
    for (int a = 0; a < dims_; ++a) {
        const dvec& c = comp_[a];
        const double v00 = c[static_cast<std::size_t>(ia) * ny + ja];
        const double v01 = c[static_cast<std::size_t>(ia) * ny + jb];
        const double v10 = c[static_cast<std::size_t>(ib) * ny + ja];
        const double v11 = c[static_cast<std::size_t>(ib) * ny + jb];
        p[a] = (1 - wx) * ((1 - wy) * v00 + wy * v01) + wx * ((1 - wy) * v10 + wy * v11);
    }
    return p;
}

bool MomentumField::in_floored_cell(const std::vector<double>& x) const {
    if (floored_.empty())
        return false;
    std::vector<int> idx(dims_);
    for (int a = 0; a < dims_; ++a) {
        const double fa = (grid_.wrap(a, x[a]) - grid_.origin(a)) / grid_.spacing(a);
        idx[a] = static_cast<int>(std::llround(fa));
    }
    return floored_[grid_.index(idx)];
}

namespace {

// Spectral tangent of the sampled closed curve: dq/dtheta from the discrete
// Fourier series of the coordinates. For a curve sampled uniformly in its
// parameter this makes the periodic trapezoid rule spectrally accurate;
// chord differences would leave an O(n^-2) deficit (sin(dtheta)/dtheta).
std::vector<std::vector<double>> curve_tangents(const std::vector<std::vector<double>>& pts,
                                                int dims) {
    const std::size_t n = pts.size();
    std::vector<std::vector<double>> tang(n, std::vector<double>(dims, 0.0));
    for (int a = 0; a < dims; ++a) {
        // DFT by direct sums; loops are a few hundred points
        std::vector<cplx> hat(n, cplx(0, 0));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                hat[k] += pts[j][a] * std::polar(1.0, -2.0 * M_PI * double(k * j) / double(n));
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc(0, 0);
            for (std::size_t k = 0; k < n; ++k) {
                const long kk = (k <= n / 2) ? static_cast<long>(k)
                                             : static_cast<long>(k) - static_cast<long>(n);
                if (static_cast<std::size_t>(std::abs(kk)) == n / 2 && n % 2 == 0)
                    continue; // odd derivative of the Nyquist mode
                acc += cplx(0.0, static_cast<double>(kk)) * hat[k] *
                       std::polar(1.0, 2.0 * M_PI * double(k * j) / double(n));
            }
            tang[j][a] = acc.real() / static_cast<double>(n);
        }
    }
    return tang;
}

} // namespace

LoopIntegralResult loop_phase_integral(const MomentumField& p, const std::vector<std::vector<double>>& loop,
                                       double hbar) {
    if (loop.size() < 4)
        throw std::invalid_argument("loop integral: need at least 4 points");
    const auto& first = loop.front();
    const auto& last = loop.back();
    for (int a = 0; a < p.dims(); ++a)
        if (std::abs(first[a] - last[a]) > 1e-12)
            throw std::invalid_argument("loop integral: loop must be closed (first == last)");

    // drop the duplicated closing point; n uniform parameter samples remain
    std::vector<std::vector<double>> pts(loop.begin(), loop.end() - 1);
    const std::size_t n = pts.size();
    const auto tang = curve_tangents(pts, p.dims());

    double acc = 0.0;
    const double dtheta = 2.0 * M_PI / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s) {
        const auto& x = pts[s];
        if (p.in_floored_cell(x)) {
            std::ostringstream os;
            os << "loop integral: loop crosses floored node cell near (";
            for (int a = 0; a < p.dims(); ++a)
                os << x[a] << (a + 1 < p.dims() ? ", " : ")");
            throw std::runtime_error(os.str());
        }
        const std::vector<double> pv = p.sample(x);
        for (int a = 0; a < p.dims(); ++a) {
            if (!std::isfinite(pv[a]))
                throw std::runtime_error("loop integral: non-finite momentum along loop");
            acc += pv[a] * tang[s][a] * dtheta;
        }
    }
    LoopIntegralResult r;
    r.integral = acc;
    const double h = 2.0 * M_PI * hbar;
    r.winding = acc / h;
    r.nearest_int_dist = std::abs(r.winding - std::round(r.winding));
    return r;
}

std::vector<std::vector<double>> circle_loop(double cx, double cy, double radius, int n) {
    std::vector<std::vector<double>> loop;
    loop.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const double th = 2.0 * M_PI * i / n;
        loop.push_back({cx + radius * std::cos(th), cy + radius * std::sin(th)});
    }
    // exact closure
    loop.back() = loop.front();
    return loop;
}

} // namespace zsm
