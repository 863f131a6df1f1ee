#include "zsm/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace zsm {

namespace {
// FFTW's planner is not thread-safe; executions on distinct arrays are.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft::Fft(const Grid& grid) : grid_(grid) {
    std::vector<int> n(grid_.dims());
    for (int a = 0; a < grid_.dims(); ++a)
        n[a] = grid_.points(a);
    cvec scratch(grid_.size());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft(grid_.dims(), n.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft(grid_.dims(), n.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_)
        fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_)
        fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void Fft::forward(cvec& field) const {
    auto* buf = reinterpret_cast<fftw_complex*>(field.data());
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), buf, buf);
}

void Fft::backward(cvec& field) const {
    auto* buf = reinterpret_cast<fftw_complex*>(field.data());
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), buf, buf);
    const double inv = 1.0 / static_cast<double>(field.size());
    for (auto& z : field)
        z *= inv;
}

void spectral_gradient(const Fft& fft, const cvec& field, int axis, cvec& out) {
    const Grid& g = fft.grid();
    out = field;
    fft.forward(out);
    const auto& k = g.wavenumbers(axis);
    // stride pattern of row-major indexing
    std::size_t stride = 1;
    for (int a = g.dims() - 1; a > axis; --a)
        stride *= g.points(a);
    const std::size_t n_axis = g.points(axis);
    const std::size_t block = stride * n_axis;
    const std::size_t total = g.size();
    const int nyq = g.points(axis) / 2;
    for (std::size_t base = 0; base < total; base += block) {
        for (std::size_t i = 0; i < n_axis; ++i) {
            // The Nyquist mode of an even-length grid has no well-defined
            // odd derivative; zero it, standard for spectral differentiation.
            const double ki = (static_cast<int>(i) == nyq) ? 0.0 : k[i];
            const cplx f(0.0, ki);
            for (std::size_t j = 0; j < stride; ++j)
                out[base + i * stride + j] *= f;
        }
    }
    fft.backward(out);
}

void spectral_laplacian(const Fft& fft, const cvec& field, cvec& out) {
    const Grid& g = fft.grid();
    out = field;
    fft.forward(out);
    const std::size_t total = g.size();
    std::vector<std::size_t> strides(g.dims());
    {
        std::size_t s = 1;
        for (int a = g.dims() - 1; a >= 0; --a) {
            strides[a] = s;
            s *= g.points(a);
        }
    }
    for (std::size_t flat = 0; flat < total; ++flat) {
        double k2 = 0.0;
        std::size_t rem = flat;
        for (int a = 0; a < g.dims(); ++a) {
            const std::size_t i = rem / strides[a];
            rem %= strides[a];
            const double ki = g.wavenumbers(a)[i];
            k2 += ki * ki;
        }
        out[flat] *= -k2;
    }
    fft.backward(out);
}

void spectral_gradient(const Fft& fft, const dvec& field, int axis, dvec& out) {
    cvec tmp(field.size());
    for (std::size_t i = 0; i < field.size(); ++i)
        tmp[i] = field[i];
    cvec res;
    spectral_gradient(fft, tmp, axis, res);
    out.resize(field.size());
    for (std::size_t i = 0; i < field.size(); ++i)
        out[i] = res[i].real();
}

void spectral_laplacian(const Fft& fft, const dvec& field, dvec& out) {
    cvec tmp(field.size());
    for (std::size_t i = 0; i < field.size(); ++i)
        tmp[i] = field[i];
    cvec res;
    spectral_laplacian(fft, tmp, res);
    out.resize(field.size());
    for (std::size_t i = 0; i < field.size(); ++i)
        out[i] = res[i].real();
}

cplx fourier_eval(const Fft& fft, const cvec& spectrum, const std::vector<double>& x) {
    cplx v;
    std::vector<cplx> grad;
    fourier_eval_with_gradient(fft, spectrum, x, v, grad);
    return v;
}

void fourier_eval_with_gradient(const Fft& fft, const cvec& spectrum, const std::vector<double>& x,
                                cplx& value, std::vector<cplx>& grad) {
    const Grid& g = fft.grid();
    const int d = g.dims();
    // Per-axis complex exponential tables e^{i k_a (x_a - origin_a)}.
    std::vector<std::vector<cplx>> phase(d);
    for (int a = 0; a < d; ++a) {
        const int n = g.points(a);
        phase[a].resize(n);
        const double xa = x[a] - g.origin(a);
        for (int i = 0; i < n; ++i) {
            const double ki = g.wavenumbers(a)[i];
            phase[a][i] = std::polar(1.0, ki * xa);
        }
    }
    value = cplx(0.0, 0.0);
    grad.assign(d, cplx(0.0, 0.0));
    std::vector<std::size_t> strides(d);
    {
        std::size_t s = 1;
        for (int a = d - 1; a >= 0; --a) {
            strides[a] = s;
            s *= g.points(a);
        }
    }
    const std::size_t total = g.size();
    const double norm = 1.0 / static_cast<double>(total);
    std::vector<int> nyq(d);
    for (int a = 0; a < d; ++a)
        nyq[a] = g.points(a) / 2;
    for (std::size_t flat = 0; flat < total; ++flat) {
        cplx term = spectrum[flat];
        if (term == cplx(0.0, 0.0))
            continue;
        std::size_t rem = flat;
        double kx[8] = {0};
        for (int a = 0; a < d; ++a) {
            const std::size_t i = rem / strides[a];
            rem %= strides[a];
            term *= phase[a][i];
            kx[a] = (static_cast<int>(i) == nyq[a]) ? 0.0 : g.wavenumbers(a)[i];
        }
        term *= norm;
        value += term;
        for (int a = 0; a < d; ++a)
            grad[a] += cplx(0.0, kx[a]) * term;
    }
}

} // namespace zsm
