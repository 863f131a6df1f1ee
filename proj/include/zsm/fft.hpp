#pragma once

#include <complex>
#include <vector>

#include "zsm/grid.hpp"

namespace zsm {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using dvec = std::vector<double>;

// Forward/backward DFT on the tensor grid, FFTW-backed. Transforms run
// single-threaded so results do not depend on the thread count; callers
// parallelize across independent transforms instead. backward() includes
// the 1/size normalization.
class Fft {
public:
    explicit Fft(const Grid& grid);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    const Grid& grid() const { return grid_; }

    void forward(cvec& field) const;
    void backward(cvec& field) const;

private:
    Grid grid_;
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;
};

// Spectral partial derivative along one axis: out = d field / d axis.
void spectral_gradient(const Fft& fft, const cvec& field, int axis, cvec& out);
// Spectral Laplacian over all axes.
void spectral_laplacian(const Fft& fft, const cvec& field, cvec& out);

// Real-field wrappers (real in, real out via complex transform).
void spectral_gradient(const Fft& fft, const dvec& field, int axis, dvec& out);
void spectral_laplacian(const Fft& fft, const dvec& field, dvec& out);

// Evaluate a grid-sampled band-limited field and its gradient at an arbitrary
// point by direct Fourier summation (exact for band-limited data; O(size)
// per point). Used where interpolation error would dominate, e.g. phase-loop
// quadrature.
cplx fourier_eval(const Fft& fft, const cvec& spectrum_unnormalized, const std::vector<double>& x);
void fourier_eval_with_gradient(const Fft& fft, const cvec& spectrum_unnormalized,
                                const std::vector<double>& x, cplx& value, std::vector<cplx>& grad);

} // namespace zsm
