#include "zsm/kernels.hpp"

#include <cmath>

namespace zsm {
namespace kernels {

void apply_phase(cvec& psi, const dvec& v, double scale) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(psi.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        psi[i] *= std::polar(1.0, -scale * v[i]);
}

void apply_kspace_phase(cvec& psi_hat, const dvec& k2, double scale) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(psi_hat.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        psi_hat[i] *= std::polar(1.0, -scale * k2[i]);
}

void apply_decay(cvec& psi, const dvec& v, double scale) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(psi.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        psi[i] *= std::exp(-scale * v[i]);
}

void density(const cvec& psi, dvec& rho) {
    rho.resize(psi.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(psi.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        rho[i] = std::norm(psi[i]);
}

void axpy(dvec& y, const dvec& x, double a) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

namespace {
double pairwise(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise(x, half) + pairwise(x + half, n - half);
}
} // namespace

double reduce_sum(const dvec& x) {
    return pairwise(x.data(), x.size());
}

double norm_sq(const cvec& psi) {
    dvec rho;
    density(psi, rho);
    return reduce_sum(rho);
}

void em_advance(dvec& x, const dvec& drift, const dvec& noise, double dt) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        x[i] += drift[i] * dt + noise[i];
}

namespace serial {

void apply_phase(cvec& psi, const dvec& v, double scale) {
    for (std::size_t i = 0; i < psi.size(); ++i)
        psi[i] *= std::polar(1.0, -scale * v[i]);
}

void apply_kspace_phase(cvec& psi_hat, const dvec& k2, double scale) {
    for (std::size_t i = 0; i < psi_hat.size(); ++i)
        psi_hat[i] *= std::polar(1.0, -scale * k2[i]);
}

void apply_decay(cvec& psi, const dvec& v, double scale) {
    for (std::size_t i = 0; i < psi.size(); ++i)
        psi[i] *= std::exp(-scale * v[i]);
}

void density(const cvec& psi, dvec& rho) {
    rho.resize(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        rho[i] = std::norm(psi[i]);
}

void axpy(dvec& y, const dvec& x, double a) {
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += a * x[i];
}

double reduce_sum(const dvec& x) {
    return pairwise(x.data(), x.size());
}

double norm_sq(const cvec& psi) {
    dvec rho;
    density(psi, rho);
    return reduce_sum(rho);
}

void em_advance(dvec& x, const dvec& drift, const dvec& noise, double dt) {
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] += drift[i] * dt + noise[i];
}

} // namespace serial
} // namespace kernels
} // namespace zsm
