#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "zsm/fft.hpp"

namespace zsm {

// Data-parallel inner loops shared by the solvers. Each has an OpenMP
// version (namespace kernels) and a plain-loop reference (kernels::serial);
// both must produce bit-identical results, which the elementwise structure
// guarantees: every iteration writes one element and reductions use a
// fixed-order pairwise tree independent of thread count.
namespace kernels {

// psi[i] *= exp(-i * scale * v[i])
void apply_phase(cvec& psi, const dvec& v, double scale);
// psi_hat[i] *= exp(-i * scale * k2[i])
void apply_kspace_phase(cvec& psi_hat, const dvec& k2, double scale);
// psi[i] *= exp(-scale * v[i])   (imaginary-time decay)
void apply_decay(cvec& psi, const dvec& v, double scale);
// rho[i] = |psi[i]|^2
void density(const cvec& psi, dvec& rho);
// y[i] += a * x[i]
void axpy(dvec& y, const dvec& x, double a);
// Fixed-order pairwise sum; bit-identical for all thread counts.
double reduce_sum(const dvec& x);
// sum of |psi|^2 * w (w may be empty for plain norm^2)
double norm_sq(const cvec& psi);

// One Euler-Maruyama step for a batch of walkers on one axis:
// x[w] += drift[w]*dt + noise[w]; each walker independent.
void em_advance(dvec& x, const dvec& drift, const dvec& noise, double dt);

namespace serial {
void apply_phase(cvec& psi, const dvec& v, double scale);
void apply_kspace_phase(cvec& psi_hat, const dvec& k2, double scale);
void apply_decay(cvec& psi, const dvec& v, double scale);
void density(const cvec& psi, dvec& rho);
void axpy(dvec& y, const dvec& x, double a);
double reduce_sum(const dvec& x);
double norm_sq(const cvec& psi);
void em_advance(dvec& x, const dvec& drift, const dvec& noise, double dt);
} // namespace serial

} // namespace kernels
} // namespace zsm
