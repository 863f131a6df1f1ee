#include <omp.h>

#include "test_harness.hpp"
#include "zsm/kernels.hpp"

using namespace zsm;

// The parallel kernels must be bit-identical to the serial reference for any
// thread count; elementwise structure and fixed-order reductions make that a
// hard guarantee, not a tolerance.
int main() {
    test::Harness h;
    const std::size_t n = 100003; // odd size to exercise uneven chunking
    cvec psi(n);
    dvec v(n);
    for (std::size_t i = 0; i < n; ++i) {
        psi[i] = cplx(std::sin(0.01 * i), std::cos(0.003 * i));
        v[i] = 0.25 + 1e-5 * (i % 997);
    }

    for (int threads : {1, 2, 4}) {
        omp_set_num_threads(threads);
        {
            cvec a = psi, b = psi;
            kernels::serial::apply_phase(a, v, 0.01);
            kernels::apply_phase(b, v, 0.01);
            h.record("apply_phase bit-identical @" + std::to_string(threads), a == b);
        }
        {
            cvec a = psi, b = psi;
            kernels::serial::apply_kspace_phase(a, v, 0.02);
            kernels::apply_kspace_phase(b, v, 0.02);
            h.record("apply_kspace_phase bit-identical @" + std::to_string(threads), a == b);
        }
        {
            cvec a = psi, b = psi;
            kernels::serial::apply_decay(a, v, 0.05);
            kernels::apply_decay(b, v, 0.05);
            h.record("apply_decay bit-identical @" + std::to_string(threads), a == b);
        }
        {
            dvec ra, rb;
            kernels::serial::density(psi, ra);
            kernels::density(psi, rb);
            h.record("density bit-identical @" + std::to_string(threads), ra == rb);
        }
        {
            dvec a = v, b = v;
            kernels::serial::axpy(a, v, 1.5);
            kernels::axpy(b, v, 1.5);
            h.record("axpy bit-identical @" + std::to_string(threads), a == b);
        }
        {
            const double sa = kernels::serial::reduce_sum(v);
            const double sb = kernels::reduce_sum(v);
            h.record("reduce_sum bit-identical @" + std::to_string(threads), sa == sb);
        }
        {
            dvec xa(v), xb(v);
            kernels::serial::em_advance(xa, v, v, 1e-3);
            kernels::em_advance(xb, v, v, 1e-3);
            h.record("em_advance bit-identical @" + std::to_string(threads), xa == xb);
        }
    }
    omp_set_num_threads(omp_get_num_procs());
    return h.summary("kernels-parallel");
}
