#include <chrono>
#include <cstdio>
#include <vector>

#include <omp.h>

#include "zsm/kernels.hpp"

using namespace zsm;

namespace {

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, dt);
    }
    return best;
}

} // namespace

int main() {
    const std::size_t n = 1 << 21;
    cvec psi(n, cplx(0.7, 0.2));
    dvec v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = 0.3 + 1e-6 * static_cast<double>(i % 1000);
    dvec rho;
    dvec x(1 << 18, 0.0), drift(1 << 18, 0.25), noise(1 << 18, 1e-3);

    std::printf("threads available: %d\n", omp_get_max_threads());
    std::printf("%-22s %12s %12s %8s\n", "kernel", "serial [ms]", "omp [ms]", "speedup");

    struct Row {
        const char* name;
        double serial, parallel;
    };
    std::vector<Row> rows;

    {
        cvec a = psi, b = psi;
        const double ts = time_best_of(5, [&] { kernels::serial::apply_phase(a, v, 0.01); });
        const double tp = time_best_of(5, [&] { kernels::apply_phase(b, v, 0.01); });
        rows.push_back({"apply_phase", ts, tp});
    }
    {
        cvec a = psi, b = psi;
        const double ts = time_best_of(5, [&] { kernels::serial::apply_kspace_phase(a, v, 0.01); });
        const double tp = time_best_of(5, [&] { kernels::apply_kspace_phase(b, v, 0.01); });
        rows.push_back({"apply_kspace_phase", ts, tp});
    }
    {
        const double ts = time_best_of(5, [&] { kernels::serial::density(psi, rho); });
        const double tp = time_best_of(5, [&] { kernels::density(psi, rho); });
        rows.push_back({"density", ts, tp});
    }
    {
        dvec a = v, b = v;
        const double ts = time_best_of(5, [&] { kernels::serial::axpy(a, v, 0.5); });
        const double tp = time_best_of(5, [&] { kernels::axpy(b, v, 0.5); });
        rows.push_back({"axpy", ts, tp});
    }
    {
        dvec a = x, b = x;
        const double ts =
            time_best_of(5, [&] { kernels::serial::em_advance(a, drift, noise, 1e-3); });
        const double tp = time_best_of(5, [&] { kernels::em_advance(b, drift, noise, 1e-3); });
        rows.push_back({"em_advance", ts, tp});
    }

    for (const auto& r : rows)
        std::printf("%-22s %12.3f %12.3f %8.2fx\n", r.name, r.serial * 1e3, r.parallel * 1e3,
                    r.serial / r.parallel);
    return 0;
}
