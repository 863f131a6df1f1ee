#include "zsm/poisson.hpp"

#include <cmath>
#include <stdexcept>

namespace zsm {

namespace {
double kernel_sign(SourceKernel k, const Constants& c) {
    return k == SourceKernel::Gravity ? -c.G : c.k_e;
}
} // namespace

double PoissonSource::total_weight() const {
    double t = 0.0;
    for (double w : weights)
        t += w;
    return t;
}

double potential_at(const PoissonSource& src, SourceKernel kernel, double eps,
                    const std::vector<double>& x, const Constants& c) {
    if (src.kind == PoissonSource::Kind::Density)
        throw std::invalid_argument("potential_at: point sources only");
    const double s = kernel_sign(kernel, c);
    double phi = 0.0;
    for (std::size_t i = 0; i < src.positions.size(); ++i) {
        double r2 = eps * eps;
        for (std::size_t a = 0; a < x.size(); ++a) {
            const double d = x[a] - src.positions[i][a];
            r2 += d * d;
        }
        phi += s * src.weights[i] / std::sqrt(r2);
    }
    return phi;
}

dvec poisson_solve(const PoissonSource& src, SourceKernel kernel, double eps, const Grid& g,
                   const Constants& c) {
    const double s = kernel_sign(kernel, c);
    dvec phi(g.size(), 0.0);
    if (src.kind != PoissonSource::Kind::Density) {
        for (std::size_t flat = 0; flat < g.size(); ++flat) {
            const auto idx = g.unindex(flat);
            double acc = 0.0;
            for (std::size_t i = 0; i < src.positions.size(); ++i) {
                double r2 = eps * eps;
                for (int a = 0; a < g.dims(); ++a) {
                    const double d = g.min_image(a, g.coord(a, idx[a]) - src.positions[i][a]);
                    r2 += d * d;
                }
                acc += src.weights[i] / std::sqrt(r2);
            }
            phi[flat] = s * acc;
        }
        return phi;
    }
    // density route: periodic convolution with the sampled kernel
    if (src.density.size() != g.size())
        throw std::invalid_argument("poisson: density size does not match grid");
    Fft fft(g);
    cvec rho_hat(g.size()), ker_hat(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        rho_hat[i] = src.density[i];
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto idx = g.unindex(flat);
        double r2 = eps * eps;
        for (int a = 0; a < g.dims(); ++a) {
            const double d = g.min_image(a, g.coord(a, idx[a]) - g.origin(a));
            r2 += d * d;
        }
        ker_hat[flat] = s / std::sqrt(r2);
    }
    fft.forward(rho_hat);
    fft.forward(ker_hat);
    const double vol = g.cell_volume();
    for (std::size_t i = 0; i < g.size(); ++i)
        rho_hat[i] *= ker_hat[i] * vol;
    fft.backward(rho_hat);
    for (std::size_t i = 0; i < g.size(); ++i)
        phi[i] = rho_hat[i].real();
    return phi;
}

dvec poisson_direct_sum(const dvec& density, SourceKernel kernel, double eps, const Grid& g,
                        const Constants& c) {
    const double s = kernel_sign(kernel, c);
    const double vol = g.cell_volume();
    dvec phi(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx_i = g.unindex(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            const auto idx_j = g.unindex(j);
            double r2 = eps * eps;
            for (int a = 0; a < g.dims(); ++a) {
                const double d = g.min_image(a, g.coord(a, idx_i[a]) - g.coord(a, idx_j[a]));
                r2 += d * d;
            }
            acc += density[j] / std::sqrt(r2);
        }
        phi[i] = s * acc * vol;
    }
    return phi;
}

} // namespace zsm
