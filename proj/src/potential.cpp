#include "zsm/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace zsm {

double PairKernel::eval(double r, const Constants& c, int i, int j) const {
    switch (kind) {
    case Kind::None:
        return 0.0;
    case Kind::Gravity: {
        const double soft = std::sqrt(r * r + eps * eps);
        if (soft == 0.0)
            throw std::domain_error("pair kernel: zero separation with eps = 0");
        return -c.G * c.mass(i) * c.mass(j) / soft;
    }
    case Kind::Coulomb: {
        const double soft = std::sqrt(r * r + eps * eps);
        if (soft == 0.0)
            throw std::domain_error("pair kernel: zero separation with eps = 0");
        return c.k_e * charges.at(i) * charges.at(j) / soft;
    }
    case Kind::Sampled:
        return sampled(r);
    }
    return 0.0;
}

void PotentialSpec::validate(int n_particles) const {
    if ((pair.kind == PairKernel::Kind::Gravity || pair.kind == PairKernel::Kind::Coulomb) &&
        !(pair.eps > 0.0))
        throw std::invalid_argument("potential: softening eps must be > 0 for 1/r kernels");
    if (pair.kind == PairKernel::Kind::Coulomb &&
        static_cast<int>(pair.charges.size()) < n_particles)
        throw std::invalid_argument("potential: coulomb kernel needs a charge per particle");
}

double PotentialSpec::external_at(const std::vector<double>& x, int i, const Constants& c) const {
    double v = 0.0;
    for (const auto& t : external_terms) {
        if (t.particle >= 0 && t.particle != i)
            continue;
        switch (t.kind) {
        case ExternalTerm::Kind::Linear:
            for (double xa : x)
                v += t.slope * xa;
            break;
        case ExternalTerm::Kind::Harmonic: {
            const double m = c.mass(i);
            for (double xa : x) {
                const double d = xa - t.center;
                v += 0.5 * m * t.omega * t.omega * d * d;
            }
            break;
        }
        case ExternalTerm::Kind::Sampled:
            v += t.sampled(x);
            break;
        }
    }
    return v;
}

dvec PotentialSpec::sample_full(const Grid& g, const Constants& c) const {
    const int n_particles = g.dims();
    validate(n_particles);
    double rest = 0.0;
    if (include_rest_energy)
        for (int i = 0; i < n_particles; ++i)
            rest += c.mass(std::min<int>(i, static_cast<int>(c.masses.size()) - 1)) * c.c * c.c;
    dvec v(g.size(), rest);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto idx = g.unindex(flat);
        double val = rest;
        for (int i = 0; i < n_particles; ++i)
            val += external_at({g.coord(i, idx[i])}, i, c);
        if (pair.kind != PairKernel::Kind::None) {
            double e = 0.0;
            for (int i = 0; i < n_particles; ++i)
                for (int j = i + 1; j < n_particles; ++j) {
                    const double r = std::abs(g.min_image(i, g.coord(i, idx[i]) - g.coord(j, idx[j])));
                    e += pair.eval(r, c, i, j);
                }
            val += coupling_scale * e;
        }
        v[flat] = val;
    }
    return v;
}

dvec PotentialSpec::sample_one_body(const Grid& g, int i, const Constants& c) const {
    if (g.dims() != 1)
        throw std::invalid_argument("potential: one-body sampling expects a 1D grid");
    dvec v(g.size(), 0.0);
    for (int k = 0; k < g.points(0); ++k)
        v[static_cast<std::size_t>(k)] = external_at({g.coord(0, k)}, i, c);
    return v;
}

double pairwise_energy(const std::vector<std::vector<double>>& positions, const PairKernel& kernel,
                       const Constants& c, double coupling_scale) {
    const int n = static_cast<int>(positions.size());
    double e = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j)
                continue;
            double r2 = 0.0;
            for (std::size_t a = 0; a < positions[i].size(); ++a) {
                const double d = positions[i][a] - positions[j][a];
                r2 += d * d;
            }
            e += kernel.eval(std::sqrt(r2), c, i, j);
        }
    return 0.5 * coupling_scale * e;
}

} // namespace zsm
