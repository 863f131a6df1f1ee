#include "zsm/cat_probe.hpp"

#include <cmath>
#include <stdexcept>

#include "zsm/kernels.hpp"
#include "zsm/rng.hpp"
#include "zsm/wavefunction.hpp"

namespace zsm {

cvec cat_state(const Grid& g, const CatParams& cat) {
    return packet_superposition_1d(
        g, {{1.0, -0.5 * cat.L, cat.sigma, 0.0}, {1.0, 0.5 * cat.L, cat.sigma, 0.0}});
}

double single_source_impulse(double G, double probe_mass, double M, double b, double speed,
                             double half_window) {
    // integral of G m M b / (b^2 + v^2 t^2)^{3/2} dt over [-T, T]
    const double T = half_window;
    const double v = speed;
    const double closed = 2.0 * G * probe_mass * M * T / (b * std::sqrt(b * b + v * v * T * T));
    return closed;
}

namespace {

// Transverse force at midline position (lateral offset 0) and longitudinal
// coordinate z from a mass density sampled on the 1D separation axis.
double transverse_force(const Grid& g, const dvec& mass_density, double z, double eps,
                        double G, double probe_mass) {
    double f = 0.0;
    const double vol = g.cell_volume();
    for (int i = 0; i < g.points(0); ++i) {
        const double x = g.coord(0, i);
        const double r2 = x * x + z * z + eps * eps;
        // attractive force component along +x toward the element at x
        f += G * probe_mass * mass_density[i] * vol * x / (r2 * std::sqrt(r2));
    }
    return f;
}

double integrate_deflection(const Grid& g, const dvec& mass_density, const ProbeParams& p,
                            double eps, double G) {
    // impulse approximation along the unperturbed straight path z = v t
    const int n = p.quadrature_points;
    const double dt = 2.0 * p.half_window / (n - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = -p.half_window + i * dt;
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        acc += w * transverse_force(g, mass_density, p.speed * t, eps, G, p.mass);
    }
    return acc * dt;
}

} // namespace

CatProbeResult cat_probe(const CatParams& cat, const ProbeParams& probe, CatMode mode,
                         const Grid& g, const Constants& c, double eps, int n_trials,
                         std::uint64_t seed, const NoiseKernelSpec* noise) {
    if (!(cat.L > 4.0 * cat.sigma))
        throw std::invalid_argument("cat probe: |L| >> sigma violated (need L > 4 sigma)");
    CatProbeResult res;
    res.mode = mode;
    const double b = std::sqrt(0.25 * cat.L * cat.L + eps * eps);
    res.single_source_impulse =
        single_source_impulse(c.G, probe.mass, cat.M, b, probe.speed, probe.half_window);

    cvec chi = cat_state(g, cat);
    dvec rho;
    kernels::density(chi, rho);

    if (mode == CatMode::MeanField) {
        dvec mass_density(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            mass_density[i] = cat.M * rho[i];
        const double d = integrate_deflection(g, mass_density, probe, eps, c.G);
        res.deflections = {d};
        res.mean_deflection = d;
        res.std_deflection = 0.0;
        return res;
    }

    if (mode == CatMode::TwoChannel) {
        // effective collapse surrogate: Bernoulli(1/2) channel choice at probe
        // entry; the probe then feels a single point source of mass M, its
        // transverse impulse integrated along the unperturbed path
        double magnitude = 0.0;
        {
            const int nq = probe.quadrature_points;
            const double dt = 2.0 * probe.half_window / (nq - 1);
            for (int i = 0; i < nq; ++i) {
                const double t = -probe.half_window + i * dt;
                const double w = (i == 0 || i == nq - 1) ? 0.5 : 1.0;
                const double r2 = b * b + probe.speed * probe.speed * t * t;
                magnitude += w * c.G * probe.mass * cat.M * b / (r2 * std::sqrt(r2));
            }
            magnitude *= dt;
        }
        int left = 0;
        res.deflections.resize(n_trials);
        for (int t = 0; t < n_trials; ++t) {
            const bool go_left = CounterRng::uniform_at(seed, 0xCA7C4A11ULL, t) < 0.5;
            if (go_left)
                ++left;
            res.deflections[t] = (go_left ? -1.0 : 1.0) * magnitude;
        }
        res.left_fraction = static_cast<double>(left) / n_trials;
        double mean = 0, var = 0;
        for (double d : res.deflections)
            mean += d;
        mean /= n_trials;
        for (double d : res.deflections)
            var += (d - mean) * (d - mean);
        res.mean_deflection = mean;
        res.std_deflection = std::sqrt(var / std::max(1, n_trials - 1));
        return res;
    }

    // stochastic: meanfield density plus one noise realization per trial
    if (noise == nullptr)
        throw std::invalid_argument("cat probe: stochastic mode needs a noise kernel spec");
    res.deflections.resize(n_trials);
    NoiseField nf = sample_noise(g, chi, cat.M, c, *noise, n_trials, seed);
    for (int t = 0; t < n_trials; ++t) {
        dvec mass_density(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            mass_density[i] = cat.M * rho[i] + nf.realizations[t][i] / (2.0 * c.c * c.c);
        res.deflections[t] = integrate_deflection(g, mass_density, probe, eps, c.G);
    }
    double mean = 0, var = 0;
    for (double d : res.deflections)
        mean += d;
    mean /= n_trials;
    for (double d : res.deflections)
        var += (d - mean) * (d - mean);
    res.mean_deflection = mean;
    res.std_deflection = std::sqrt(var / std::max(1, n_trials - 1));
    return res;
}

} // namespace zsm
