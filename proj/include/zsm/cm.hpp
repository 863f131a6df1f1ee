#pragma once

#include <cstdint>
#include <vector>

#include "zsm/constants.hpp"
#include "zsm/evolve.hpp"
#include "zsm/grid.hpp"
#include "zsm/wavefunction.hpp"

namespace zsm {

// Center-of-mass / relative coordinate transform:
//   x_cm = mean(X),  y_j = x_j - (sqrt(N) x_cm + x_1) / (sqrt(N) + 1), j = 2..N.
// The transform removes kinetic cross terms; CM carries mass N m, each y_j
// carries m.
struct CMFrame {
    int N = 0;
    double x_cm = 0.0;
    std::vector<double> y; // y_2..y_N (size N-1)

    static CMFrame transform(const std::vector<double>& X);
    static std::vector<double> inverse(const CMFrame& f);
};

// Per-particle 1D product state with spectrally computed amplitude fields:
// h = (sqrt rho)' / sqrt rho and g = (sqrt rho)'' / sqrt rho plus their x
// derivatives, interpolated at particle positions.
class ProductFields {
public:
    ProductFields(const Grid& g, const std::vector<const cvec*>& factors, double floor_rel = 1e-10);

    double h(int particle, double x) const { return interp(h_[particle], x); }
    double hp(int particle, double x) const { return interp(hp_[particle], x); }
    double g(int particle, double x) const { return interp(g_[particle], x); }
    double gp(int particle, double x) const { return interp(gp_[particle], x); }
    double v(int particle, double x, double mass, double hbar) const;

    const Grid& grid() const { return grid_; }

private:
    double interp(const dvec& f, double x) const;
    Grid grid_;
    std::vector<dvec> h_, hp_, g_, gp_, vraw_;
};

struct ForceTriple {
    double F_U = 0.0;
    double F_cm = 0.0;
    double F_rel = 0.0;
    int N = 0;
    double total() const { return F_U + F_cm + F_rel; }
};

// Chain-rule evaluation on a product state at particle positions X;
// U'_ext(x) supplied as a callable.
ForceTriple force_decomposition_product(const ProductFields& fields, const std::vector<double>& X,
                                        const std::vector<double>& masses, double hbar,
                                        const std::function<double(double)>& du_ext);

// FullGrid spectral evaluation at one configuration point (N = grid dims).
ForceTriple force_decomposition_fullgrid(const WaveState& state, const std::vector<double>& X,
                                         const std::vector<double>& masses, double hbar,
                                         const std::function<double(double)>& du_ext);

// ----- CM experiment (quantum vs classical CM trajectories) -----

struct CmExperimentConfig {
    int N = 1;
    bool identical = true;       // equal per-particle factors
    double sigma0 = 1.0;         // base packet width
    double packet_sep = 6.0;     // pair separation
    double k0 = 1.5;             // base pair momentum (opposite signs)
    double asym = 0.35;          // randomized width/momentum/weight spread
    double slope = 0.02;         // external linear potential slope
    double T = 30.0;             // total time (natural units)
    double dt = 0.01;
    int grid_points = 2048;
    double extent = 256.0;
    std::uint64_t seed = 1;
    bool disable_quantum_force = false; // F_cm + F_rel off: classical check
    // initial positions: density quantiles (stratified h-ensemble) or iid
    bool stratified = true;
};

struct CmExperimentResult {
    std::vector<double> times;
    std::vector<double> x_quantum;
    std::vector<double> x_classical;
    std::vector<double> error; // |x_q - x_cl| / (|x_cl(T) - x_cl(0)| + sigma0)
    double max_error = 0.0;
    std::string error_definition;
};

CmExperimentResult cm_experiment(const CmExperimentConfig& cfg, const Constants& c);

// ----- force scaling study -----

struct ScalingResult {
    std::vector<int> N_list;
    std::vector<double> median_F_U, median_F_cm, median_ratio_rel;
    double alpha_U = 0.0;
    double alpha_cm = 0.0;
    bool degenerate = false;
};

ScalingResult scaling_study(const std::vector<int>& N_list, int n_seeds, std::uint64_t seed,
                            const Constants& c);

// ----- sigma_cm bound -----

struct SigmaCmResult {
    double sigma_cm_sq = 0.0;
    double bound = 0.0; // sigma^2 / N
    bool pass = false;  // sigma_cm^2 <= 1.1 sigma^2 / N
};

// draw: callable returning one i.i.d. sample of the marginal
SigmaCmResult sigma_cm_check(const std::function<double(std::uint64_t)>& draw, double sigma_sq,
                             int N, int preparations);

// ----- K-body CM packets under mutual softened gravity -----

struct KBodyConfig {
    std::vector<double> masses;
    std::vector<std::vector<double>> x0; // [i][axis]
    std::vector<std::vector<double>> v0;
    std::vector<double> widths; // sigma_cm per packet (diagnostic, advected rigidly)
    double eps = 0.0;
    double coupling = 1.0; // multiplies G
    double dt = 1e-3;
    double T = 10.0;
    bool interacting = true;
};

struct KBodyResult {
    std::vector<double> times;
    std::vector<std::vector<std::vector<double>>> positions; // [time][body][axis]
    bool width_warning = false; // widths not << separations / potential scale
};

KBodyResult kbody_cm_evolve(const KBodyConfig& cfg, const Constants& c);

// ----- trajectory crossing demonstration -----

struct CrossingReport {
    // exact single-particle superposition: mean trajectories on both sides
    double exact_min_separation = 0.0;
    bool exact_crossed = false;
    // effectively-classical CM packets: pass through each other
    bool cm_crossed = false;
    std::vector<double> times;
    std::vector<double> exact_left, exact_right;
    std::vector<double> cm_left, cm_right;
};

CrossingReport crossing_demo(const Constants& c, bool zero_momentum = false);

} // namespace zsm
