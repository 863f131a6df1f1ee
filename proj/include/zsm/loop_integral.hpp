#pragma once

#include <functional>
#include <vector>

#include "zsm/fft.hpp"
#include "zsm/madelung.hpp"
#include "zsm/wavefunction.hpp"

namespace zsm {

// A momentum field that can be sampled at arbitrary 2D points. Three
// backings, in decreasing order of accuracy on smooth data:
//  - analytic closed form (e.g. the non-quantized Wallstrom field),
//  - a wavefunction, p = hbar Im(grad psi / psi) with psi and grad psi
//    evaluated by direct Fourier summation (exact for band-limited psi),
//  - grid-sampled per-axis arrays with bilinear interpolation.
class MomentumField {
public:
    using Analytic = std::function<std::vector<double>(const std::vector<double>&)>;

    static MomentumField analytic(int dims, Analytic f);
    static MomentumField from_wavefunction(const WaveState& state, double hbar,
                                           double floor_rel = 1e-12);
    static MomentumField from_grid(const Grid& g, std::vector<dvec> components,
                                   std::vector<bool> floored = {});

    std::vector<double> sample(const std::vector<double>& x) const;
    int dims() const { return dims_; }
    // True if the cell containing x carries a floored-density flag.
    bool in_floored_cell(const std::vector<double>& x) const;

private:
    int dims_ = 2;
    Analytic fn_;
    // wavefunction backing
    std::shared_ptr<Fft> fft_;
    cvec spectrum_;
    double hbar_ = 1.0;
    double floor_abs_ = 0.0;
    bool wave_backed_ = false;
    // grid backing
    bool grid_backed_ = false;
    Grid grid_;
    std::vector<dvec> comp_;
    std::vector<bool> floored_;
};

struct LoopIntegralResult {
    double integral = 0.0;       // contour integral of p . dq
    double winding = 0.0;        // integral / h
    double nearest_int_dist = 0.0;
};

// Trapezoidal quadrature of the circulation along an ordered closed loop
// (first point repeated last). Errors out if the loop touches a flagged
// floored cell, naming the cell.
LoopIntegralResult loop_phase_integral(const MomentumField& p, const std::vector<std::vector<double>>& loop,
                                       double hbar);

// Convenience: an n-point circle loop, closed (n+1 points).
std::vector<std::vector<double>> circle_loop(double cx, double cy, double radius, int n);

} // namespace zsm
