#pragma once

#include <vector>

#include "zsm/constants.hpp"
#include "zsm/fft.hpp"
#include "zsm/grid.hpp"
#include "zsm/wavefunction.hpp"

namespace zsm {

// Hydrodynamic fields of a FullGrid state: density, phase gradient,
// current velocity v = grad S / m, osmotic velocity u = (hbar/2m) grad rho / rho,
// and the quantum kinetic Q = -(hbar^2/2m) lap(sqrt rho)/sqrt rho.
// At points where rho < floor_rel * max(rho), the per-point fields are
// evaluated with the floored density and flagged.
struct MadelungFields {
    Grid grid;
    dvec rho;
    std::vector<dvec> grad_S; // per axis
    std::vector<dvec> v;      // per axis
    std::vector<dvec> u;      // per axis
    dvec Q;
    std::vector<bool> floored;
    double rho_floor_used = 0.0;

    double integral_rho() const;
};

// mass: the mass associated with every axis of this grid (single particle,
// or the shared mass of identical particles on a tensor grid).
MadelungFields madelung_extract(const WaveState& state, const Fft& fft, double mass,
                                double hbar, double floor_rel = 1e-12);

// |psi_s|^2 over theta for N (e^{i k1 th} + e^{i k2 th}); reports the density
// profile, whether the superposition is single-valued on the circle
// (k1 - k2 integral), and the density mismatch between theta=0 and 2 pi.
struct UnitCircleResult {
    dvec theta;
    dvec density;  // with N = 1
    bool single_valued = false;
    double wrap_mismatch = 0.0;
};
UnitCircleResult unit_circle_superposition(double k1, double k2, int samples = 512);

// Rebuild sqrt(rho) e^{i S / hbar} from extracted fields, with S recovered by
// line integration of grad_S along axis 0 from the first grid point. The
// reconstruction reproduces |psi| exactly and the phase gradient up to
// quadrature error; absolute phase only up to a constant.
cvec reassemble(const MadelungFields& f, double hbar);

} // namespace zsm
