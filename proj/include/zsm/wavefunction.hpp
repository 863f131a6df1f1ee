#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "zsm/constants.hpp"
#include "zsm/fft.hpp"
#include "zsm/grid.hpp"

namespace zsm {

enum class Symmetrization { None, Bosonic };

// Complex amplitude field plus time stamp. FullGrid holds psi over the full
// N*dims tensor grid (desk-scale limit: N*dims <= 3); Product holds one
// per-particle factor per particle, each on its own (usually shared) 1D grid.
struct WaveState {
    enum class Rep { FullGrid, Product };

    Rep rep = Rep::FullGrid;
    double time = 0.0;

    // FullGrid representation
    Grid grid;      // the tensor grid (dims = N*space_dims)
    cvec psi;       // row-major over grid

    // Product representation
    std::vector<Grid> factor_grids;
    std::vector<cvec> factors;
    Symmetrization sym = Symmetrization::None;

    static WaveState full_grid(const Grid& g, cvec amplitudes, double t = 0.0);
    static WaveState product(std::vector<Grid> grids, std::vector<cvec> factors,
                             Symmetrization sym = Symmetrization::None, double t = 0.0);

    std::size_t n_factors() const { return factors.size(); }

    double norm_sq(const Fft& fft) const;          // FullGrid
    void normalize(const Fft& fft);                // FullGrid
    void check_finite() const;
};

// Gaussian packet exp(ik0 x) * exp(-(x-x0)^2 / (4 sigma^2)), density std sigma;
// sampled on a 1D grid and normalized to unit L2 (trapezoid == Riemann on a
// periodic grid).
cvec gaussian_packet_1d(const Grid& g, double x0, double sigma, double k0, double hbar = 1.0);

// Sum of two packets, each (weight, x0, sigma, k0); normalized.
struct PacketSpec {
    double weight = 1.0;
    double x0 = 0.0;
    double sigma = 1.0;
    double k0 = 0.0;
};
cvec packet_superposition_1d(const Grid& g, const std::vector<PacketSpec>& packs, double hbar = 1.0);

void normalize_field(const Grid& g, cvec& psi);

} // namespace zsm
