#pragma once

#include <string>
#include <vector>

#include "zsm/fft.hpp"
#include "zsm/grid.hpp"

namespace zsm {

// ZSMF binary container: header { magic "ZSMF", version u32, dims u32,
// points[dims] u32, extent[dims] f64 } followed by little-endian f64
// payload, (re, im) pairs for complex fields or plain scalars, row-major.
// Readers distinguish the two by payload size.
inline constexpr std::uint32_t kZsmfVersion = 1;

void write_zsmf(const std::string& path, const Grid& g, const cvec& field);
void write_zsmf(const std::string& path, const Grid& g, const dvec& field);

struct ZsmfContents {
    Grid grid;
    bool is_complex = false;
    cvec complex_field;
    dvec real_field;
};
ZsmfContents read_zsmf(const std::string& path);

// CSV export of a 1D slice: x, value (or x, re, im).
void write_csv_slice(const std::string& path, const Grid& g, const dvec& field);
void write_csv_slice(const std::string& path, const Grid& g, const cvec& field);

// Tidy series CSV: x, y, series label per row.
struct Series {
    std::string label;
    std::vector<double> x, y;
};
void write_series_csv(const std::string& path, const std::vector<Series>& series);

// Walker-ensemble CSV: time, walker, one column per axis.
void write_trajectories_csv(const std::string& path, const std::vector<double>& times,
                            const std::vector<std::vector<std::vector<double>>>& positions);

// Minimal static SVG line chart (polylines, axes box); no external deps.
void write_svg_chart(const std::string& path, const std::vector<Series>& series,
                     const std::string& title);

std::uint64_t file_checksum(const std::string& path); // FNV-1a over bytes

} // namespace zsm
