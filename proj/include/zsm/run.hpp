#pragma once

#include <string>

#include "zsm/config.hpp"

namespace zsm {

// Execute a named experiment: write data files and the run record into the
// config's output directory (ZSM_OUT or ./out when unset).
RunRecord run_experiment(const ExperimentConfig& cfg);

// Re-emit tidy plot data (and an SVG chart) for a series name produced by a
// finished run. Throws on unknown series.
void emit_plotdata(const RunRecord& record, const std::string& out_dir,
                   const std::string& series_name);

// Combined plot data across several finished runs (one labeled series per
// run), e.g. error-vs-time for the N = 1 and N = 20 experiments.
void emit_plotdata(const std::vector<std::pair<RunRecord, std::string>>& runs,
                   const std::string& out_dir, const std::string& series_name);

std::string resolve_output_dir(const ExperimentConfig& cfg);

} // namespace zsm
