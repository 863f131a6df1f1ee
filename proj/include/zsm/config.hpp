#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "zsm/constants.hpp"
#include "zsm/grid.hpp"
#include "zsm/potential.hpp"

namespace zsm {

using json = nlohmann::json;

// Schema-validated experiment configuration. Unknown keys are rejected and
// type mismatches are reported with their JSON path.
struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed_root = 1;
    std::string output_dir; // resolved against ZSM_OUT when relative/empty
    int grid_dims = 1;
    int grid_points = 256;
    double grid_extent = 32.0;
    Constants constants;
    json params; // experiment-specific block, validated per experiment
    // optional potential block:
    // {"external":[{"kind":"linear","slope":...}],
    //  "pair":{"kind":"gravity","G":...,"eps":...},"coupling_scale":...}
    bool has_potential = false;
    PotentialSpec potential;

    static ExperimentConfig parse(const json& j);
    static ExperimentConfig load(const std::string& path);
    json canonical() const;        // sorted-key dump used for hashing
    std::uint64_t config_hash() const;
};

struct RunRecord {
    std::uint64_t config_hash = 0;
    std::string code_version;
    std::string experiment;
    double wall_time_s = 0.0;
    std::vector<std::string> outputs;
    std::vector<std::pair<std::string, bool>> checks;
    json summary;

    bool all_passed() const;
    json to_json() const;
    void write(const std::string& path) const;
};

extern const char* kCodeVersion;

} // namespace zsm
