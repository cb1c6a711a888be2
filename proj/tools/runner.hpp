#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace gbssl::cli {

struct RunOptions {
    int jobs = 1;
    bool overwrite = false;
};

struct RunReport {
    std::filesystem::path directory;
    std::vector<std::string> files;  // relative to directory, sorted
    std::vector<std::string> warnings;
    double wall_seconds = 0.0;
};

/// Output directory: the config's output, else $GBSSL_OUTPUT_ROOT/<kind>-seed<seed>,
/// else runs/<kind>-seed<seed>.
std::filesystem::path resolve_output(const ExperimentConfig& config);

/// Runs the experiment into a staging directory next to `out` and renames it
/// into place when everything (manifest included) is written. On failure the
/// staging directory is removed and nothing is left at `out`.
RunReport run(const ExperimentConfig& config, const std::filesystem::path& out, const RunOptions& options = {});

/// Tool, library and compiler versions recorded in manifests.
nlohmann::json version_info();

}  // namespace gbssl::cli
