#pragma once

// Declarative experiment configs for the command-line runner.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbssl/experiments.hpp"

namespace gbssl::cli {

inline constexpr int kSchemaVersion = 1;

enum class ExperimentKind {
    spectra,
    regularity,
    posterior,
    acceptance_sweep,
    supervised_sweep,
    oracle_compare,
    prior_sample,
};

struct CatalogEntry {
    ExperimentKind kind;
    std::string name;
    std::string summary;
};

const std::vector<CatalogEntry>& catalog();
std::string to_string(ExperimentKind kind);
/// Throws ConfigError with a suggestion for unknown names.
ExperimentKind kind_from_string(const std::string& name);

/// Closest catalog name by edit distance, or empty when nothing is close.
std::string suggest_kind(const std::string& name);

/// One or more field-level problems, each "field: message".
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct ExperimentConfig {
    int version = kSchemaVersion;
    ExperimentKind kind = ExperimentKind::posterior;
    std::uint64_t seed = 0;
    std::optional<std::string> output;
    bool svg = false;

    // graph
    Index n = 1000;
    std::vector<Index> ns{300, 600, 900, 1200, 1500, 2000};
    std::vector<double> eps_multipliers{2.0};
    Index eigenpairs = 9;
    bool calibrated = true;
    EigenMethod solver = EigenMethod::dense;

    // prior, model, sampler
    experiments::ModelSettings model;
    experiments::ChainSettings chain;
    Index p = 200;
    int replicates = 1;

    // regularity
    std::vector<double> s_grid{2, 3, 4, 5, 6, 7, 8};
    int draws = 100;

    // interpolation and comparison grids
    Index interpolation_k = 4;
    Index grid_points = 10'000;
    std::uint64_t grid_seed = 999;
};

/// Defaults of a kind before any file values are applied.
ExperimentConfig defaults_for(ExperimentKind kind);

/// Parse and range-check. Unknown keys, wrong types and out-of-range values
/// are all collected into one ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Full form with every field resolved; parse_config(to_json(c)) == c.
nlohmann::json to_json(const ExperimentConfig& config);

/// Range checks only (parse_config calls this).
std::vector<std::string> check(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace gbssl::cli
