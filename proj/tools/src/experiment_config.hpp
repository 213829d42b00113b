#pragma once

#include <fuzzyboost/boosting.hpp>
#include <fuzzyboost/dataset.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace fuzzyboost::cli {

/// Flat key=value run configuration. Every key has a default; unknown keys
/// are rejected. File values are applied first, then command-line overrides.
struct ExperimentConfig {
    std::string dataset = "synthetic";  // "synthetic" or a CSV path
    std::string target;                 // target column name; empty = last column
    std::size_t synthetic_count = 4000;
    double synthetic_x_min = 1.0;
    double synthetic_x_max = 4000.0;
    double test_fraction = 0.3;
    std::uint64_t seed = 42;            // drives both the split and the fit
    std::string mode = "dynamic";       // dynamic | fixed | sweep
    std::vector<double> fixed_lambdas = {0.1, 0.5, 1.0};
    std::string output_dir = "out";
    BoostConfig boost;

    /// Applies one key=value setting; throws std::invalid_argument for
    /// unknown keys or unparseable values.
    void apply(const std::string& key, const std::string& value);

    /// Parses "key = value" lines ('#' comments, blank lines ignored).
    void apply_file(const std::string& path);

    /// Applies a "key=value" string as passed on the command line.
    void apply_override(const std::string& assignment);

    void validate() const;

    Dataset load() const;

    /// One "key = value" line per setting, current values; doubles as the
    /// documentation of the config format.
    std::string to_text() const;
};

/// Grid parsing used by the config: "first:last[:step]" for inclusive
/// ranges or a comma-separated list.
std::vector<int> parse_int_grid(const std::string& text);
std::vector<double> parse_double_grid(const std::string& text);

}  // namespace fuzzyboost::cli
