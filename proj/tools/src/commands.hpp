#pragma once

#include "experiment_config.hpp"

#include <string>

namespace fuzzyboost::cli {

/// Trains a boosted ensemble and writes model.json + trace.csv into the
/// configured output directory. Partial outputs are removed on failure.
int cmd_fit(const ExperimentConfig& config);

/// Scores an input CSV through a saved model, matching feature columns by
/// name. With `explain`, appends the per-rule contributions of the stage
/// with the largest contribution factor.
int cmd_predict(const std::string& model_path, const std::string& input_csv,
                const std::string& output_csv, bool explain);

/// Prints standardized and raw RMSE of a saved model on a labelled CSV.
int cmd_evaluate(const std::string& model_path, const std::string& input_csv,
                 const std::string& target_column);

/// mode=fixed: one run per fixed lambda plus a dynamic run, with aligned
/// per-stage RMSE curves. mode=sweep: single-model vs boosted comparison
/// over the (clusters, fuzzifier) grid.
int cmd_experiment(const ExperimentConfig& config);

/// Writes the synthetic benchmark curve as a two-column CSV.
int cmd_synth(std::size_t count, double x_min, double x_max, const std::string& output_path);

}  // namespace fuzzyboost::cli
