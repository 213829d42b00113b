#pragma once

#include "fuzzyboost/dataset.hpp"
#include "fuzzyboost/tsk.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fuzzyboost {

/// Inclusive integer range helper for cluster grids.
std::vector<int> integer_range(int first, int last);

/// Inclusive arithmetic progression, snapped to 12 significant decimals so
/// grid values serialize as the intended decimals (0.6, not 0.6000...01).
std::vector<double> value_range(double first, double last, double step);

struct BoostConfig {
    int max_stages = 100;
    double tolerance = 1e-4;  // minimum validation-RMSE improvement to accept a stage
    int patience = 5;         // consecutive non-improving stages before stopping
    std::vector<int> cluster_grid = integer_range(2, 10);
    std::vector<double> fuzzifier_grid = value_range(1.1, 2.9, 0.1);
    std::vector<double> lambda_grid = value_range(0.0, 1.0, 0.05);
    std::vector<double> ridge_grid = {0.0, 1e-4, 1e-2};
    double subsample_fraction = 1.0;  // rows per stage, drawn without replacement
    std::uint64_t seed = 0;
    int threads = 0;  // candidate fits run in parallel; 0 = hardware default.
                      // Never affects results, only wall time.

    /// Escalated search for the large benchmark datasets: more rules, far
    /// more stages. Not a separate code path.
    static BoostConfig large_dataset_preset();

    void validate() const;

    /// Copy with grids sorted ascending and deduplicated; fitting uses this
    /// form so tie-breaks are well defined.
    BoostConfig normalized() const;
};

struct BoostStage {
    TskModel model;
    double lambda = 0.0;
};

/// Additive ensemble in standardized space: constant zero model plus
/// lambda-scaled stage outputs. The scaler maps raw features/targets in and
/// out, so prediction takes raw units end to end.
struct BoostedEnsemble {
    double zero_model = 0.0;
    std::vector<BoostStage> stages;
    StandardScaler scaler;
    std::vector<std::string> feature_names;
    std::string target_name;
    BoostConfig config;

    std::size_t stage_count() const { return stages.size(); }
};

/// One attempted stage in the fitting loop. Stage 0 is the zero model and
/// carries no hyperparameters. RMSE values are in standardized units; for
/// rejected stages they describe the ensemble as it would have been.
struct StageRecord {
    int stage = 0;
    bool accepted = false;
    std::optional<int> clusters;
    std::optional<double> fuzzifier;
    std::optional<double> ridge;
    std::optional<double> lambda;
    double train_rmse = 0.0;
    double validation_rmse = 0.0;
    std::optional<double> test_rmse;  // filled post-fit, never during fitting
    double seconds = 0.0;
};
using IterationTrace = std::vector<StageRecord>;

/// Elementwise targets minus predictions.
Eigen::VectorXd compute_residuals(const Eigen::VectorXd& targets, const Eigen::VectorXd& predictions);

struct LambdaChoice {
    double lambda = 0.0;
    double validation_rmse = 0.0;
};

/// Exhaustive scan of the grid for the factor minimizing
/// RMSE(y_val, partial + lambda * stage); ties go to the smaller lambda.
LambdaChoice select_lambda(const Eigen::VectorXd& partial_val, const Eigen::VectorXd& stage_val,
                           const Eigen::VectorXd& y_val, const std::vector<double>& lambda_grid);

struct StageCandidate {
    TskModel model;
    double lambda = 0.0;
    double validation_rmse = 0.0;  // selection score
    int clusters = 0;
    double fuzzifier = 0.0;
    double ridge = 0.0;
    Eigen::VectorXd stage_train;  // canonical predictions on the full train matrix
    Eigen::VectorXd stage_val;
};

/// Grid search over (clusters, fuzzifier, ridge): fit one TS model per cell
/// on the residuals, pick its best lambda on the validation split, and return
/// the cell with the lowest validation RMSE. Ties resolve to the smaller
/// cluster count, then fuzzifier, then ridge, then lambda. Candidate fits may
/// run on several threads; the reduction order is fixed, so results never
/// depend on scheduling. `fixed_lambda`, when set, replaces the lambda grid.
StageCandidate fit_stage(const Eigen::MatrixXd& X_train, const Eigen::VectorXd& residuals,
                         const Eigen::MatrixXd& X_val, const Eigen::VectorXd& y_val,
                         const Eigen::VectorXd& partial_val, const BoostConfig& config,
                         int stage_index, std::optional<double> fixed_lambda = std::nullopt);

/// Full training loop: standardize on train rows, start from the train-mean
/// zero model, then repeatedly fit a stage to the residuals and accept it
/// only when it improves the best validation RMSE by more than `tolerance`.
/// Stops after `patience` consecutive rejections or `max_stages` attempts.
/// Test rows are never touched.
std::pair<BoostedEnsemble, IterationTrace> boost_fit(const Dataset& dataset,
                                                     const SplitIndices& splits,
                                                     const BoostConfig& config);

/// Same loop with a constant contribution factor and unconditional stage
/// acceptance, for studying fixed-factor behaviour. Requires fixed_lambda > 0.
std::pair<BoostedEnsemble, IterationTrace> boost_fit_fixed_lambda(const Dataset& dataset,
                                                                  const SplitIndices& splits,
                                                                  const BoostConfig& config,
                                                                  double fixed_lambda);

/// Raw-unit prediction: standardize the point, sum the zero model and
/// lambda-scaled stage outputs, then invert the target scaling.
double boost_predict(const BoostedEnsemble& ensemble, const Eigen::VectorXd& raw_point);

/// Rowwise boost_predict.
Eigen::VectorXd boost_predict_batch(const BoostedEnsemble& ensemble,
                                    const Eigen::MatrixXd& raw_features);

/// Standardized-unit RMSE of every stage prefix (element 0 = zero model,
/// element t = first t stages) on the given raw rows. Post-fit evaluation
/// utility; this is how test curves are produced without the fitting loop
/// ever seeing test rows.
std::vector<double> prefix_rmse_trace(const BoostedEnsemble& ensemble,
                                      const Eigen::MatrixXd& raw_features,
                                      const Eigen::VectorXd& raw_targets);

}  // namespace fuzzyboost
