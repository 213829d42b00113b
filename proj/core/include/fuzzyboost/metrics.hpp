#pragma once

#include "fuzzyboost/boosting.hpp"
#include "fuzzyboost/dataset.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace fuzzyboost {

enum class TargetUnits { standardized, raw };

std::string to_string(TargetUnits units);

struct EvalReport {
    double rmse = 0.0;
    std::size_t n = 0;
    TargetUnits target_units = TargetUnits::standardized;
};

/// Root mean square error; vectors must be non-empty and equal length.
double rmse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& actuals);

/// Percent improvement of `method_rmse` over `baseline_rmse`.
double relative_improvement(double baseline_rmse, double method_rmse);

/// Evaluates an ensemble on the given rows of a dataset, in standardized or
/// raw target units (standardized divides by the train-split target stddev
/// stored in the ensemble's scaler).
EvalReport evaluate(const BoostedEnsemble& ensemble, const Dataset& dataset,
                    const std::vector<Eigen::Index>& rows, TargetUnits units);

enum class SweepMethod { single_tsk, boosted };

std::string to_string(SweepMethod method);

struct SweepRow {
    int clusters = 0;
    double fuzzifier = 0.0;
    SweepMethod method = SweepMethod::single_tsk;
    double test_rmse = 0.0;
};
using SweepTable = std::vector<SweepRow>;

/// For every (clusters, fuzzifier) cell: the test RMSE of a single TS model
/// fit directly on the train targets, and of a boosted run whose grids are
/// collapsed to that cell. Rows come back sorted by (clusters, fuzzifier,
/// method). RMSE is in standardized units.
SweepTable run_sweep(const Dataset& dataset, const SplitIndices& splits,
                     const std::vector<int>& cluster_grid, const std::vector<double>& fuzzifier_grid,
                     const BoostConfig& base_config);

struct SweepSummary {
    double mean_improvement_percent = 0.0;
    double std_improvement_percent = 0.0;
    std::size_t cells = 0;
};

/// Mean and stddev of the cellwise percent improvement of the boosted runs
/// over their single-model counterparts.
SweepSummary summarize_sweep(const SweepTable& table);

/// Fills the test_rmse column of a fit trace after the fact: accepted rows
/// get the RMSE of the ensemble prefix they produced (stage 0 = zero model),
/// rejected rows stay empty.
void fill_test_rmse(IterationTrace& trace, const BoostedEnsemble& ensemble, const Dataset& dataset,
                    const std::vector<Eigen::Index>& test_rows);

}  // namespace fuzzyboost
