#include "fuzzyboost/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fuzzyboost {

std::string to_string(TargetUnits units) {
    return units == TargetUnits::standardized ? "standardized" : "raw";
}

double rmse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& actuals) {
    if (predictions.size() == 0) throw std::invalid_argument("rmse: empty vectors");
    if (predictions.size() != actuals.size()) throw std::invalid_argument("rmse: length mismatch");
    return std::sqrt((predictions - actuals).squaredNorm() /
                     static_cast<double>(predictions.size()));
}

double relative_improvement(double baseline_rmse, double method_rmse) {
    if (!(baseline_rmse > 0.0)) {
        throw std::invalid_argument("relative_improvement: baseline must be > 0");
    }
    return 100.0 * (baseline_rmse - method_rmse) / baseline_rmse;
}

EvalReport evaluate(const BoostedEnsemble& ensemble, const Dataset& dataset,
                    const std::vector<Eigen::Index>& rows, TargetUnits units) {
    if (rows.empty()) throw std::invalid_argument("evaluate: empty row set");
    const Eigen::MatrixXd X = select_rows(dataset.features, rows);
    const Eigen::VectorXd y = select_rows(dataset.targets, rows);
    const Eigen::VectorXd predictions = boost_predict_batch(ensemble, X);

    EvalReport report;
    report.n = rows.size();
    report.target_units = units;
    const double raw = rmse(predictions, y);
    report.rmse = units == TargetUnits::raw ? raw : raw / ensemble.scaler.target_std;
    return report;
}

std::string to_string(SweepMethod method) {
    return method == SweepMethod::single_tsk ? "single_tsk" : "boosted";
}

SweepTable run_sweep(const Dataset& dataset, const SplitIndices& splits,
                     const std::vector<int>& cluster_grid, const std::vector<double>& fuzzifier_grid,
                     const BoostConfig& base_config) {
    if (cluster_grid.empty() || fuzzifier_grid.empty()) {
        throw std::invalid_argument("run_sweep: grids must be non-empty");
    }
    dataset.validate();
    splits.validate(dataset.row_count());

    std::vector<int> clusters = cluster_grid;
    std::vector<double> fuzzifiers = fuzzifier_grid;
    std::sort(clusters.begin(), clusters.end());
    clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
    std::sort(fuzzifiers.begin(), fuzzifiers.end());
    fuzzifiers.erase(std::unique(fuzzifiers.begin(), fuzzifiers.end()), fuzzifiers.end());

    const StandardScaler scaler = fit_scaler(dataset, splits.train);
    const Eigen::MatrixXd X_train =
        scaler.transform_features(select_rows(dataset.features, splits.train));
    const Eigen::VectorXd y_train =
        scaler.transform_targets(select_rows(dataset.targets, splits.train));
    const Eigen::MatrixXd X_test =
        scaler.transform_features(select_rows(dataset.features, splits.test));
    const Eigen::VectorXd y_test =
        scaler.transform_targets(select_rows(dataset.targets, splits.test));

    SweepTable table;
    table.reserve(clusters.size() * fuzzifiers.size() * 2);
    for (int c : clusters) {
        for (double m : fuzzifiers) {
            FcmConfig fcm_config;
            fcm_config.cluster_count = c;
            fcm_config.fuzzifier = m;
            fcm_config.seed = base_config.seed;
            const TskModel single = tsk_fit(X_train, y_train, fcm_config).first;
            const double single_rmse = rmse(tsk_predict_batch(single, X_test), y_test);

            BoostConfig cell_config = base_config;
            cell_config.cluster_grid = {c};
            cell_config.fuzzifier_grid = {m};
            const BoostedEnsemble boosted = boost_fit(dataset, splits, cell_config).first;
            const double boosted_rmse =
                evaluate(boosted, dataset, splits.test, TargetUnits::standardized).rmse;

            table.push_back({c, m, SweepMethod::single_tsk, single_rmse});
            table.push_back({c, m, SweepMethod::boosted, boosted_rmse});
        }
    }
    return table;
}

SweepSummary summarize_sweep(const SweepTable& table) {
    std::vector<double> improvements;
    for (std::size_t i = 0; i + 1 < table.size(); i += 2) {
        const SweepRow& single = table[i];
        const SweepRow& boosted = table[i + 1];
        if (single.method != SweepMethod::single_tsk || boosted.method != SweepMethod::boosted ||
            single.clusters != boosted.clusters || single.fuzzifier != boosted.fuzzifier) {
            throw std::invalid_argument("summarize_sweep: table rows are not paired by cell");
        }
        improvements.push_back(relative_improvement(single.test_rmse, boosted.test_rmse));
    }
    if (improvements.empty()) throw std::invalid_argument("summarize_sweep: empty table");

    SweepSummary summary;
    summary.cells = improvements.size();
    double sum = 0.0;
    for (double value : improvements) sum += value;
    summary.mean_improvement_percent = sum / static_cast<double>(improvements.size());
    double scatter = 0.0;
    for (double value : improvements) {
        const double diff = value - summary.mean_improvement_percent;
        scatter += diff * diff;
    }
    summary.std_improvement_percent =
        std::sqrt(scatter / static_cast<double>(improvements.size()));
    return summary;
}

void fill_test_rmse(IterationTrace& trace, const BoostedEnsemble& ensemble, const Dataset& dataset,
                    const std::vector<Eigen::Index>& test_rows) {
    if (test_rows.empty()) return;
    const Eigen::MatrixXd X = select_rows(dataset.features, test_rows);
    const Eigen::VectorXd y = select_rows(dataset.targets, test_rows);
    const std::vector<double> curve = prefix_rmse_trace(ensemble, X, y);

    std::size_t accepted_prefix = 0;
    for (StageRecord& record : trace) {
        if (!record.accepted) continue;
        if (accepted_prefix < curve.size()) {
            record.test_rmse = curve[accepted_prefix];
        }
        ++accepted_prefix;
    }
}

}  // namespace fuzzyboost
