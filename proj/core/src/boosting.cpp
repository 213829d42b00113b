#include "fuzzyboost/boosting.hpp"

#include "fuzzyboost/detail/rng.hpp"
#include "fuzzyboost/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace fuzzyboost {

namespace {

constexpr double kFallbackRidge = 1e-6;

double snap_decimal(double value) {
    if (value == 0.0) return 0.0;
    const double scale = std::pow(10.0, 12 - std::ceil(std::log10(std::abs(value))));
    return std::round(value * scale) / scale;
}

struct CandidateResult {
    bool usable = false;
    double validation_rmse = std::numeric_limits<double>::infinity();
    double lambda = 0.0;
    double ridge = 0.0;
    FcmModel antecedent;
    Eigen::VectorXd coefficients;
};

// One (clusters, fuzzifier) cell: fit the clustering once, then scan ridge
// and lambda. Scoring uses the design-matrix product; the winner is later
// re-evaluated through the canonical scalar prediction path.
CandidateResult evaluate_candidate(int clusters, double fuzzifier, const Eigen::MatrixXd& X_fit,
                                   const Eigen::VectorXd& residuals_fit,
                                   const Eigen::MatrixXd& X_val, const Eigen::VectorXd& y_val,
                                   const Eigen::VectorXd& partial_val, const BoostConfig& config,
                                   std::uint64_t stage_seed, std::optional<double> fixed_lambda) {
    CandidateResult result;

    FcmConfig fcm_config;
    fcm_config.cluster_count = clusters;
    fcm_config.fuzzifier = fuzzifier;
    fcm_config.seed = stage_seed;
    FcmModel antecedent = fcm_fit(X_fit, fcm_config).first;

    const Eigen::MatrixXd design_fit = build_design_matrix(antecedent, X_fit);
    const NormalEquations equations = normal_equations(design_fit, residuals_fit);
    const Eigen::MatrixXd design_val = build_design_matrix(antecedent, X_val);
    const Eigen::Index columns = design_fit.cols();

    const std::vector<double> lambda_grid =
        fixed_lambda ? std::vector<double>{*fixed_lambda} : config.lambda_grid;

    for (double ridge : config.ridge_grid) {
        double effective = ridge;
        if (effective == 0.0 && X_fit.rows() < columns) effective = kFallbackRidge;
        std::optional<Eigen::VectorXd> solution = solve_normal_equations(equations, effective);
        if (!solution && effective == 0.0) {
            effective = kFallbackRidge;
            solution = solve_normal_equations(equations, effective);
        }
        if (!solution) continue;

        const Eigen::VectorXd stage_val = design_val * (*solution);
        const LambdaChoice choice = select_lambda(partial_val, stage_val, y_val, lambda_grid);
        if (choice.validation_rmse < result.validation_rmse) {
            result.usable = true;
            result.validation_rmse = choice.validation_rmse;
            result.lambda = choice.lambda;
            result.ridge = effective;
            result.antecedent = antecedent;
            result.coefficients = *solution;
        }
    }
    return result;
}

Eigen::MatrixXd coefficients_to_consequents(const Eigen::VectorXd& stacked, int rules,
                                            Eigen::Index feature_count) {
    const Eigen::Index block = feature_count + 1;
    Eigen::MatrixXd consequents(rules, block);
    for (int i = 0; i < rules; ++i) {
        consequents.row(i) = stacked.segment(i * block, block).transpose();
    }
    return consequents;
}

std::pair<BoostedEnsemble, IterationTrace> run_boost(const Dataset& dataset,
                                                     const SplitIndices& splits,
                                                     const BoostConfig& raw_config,
                                                     std::optional<double> fixed_lambda) {
    dataset.validate();
    splits.validate(dataset.row_count());
    const BoostConfig config = raw_config.normalized();
    config.validate();
    if (fixed_lambda && !(*fixed_lambda > 0.0)) {
        throw std::invalid_argument("fixed lambda must be > 0");
    }
    if (splits.validation.empty()) {
        throw std::invalid_argument("boost_fit requires a non-empty validation split");
    }
    const int max_clusters = config.cluster_grid.back();
    if (static_cast<Eigen::Index>(splits.train.size()) < max_clusters) {
        throw std::invalid_argument("train split smaller than the largest cluster count");
    }

    BoostedEnsemble ensemble;
    ensemble.scaler = fit_scaler(dataset, splits.train);
    ensemble.feature_names = dataset.feature_names;
    ensemble.target_name = dataset.target_name;
    ensemble.config = config;

    const Eigen::MatrixXd X_train =
        ensemble.scaler.transform_features(select_rows(dataset.features, splits.train));
    const Eigen::VectorXd y_train =
        ensemble.scaler.transform_targets(select_rows(dataset.targets, splits.train));
    const Eigen::MatrixXd X_val =
        ensemble.scaler.transform_features(select_rows(dataset.features, splits.validation));
    const Eigen::VectorXd y_val =
        ensemble.scaler.transform_targets(select_rows(dataset.targets, splits.validation));

    ensemble.zero_model = y_train.mean();

    Eigen::VectorXd partial_train = Eigen::VectorXd::Constant(y_train.size(), ensemble.zero_model);
    Eigen::VectorXd partial_val = Eigen::VectorXd::Constant(y_val.size(), ensemble.zero_model);
    double best_val = rmse(partial_val, y_val);

    IterationTrace trace;
    {
        StageRecord zero;
        zero.stage = 0;
        zero.accepted = true;
        zero.train_rmse = rmse(partial_train, y_train);
        zero.validation_rmse = best_val;
        trace.push_back(zero);
    }

    int consecutive_rejections = 0;
    for (int stage_index = 1; stage_index <= config.max_stages; ++stage_index) {
        if (!fixed_lambda && consecutive_rejections >= config.patience) break;

        const auto started = std::chrono::steady_clock::now();
        const Eigen::VectorXd residuals = compute_residuals(y_train, partial_train);
        StageCandidate candidate = fit_stage(X_train, residuals, X_val, y_val, partial_val, config,
                                             stage_index, fixed_lambda);

        const Eigen::VectorXd next_val = partial_val + candidate.lambda * candidate.stage_val;
        const double val_rmse = rmse(next_val, y_val);
        const bool accepted = fixed_lambda ? true : (best_val - val_rmse > config.tolerance);

        StageRecord record;
        record.stage = stage_index;
        record.accepted = accepted;
        record.clusters = candidate.clusters;
        record.fuzzifier = candidate.fuzzifier;
        record.ridge = candidate.ridge;
        record.lambda = candidate.lambda;
        record.validation_rmse = val_rmse;
        const Eigen::VectorXd next_train = partial_train + candidate.lambda * candidate.stage_train;
        record.train_rmse = rmse(next_train, y_train);

        if (accepted) {
            ensemble.stages.push_back(BoostStage{std::move(candidate.model), candidate.lambda});
            partial_train = next_train;
            partial_val = next_val;
            best_val = val_rmse;
            consecutive_rejections = 0;
        } else {
            ++consecutive_rejections;
        }

        record.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        trace.push_back(record);
    }

    return {std::move(ensemble), std::move(trace)};
}

}  // namespace

std::vector<int> integer_range(int first, int last) {
    if (last < first) throw std::invalid_argument("integer_range: last < first");
    std::vector<int> values(static_cast<std::size_t>(last - first + 1));
    std::iota(values.begin(), values.end(), first);
    return values;
}

std::vector<double> value_range(double first, double last, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("value_range: step must be > 0");
    if (last < first) throw std::invalid_argument("value_range: last < first");
    std::vector<double> values;
    for (int i = 0;; ++i) {
        const double value = snap_decimal(first + step * i);
        if (value > last + step * 1e-9) break;
        values.push_back(value);
    }
    return values;
}

BoostConfig BoostConfig::large_dataset_preset() {
    BoostConfig config;
    config.cluster_grid = integer_range(2, 20);
    config.max_stages = 10000;
    return config;
}

void BoostConfig::validate() const {
    if (max_stages < 0) throw std::invalid_argument("max_stages must be >= 0");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    if (patience < 1) throw std::invalid_argument("patience must be >= 1");
    if (cluster_grid.empty() || fuzzifier_grid.empty() || lambda_grid.empty() || ridge_grid.empty()) {
        throw std::invalid_argument("hyperparameter grids must be non-empty");
    }
    for (int c : cluster_grid) {
        if (c < 1) throw std::invalid_argument("cluster counts must be >= 1");
    }
    for (double m : fuzzifier_grid) {
        if (!(m > 1.0)) throw std::invalid_argument("fuzzifier values must be > 1");
    }
    for (double lambda : lambda_grid) {
        if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
            throw std::invalid_argument("lambda values must be finite and >= 0");
        }
    }
    for (double ridge : ridge_grid) {
        if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
            throw std::invalid_argument("ridge values must be finite and >= 0");
        }
    }
    if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0)) {
        throw std::invalid_argument("subsample_fraction must lie in (0, 1]");
    }
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

BoostConfig BoostConfig::normalized() const {
    BoostConfig out = *this;
    auto sort_unique = [](auto& values) {
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
    };
    sort_unique(out.cluster_grid);
    sort_unique(out.fuzzifier_grid);
    sort_unique(out.lambda_grid);
    sort_unique(out.ridge_grid);
    return out;
}

Eigen::VectorXd compute_residuals(const Eigen::VectorXd& targets,
                                  const Eigen::VectorXd& predictions) {
    if (targets.size() != predictions.size()) {
        throw std::invalid_argument("compute_residuals: length mismatch");
    }
    return targets - predictions;
}

LambdaChoice select_lambda(const Eigen::VectorXd& partial_val, const Eigen::VectorXd& stage_val,
                           const Eigen::VectorXd& y_val, const std::vector<double>& lambda_grid) {
    if (partial_val.size() != stage_val.size() || partial_val.size() != y_val.size()) {
        throw std::invalid_argument("select_lambda: length mismatch");
    }
    if (lambda_grid.empty()) throw std::invalid_argument("select_lambda: empty lambda grid");

    std::vector<double> grid = lambda_grid;
    std::sort(grid.begin(), grid.end());

    LambdaChoice best{grid.front(), std::numeric_limits<double>::infinity()};
    for (double lambda : grid) {
        const double value = rmse(partial_val + lambda * stage_val, y_val);
        if (value < best.validation_rmse) {
            best.lambda = lambda;
            best.validation_rmse = value;
        }
    }
    return best;
}

StageCandidate fit_stage(const Eigen::MatrixXd& X_train, const Eigen::VectorXd& residuals,
                         const Eigen::MatrixXd& X_val, const Eigen::VectorXd& y_val,
                         const Eigen::VectorXd& partial_val, const BoostConfig& raw_config,
                         int stage_index, std::optional<double> fixed_lambda) {
    const BoostConfig config = raw_config.normalized();
    config.validate();
    if (X_train.rows() != residuals.size()) {
        throw std::invalid_argument("fit_stage: train rows must match residual length");
    }
    if (static_cast<Eigen::Index>(config.cluster_grid.back()) > X_train.rows()) {
        throw std::invalid_argument("fit_stage: train rows must cover the largest cluster count");
    }

    const std::uint64_t stage_seed =
        detail::derive_seed(config.seed, static_cast<std::uint64_t>(stage_index));

    // Optional per-stage row subsample, drawn without replacement.
    Eigen::MatrixXd X_fit;
    Eigen::VectorXd residuals_fit;
    if (config.subsample_fraction < 1.0) {
        const auto total = static_cast<std::size_t>(X_train.rows());
        auto wanted = static_cast<std::size_t>(
            std::llround(config.subsample_fraction * static_cast<double>(total)));
        wanted = std::max<std::size_t>(wanted, static_cast<std::size_t>(config.cluster_grid.back()));
        wanted = std::min(wanted, total);
        std::vector<Eigen::Index> rows(total);
        std::iota(rows.begin(), rows.end(), Eigen::Index{0});
        detail::Rng rng(detail::derive_seed(stage_seed, 0x5ab5a317ULL));
        rng.shuffle(rows);
        rows.resize(wanted);
        std::sort(rows.begin(), rows.end());
        X_fit = select_rows(X_train, rows);
        residuals_fit = select_rows(residuals, rows);
    } else {
        X_fit = X_train;
        residuals_fit = residuals;
    }

    struct Cell {
        int clusters;
        double fuzzifier;
    };
    std::vector<Cell> cells;
    for (int clusters : config.cluster_grid) {
        for (double fuzzifier : config.fuzzifier_grid) {
            cells.push_back({clusters, fuzzifier});
        }
    }

    std::vector<CandidateResult> results(cells.size());
    const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t worker_count =
        std::min<std::size_t>(cells.size(),
                              config.threads > 0 ? static_cast<unsigned>(config.threads) : hardware);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&]() {
        for (;;) {
            const std::size_t index = next.fetch_add(1);
            if (index >= cells.size()) return;
            try {
                results[index] = evaluate_candidate(cells[index].clusters, cells[index].fuzzifier,
                                                    X_fit, residuals_fit, X_val, y_val, partial_val,
                                                    config, stage_seed, fixed_lambda);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (worker_count <= 1) {
        work();
    } else {
        std::vector<std::thread> workers;
        workers.reserve(worker_count);
        for (std::size_t i = 0; i < worker_count; ++i) workers.emplace_back(work);
        for (std::thread& worker : workers) worker.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Deterministic reduction in grid order: strict improvement keeps the
    // earliest cell, i.e. the smallest clusters, then fuzzifier.
    std::size_t best_index = cells.size();
    double best_rmse = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (results[i].usable && results[i].validation_rmse < best_rmse) {
            best_rmse = results[i].validation_rmse;
            best_index = i;
        }
    }
    if (best_index == cells.size()) {
        throw std::runtime_error("fit_stage: every candidate fit failed");
    }

    CandidateResult& winner = results[best_index];
    StageCandidate out;
    out.clusters = cells[best_index].clusters;
    out.fuzzifier = cells[best_index].fuzzifier;
    out.ridge = winner.ridge;
    out.lambda = winner.lambda;
    out.validation_rmse = winner.validation_rmse;
    out.model.antecedent = std::move(winner.antecedent);
    out.model.consequents =
        coefficients_to_consequents(winner.coefficients, out.clusters, X_train.cols());
    out.model.ridge_penalty = winner.ridge;
    out.stage_train = tsk_predict_batch(out.model, X_train);
    out.stage_val = tsk_predict_batch(out.model, X_val);
    return out;
}

std::pair<BoostedEnsemble, IterationTrace> boost_fit(const Dataset& dataset,
                                                     const SplitIndices& splits,
                                                     const BoostConfig& config) {
    return run_boost(dataset, splits, config, std::nullopt);
}

std::pair<BoostedEnsemble, IterationTrace> boost_fit_fixed_lambda(const Dataset& dataset,
                                                                  const SplitIndices& splits,
                                                                  const BoostConfig& config,
                                                                  double fixed_lambda) {
    return run_boost(dataset, splits, config, fixed_lambda);
}

double boost_predict(const BoostedEnsemble& ensemble, const Eigen::VectorXd& raw_point) {
    if (raw_point.size() != ensemble.scaler.feature_means.size()) {
        throw std::invalid_argument("boost_predict: feature dimension mismatch");
    }
    const Eigen::VectorXd point = ensemble.scaler.transform_feature_row(raw_point);
    double output = ensemble.zero_model;
    for (const BoostStage& stage : ensemble.stages) {
        output += stage.lambda * tsk_predict(stage.model, point);
    }
    return ensemble.scaler.invert_target(output);
}

Eigen::VectorXd boost_predict_batch(const BoostedEnsemble& ensemble,
                                    const Eigen::MatrixXd& raw_features) {
    Eigen::VectorXd predictions(raw_features.rows());
    for (Eigen::Index r = 0; r < raw_features.rows(); ++r) {
        predictions[r] = boost_predict(ensemble, raw_features.row(r).transpose());
    }
    return predictions;
}

std::vector<double> prefix_rmse_trace(const BoostedEnsemble& ensemble,
                                      const Eigen::MatrixXd& raw_features,
                                      const Eigen::VectorXd& raw_targets) {
    const Eigen::MatrixXd X = ensemble.scaler.transform_features(raw_features);
    const Eigen::VectorXd y = ensemble.scaler.transform_targets(raw_targets);
    Eigen::VectorXd partial = Eigen::VectorXd::Constant(y.size(), ensemble.zero_model);

    std::vector<double> curve;
    curve.reserve(ensemble.stages.size() + 1);
    curve.push_back(rmse(partial, y));
    for (const BoostStage& stage : ensemble.stages) {
        partial += stage.lambda * tsk_predict_batch(stage.model, X);
        curve.push_back(rmse(partial, y));
    }
    return curve;
}

}  // namespace fuzzyboost
