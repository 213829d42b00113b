#include <fuzzyboost/boosting.hpp>
#include <fuzzyboost/dataset.hpp>
#include <fuzzyboost/fcm.hpp>
#include <fuzzyboost/tsk.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace fuzzyboost;

Eigen::MatrixXd bench_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = dist(rng);
    }
    return out;
}

void BM_FcmFit(benchmark::State& state) {
    const auto clusters = static_cast<int>(state.range(0));
    const Eigen::MatrixXd data = bench_matrix(2000, 8, 1);
    FcmConfig config;
    config.cluster_count = clusters;
    config.seed = 7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fcm_fit(data, config));
    }
}
BENCHMARK(BM_FcmFit)->Arg(2)->Arg(5)->Arg(10);

void BM_MembershipBatch(benchmark::State& state) {
    const Eigen::MatrixXd data = bench_matrix(2000, 8, 2);
    FcmConfig config;
    config.cluster_count = static_cast<int>(state.range(0));
    config.seed = 3;
    const FcmModel model = fcm_fit(data, config).first;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fcm_membership_batch(model, data));
    }
}
BENCHMARK(BM_MembershipBatch)->Arg(2)->Arg(10);

void BM_TskFit(benchmark::State& state) {
    const Eigen::MatrixXd X = bench_matrix(2000, 8, 4);
    const Eigen::VectorXd y = X.col(0).array().sin() + X.col(1).array();
    FcmConfig config;
    config.cluster_count = static_cast<int>(state.range(0));
    config.seed = 11;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tsk_fit(X, y, config));
    }
}
BENCHMARK(BM_TskFit)->Arg(3)->Arg(8);

void BM_SelectLambda(benchmark::State& state) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd partial(1000), stage(1000), y(1000);
    for (Eigen::Index i = 0; i < 1000; ++i) {
        partial[i] = dist(rng);
        stage[i] = dist(rng);
        y[i] = dist(rng);
    }
    const std::vector<double> grid = value_range(0.0, 1.0, 0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(select_lambda(partial, stage, y, grid));
    }
}
BENCHMARK(BM_SelectLambda);

void BM_FitStage(benchmark::State& state) {
    const Dataset dataset = generate_synthetic(1000, 1.0, 1000.0);
    const SplitIndices splits = split(dataset, 0.3, 2);
    const StandardScaler scaler = fit_scaler(dataset, splits.train);
    const Eigen::MatrixXd X_train = scaler.transform_features(select_rows(dataset.features, splits.train));
    const Eigen::VectorXd y_train = scaler.transform_targets(select_rows(dataset.targets, splits.train));
    const Eigen::MatrixXd X_val = scaler.transform_features(select_rows(dataset.features, splits.validation));
    const Eigen::VectorXd y_val = scaler.transform_targets(select_rows(dataset.targets, splits.validation));
    const Eigen::VectorXd partial = Eigen::VectorXd::Constant(y_val.size(), y_train.mean());
    const Eigen::VectorXd residuals = y_train.array() - y_train.mean();

    BoostConfig config;
    config.cluster_grid = {2, 3, 4};
    config.fuzzifier_grid = {1.5, 2.0};
    config.ridge_grid = {1e-8};
    config.seed = 13;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            fit_stage(X_train, residuals, X_val, y_val, partial, config, 1));
    }
}
BENCHMARK(BM_FitStage);

}  // namespace

BENCHMARK_MAIN();
