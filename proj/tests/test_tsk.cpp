#include "fuzzyboost/tsk.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace fuzzyboost;

namespace {

FcmConfig simple_config(int clusters, double fuzzifier = 2.0, std::uint64_t seed = 1) {
    FcmConfig config;
    config.cluster_count = clusters;
    config.fuzzifier = fuzzifier;
    config.seed = seed;
    return config;
}

TskModel manual_two_rule_model() {
    // prototypes {0, 10}, m = 2, rule outputs x and x + 5
    TskModel model;
    model.antecedent.prototypes.resize(2, 1);
    model.antecedent.prototypes << 0.0, 10.0;
    model.antecedent.fuzzifier = 2.0;
    model.antecedent.config.cluster_count = 2;
    model.consequents.resize(2, 2);
    model.consequents << 0.0, 1.0, 5.0, 1.0;
    return model;
}

double sse(const TskModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::VectorXd fitted = tsk_predict_batch(model, X);
    return (y - fitted).squaredNorm();
}

}  // namespace

TEST_SUITE_BEGIN("tsk");

TEST_CASE("single rule is ordinary least squares: y = 2x + 1") {
    Eigen::MatrixXd X(5, 1);
    X << 0.0, 1.0, 2.0, 3.0, 4.0;
    Eigen::VectorXd y(5);
    y << 1.0, 3.0, 5.0, 7.0, 9.0;

    const auto [model, report] = tsk_fit(X, y, simple_config(1), 0.0);
    CHECK(model.consequents(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(model.consequents(0, 1) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(report.training_rmse == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(report.rules_used == 1);
}

TEST_CASE("two well-separated affine segments fit to machine precision") {
    // segment A: y = 2x + 1 on x in [0, 1]; segment B: y = -x + 40 on [10, 11]
    Eigen::MatrixXd X(12, 1);
    Eigen::VectorXd y(12);
    for (int i = 0; i < 6; ++i) {
        const double x = i / 5.0;
        X(i, 0) = x;
        y(i) = 2.0 * x + 1.0;
    }
    for (int i = 0; i < 6; ++i) {
        const double x = 10.0 + i / 5.0;
        X(6 + i, 0) = x;
        y(6 + i) = -x + 40.0;
    }

    // a near-crisp fuzzifier keeps cross-segment membership leakage below
    // machine noise, so the two local affine rules can fit each segment exactly
    const auto [model, report] = tsk_fit(X, y, simple_config(2, 1.2), 0.0);
    CHECK(report.training_rmse < 1e-6);
}

TEST_CASE("constant target is reproduced exactly") {
    std::mt19937_64 rng(9);
    const Eigen::MatrixXd X = test_support::random_matrix(rng, 30, 2);
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(30, 4.25);
    const auto [model, report] = tsk_fit(X, y, simple_config(3), 0.0);
    CHECK(report.training_rmse == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("prediction composes memberships with local affine outputs") {
    const TskModel model = manual_two_rule_model();
    const Eigen::VectorXd point = Eigen::VectorXd::Constant(1, 2.0);
    // memberships [16/17, 1/17], locals 2 and 7 (hand computation)
    CHECK(tsk_predict(model, point) == doctest::Approx(39.0 / 17.0).epsilon(1e-12));

    const auto rules = tsk_explain(model, point);
    REQUIRE(rules.size() == 2);
    CHECK(rules[0].membership == doctest::Approx(16.0 / 17.0).epsilon(1e-12));
    CHECK(rules[0].local_output == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rules[0].contribution == doctest::Approx(32.0 / 17.0).epsilon(1e-12));
    CHECK(rules[1].contribution == doctest::Approx(7.0 / 17.0).epsilon(1e-12));
    CHECK(rules[0].contribution + rules[1].contribution ==
          doctest::Approx(tsk_predict(model, point)).epsilon(1e-12));
}

TEST_CASE("degenerate membership routes through a single rule") {
    const TskModel model = manual_two_rule_model();
    // at the first prototype the membership is [1, 0]; local output is 0
    const Eigen::VectorXd at_first = Eigen::VectorXd::Constant(1, 0.0);
    CHECK(tsk_predict(model, at_first) == 0.0);
    // at the second prototype the local output is 10 + 5
    const Eigen::VectorXd at_second = Eigen::VectorXd::Constant(1, 10.0);
    CHECK(tsk_predict(model, at_second) == 15.0);
}

TEST_CASE("batch prediction is exactly the scalar path") {
    std::mt19937_64 rng(10);
    const Eigen::MatrixXd X_train = test_support::random_matrix(rng, 60, 2);
    const Eigen::VectorXd y =
        X_train.col(0).array().sin() + 0.3 * X_train.col(1).array();
    const TskModel model = tsk_fit(X_train, y, simple_config(3)).first;

    SUBCASE("empty input gives an empty vector") {
        CHECK(tsk_predict_batch(model, Eigen::MatrixXd(0, 2)).size() == 0);
    }
    SUBCASE("single row") {
        const Eigen::MatrixXd one = test_support::random_matrix(rng, 1, 2);
        CHECK(tsk_predict_batch(model, one)[0] == tsk_predict(model, one.row(0).transpose()));
    }
    SUBCASE("100 random rows match elementwise, exactly") {
        const Eigen::MatrixXd points = test_support::random_matrix(rng, 100, 2);
        const Eigen::VectorXd batched = tsk_predict_batch(model, points);
        for (Eigen::Index r = 0; r < points.rows(); ++r) {
            CHECK(batched[r] == tsk_predict(model, points.row(r).transpose()));
        }
    }
}

TEST_CASE("explain: single rule carries full membership; contributions decompose predict") {
    std::mt19937_64 rng(12);
    const Eigen::MatrixXd X = test_support::random_matrix(rng, 25, 2);
    const Eigen::VectorXd y = X.col(0);
    const TskModel single = tsk_fit(X, y, simple_config(1)).first;
    const Eigen::VectorXd point = test_support::random_vector(rng, 2);
    const auto rules = tsk_explain(single, point);
    REQUIRE(rules.size() == 1);
    CHECK(rules[0].membership == 1.0);

    const TskModel model = tsk_fit(X, y, simple_config(4)).first;
    for (int i = 0; i < 20; ++i) {
        const Eigen::VectorXd p = test_support::random_vector(rng, 2);
        double total = 0.0;
        double membership_total = 0.0;
        for (const auto& rule : tsk_explain(model, p)) {
            total += rule.contribution;
            membership_total += rule.membership;
        }
        CHECK(total == doctest::Approx(tsk_predict(model, p)).epsilon(1e-9));
        CHECK(membership_total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("symmetric point gets equal memberships across symmetric rules") {
    const TskModel model = manual_two_rule_model();
    const Eigen::VectorXd midpoint = Eigen::VectorXd::Constant(1, 5.0);
    const auto rules = tsk_explain(model, midpoint);
    CHECK(rules[0].membership == doctest::Approx(rules[1].membership).epsilon(1e-12));
}

TEST_CASE("prediction stays inside the local output envelope") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd X = test_support::random_matrix(rng, 40, 2);
        const Eigen::VectorXd y = test_support::random_vector(rng, 40);
        const TskModel model = tsk_fit(X, y, simple_config(3, 2.0, rng())).first;
        const Eigen::VectorXd point = test_support::random_vector(rng, 2, -4.0, 4.0);
        const auto rules = tsk_explain(model, point);
        double lo = rules[0].local_output;
        double hi = rules[0].local_output;
        for (const auto& rule : rules) {
            lo = std::min(lo, rule.local_output);
            hi = std::max(hi, rule.local_output);
        }
        const double prediction = tsk_predict(model, point);
        CHECK(prediction >= lo - 1e-9);
        CHECK(prediction <= hi + 1e-9);
    }
}

TEST_CASE("least-squares optimum: coefficient nudges never reduce training SSE") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd X = test_support::random_matrix(rng, 50, 1);
        const Eigen::VectorXd y = X.col(0).array().tanh() + 0.1;
        TskModel model = tsk_fit(X, y, simple_config(2, 2.0, rng()), 0.0).first;
        const double base = sse(model, X, y);
        for (Eigen::Index r = 0; r < model.consequents.rows(); ++r) {
            for (Eigen::Index c = 0; c < model.consequents.cols(); ++c) {
                for (double delta : {1e-3, -1e-3}) {
                    TskModel nudged = model;
                    nudged.consequents(r, c) += delta;
                    CHECK(sse(nudged, X, y) >= base - 1e-12);
                }
            }
        }
    }
}

TEST_CASE("c=1 agrees with the closed-form simple regression oracle") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXd X = test_support::random_matrix(rng, 35, 1);
        const Eigen::VectorXd y = test_support::random_vector(rng, 35);

        // independent route: slope = cov(x, y) / var(x), intercept from means
        const double x_mean = X.col(0).mean();
        const double y_mean = y.mean();
        const double cov = ((X.col(0).array() - x_mean) * (y.array() - y_mean)).sum();
        const double var = (X.col(0).array() - x_mean).square().sum();
        const double slope = cov / var;
        const double intercept = y_mean - slope * x_mean;

        const TskModel model = tsk_fit(X, y, simple_config(1), 0.0).first;
        CHECK(model.consequents(0, 0) == doctest::Approx(intercept).epsilon(1e-8));
        CHECK(model.consequents(0, 1) == doctest::Approx(slope).epsilon(1e-8));
    }
}

TEST_CASE("training SSE is non-decreasing in the ridge penalty") {
    std::mt19937_64 rng(16);
    const Eigen::MatrixXd X = test_support::random_matrix(rng, 45, 2);
    const Eigen::VectorXd y = X.col(0).array().square() - X.col(1).array();
    double previous = -1.0;
    for (double ridge : {0.0, 1e-4, 1e-2, 1.0}) {
        const TskModel model = tsk_fit(X, y, simple_config(3, 2.0, 7), ridge).first;
        const double value = sse(model, X, y);
        CHECK(value >= previous - 1e-9);
        previous = value;
    }
}

TEST_CASE("singular designs fall back to a small penalty and set the flag") {
    SUBCASE("under-determined: fewer rows than coefficients") {
        Eigen::MatrixXd X(3, 1);
        X << 0.0, 5.0, 10.0;
        Eigen::VectorXd y(3);
        y << 1.0, 2.0, 3.0;
        const auto [model, report] = tsk_fit(X, y, simple_config(2), 0.0);
        CHECK(report.design_condition_flag);
        CHECK(model.ridge_penalty > 0.0);
    }
    SUBCASE("duplicate rows collapse the design") {
        Eigen::MatrixXd X(8, 1);
        X << 1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0;
        Eigen::VectorXd y(8);
        y << 1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0;
        const auto [model, report] = tsk_fit(X, y, simple_config(2), 0.0);
        CHECK(model.consequents.allFinite());
    }
}

TEST_CASE("input validation") {
    Eigen::MatrixXd X(2, 1);
    X << 0.0, 1.0;
    Eigen::VectorXd y(2);
    y << 0.0, 1.0;
    CHECK_THROWS_AS(tsk_fit(X, y, simple_config(3)), std::invalid_argument);
    CHECK_THROWS_AS(tsk_fit(X, y, simple_config(1), -1.0), std::invalid_argument);
    Eigen::VectorXd wrong(3);
    wrong << 0.0, 1.0, 2.0;
    CHECK_THROWS_AS(tsk_fit(X, wrong, simple_config(1)), std::invalid_argument);
}

TEST_SUITE_END();
