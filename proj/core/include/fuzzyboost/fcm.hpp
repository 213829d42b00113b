#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

namespace fuzzyboost {

struct FcmConfig {
    int cluster_count = 2;
    double fuzzifier = 2.0;    // must be > 1
    int max_iterations = 300;
    double tolerance = 1e-5;   // stop when max |delta U| falls below this
    std::uint64_t seed = 0;

    void validate() const;
};

/// Fitted fuzzy c-means clustering: prototype matrix plus the fuzzifier that
/// shapes memberships. `objective_trace` records the weighted within-cluster
/// scatter after each alternating update; it never increases.
struct FcmModel {
    Eigen::MatrixXd prototypes;  // c x n
    double fuzzifier = 2.0;
    std::vector<double> objective_trace;
    FcmConfig config;  // echo of the fit configuration

    int cluster_count() const { return static_cast<int>(prototypes.rows()); }
    Eigen::Index feature_count() const { return prototypes.cols(); }
};

/// Alternating optimization of memberships and prototypes. Memberships start
/// from seeded uniform noise normalized per column; iteration stops when the
/// membership matrix moves less than `tolerance` or `max_iterations` is hit.
/// Returns the model and the final membership matrix (c x N, columns sum
/// to 1). Requires N >= cluster_count.
std::pair<FcmModel, Eigen::MatrixXd> fcm_fit(const Eigen::MatrixXd& data, const FcmConfig& config);

/// Membership vector of a single point against fitted prototypes. A point
/// within 1e-12 of a prototype gets full membership there (split equally on
/// exact ties); otherwise the inverse-distance-ratio rule applies.
Eigen::VectorXd fcm_membership(const FcmModel& model, const Eigen::VectorXd& point);

/// Column-per-point batch of fcm_membership; result is c x N.
Eigen::MatrixXd fcm_membership_batch(const FcmModel& model, const Eigen::MatrixXd& points);

/// Weighted within-cluster scatter: sum of u^m times squared Euclidean
/// distance between each point and each prototype.
double fcm_objective(const FcmModel& model, const Eigen::MatrixXd& data,
                     const Eigen::MatrixXd& memberships);

}  // namespace fuzzyboost
