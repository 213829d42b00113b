#pragma once

#include "fuzzyboost/fcm.hpp"

#include <Eigen/Dense>

#include <optional>
#include <utility>
#include <vector>

namespace fuzzyboost {

/// Default numerical jitter applied to the consequent solve when no explicit
/// penalty is requested.
inline constexpr double kDefaultRidgeJitter = 1e-8;

/// First-order Takagi-Sugeno model. Rule antecedents are memberships of the
/// embedded clustering; rule i's consequent row holds [a0, a1..an] for the
/// local affine output a0 + a1*x1 + ... + an*xn.
struct TskModel {
    FcmModel antecedent;
    Eigen::MatrixXd consequents;  // c x (n+1)
    double ridge_penalty = 0.0;

    int rule_count() const { return antecedent.cluster_count(); }
};

struct TskFitReport {
    double training_rmse = 0.0;
    bool design_condition_flag = false;  // penalty had to be bumped
    int rules_used = 0;
};

/// Membership-weighted affine design matrix: N x (c*(n+1)); the block for
/// rule i at sample k is u_i(x_k) * [1, x_k].
Eigen::MatrixXd build_design_matrix(const FcmModel& antecedent, const Eigen::MatrixXd& X);

struct NormalEquations {
    Eigen::MatrixXd gram;    // design' * design
    Eigen::VectorXd moment;  // design' * y
};
NormalEquations normal_equations(const Eigen::MatrixXd& design, const Eigen::VectorXd& y);

/// LDLT solve of (gram + ridge*I) alpha = moment. Returns nullopt when the
/// solution is non-finite or fails the normal-equation residual check, which
/// signals a singular system at zero penalty.
std::optional<Eigen::VectorXd> solve_normal_equations(const NormalEquations& equations,
                                                      double ridge_penalty);

/// Fits antecedents by clustering X, then solves one global least-squares
/// problem for all consequent coefficients (penalty applied uniformly).
/// A singular solve at zero penalty retries with 1e-6 and flags the report;
/// the same fallback is forced when N < c*(n+1).
std::pair<TskModel, TskFitReport> tsk_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                          const FcmConfig& config,
                                          double ridge_penalty = kDefaultRidgeJitter);

/// Membership-weighted combination of the local affine outputs. Memberships
/// already sum to one, so this is the model output directly.
double tsk_predict(const TskModel& model, const Eigen::VectorXd& point);

/// Rowwise tsk_predict; bit-identical to the scalar path.
Eigen::VectorXd tsk_predict_batch(const TskModel& model, const Eigen::MatrixXd& X);

struct RuleContribution {
    int rule_index = 0;
    double membership = 0.0;
    double local_output = 0.0;
    double contribution = 0.0;  // membership * local_output
};

/// Per-rule breakdown at a point; contributions sum to tsk_predict.
std::vector<RuleContribution> tsk_explain(const TskModel& model, const Eigen::VectorXd& point);

}  // namespace fuzzyboost
