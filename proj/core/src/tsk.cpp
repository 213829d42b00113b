#include "fuzzyboost/tsk.hpp"

#include <cmath>
#include <stdexcept>

namespace fuzzyboost {

namespace {

constexpr double kFallbackRidge = 1e-6;

Eigen::MatrixXd reshape_coefficients(const Eigen::VectorXd& stacked, Eigen::Index rules,
                                     Eigen::Index columns) {
    Eigen::MatrixXd consequents(rules, columns);
    for (Eigen::Index i = 0; i < rules; ++i) {
        consequents.row(i) = stacked.segment(i * columns, columns).transpose();
    }
    return consequents;
}

}  // namespace

Eigen::MatrixXd build_design_matrix(const FcmModel& antecedent, const Eigen::MatrixXd& X) {
    const Eigen::Index n_rows = X.rows();
    const Eigen::Index n_features = X.cols();
    const Eigen::Index rules = antecedent.prototypes.rows();
    const Eigen::Index block = n_features + 1;

    const Eigen::MatrixXd memberships = fcm_membership_batch(antecedent, X);  // c x N
    Eigen::MatrixXd design(n_rows, rules * block);
    for (Eigen::Index i = 0; i < rules; ++i) {
        design.col(i * block) = memberships.row(i).transpose();
        design.middleCols(i * block + 1, n_features) =
            X.array().colwise() * memberships.row(i).transpose().array();
    }
    return design;
}

NormalEquations normal_equations(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
    NormalEquations equations;
    equations.gram.noalias() = design.transpose() * design;
    equations.moment.noalias() = design.transpose() * y;
    return equations;
}

std::optional<Eigen::VectorXd> solve_normal_equations(const NormalEquations& equations,
                                                      double ridge_penalty) {
    Eigen::MatrixXd system = equations.gram;
    if (ridge_penalty > 0.0) {
        system.diagonal().array() += ridge_penalty;
    }
    const Eigen::LDLT<Eigen::MatrixXd> factorization(system);
    if (factorization.info() != Eigen::Success) return std::nullopt;
    const Eigen::VectorXd solution = factorization.solve(equations.moment);
    if (!solution.allFinite()) return std::nullopt;
    const double residual = (system * solution - equations.moment).norm();
    if (residual > 1e-6 * std::max(1.0, equations.moment.norm())) return std::nullopt;
    return solution;
}

std::pair<TskModel, TskFitReport> tsk_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                          const FcmConfig& config, double ridge_penalty) {
    if (X.rows() != y.size()) throw std::invalid_argument("tsk_fit: X rows must match y length");
    if (ridge_penalty < 0.0) throw std::invalid_argument("tsk_fit: ridge_penalty must be >= 0");
    if (X.rows() < config.cluster_count) {
        throw std::invalid_argument("tsk_fit requires at least as many rows as rules");
    }

    TskModel model;
    model.antecedent = fcm_fit(X, config).first;

    const Eigen::Index block = X.cols() + 1;
    const Eigen::Index columns = config.cluster_count * block;
    const Eigen::MatrixXd design = build_design_matrix(model.antecedent, X);
    const NormalEquations equations = normal_equations(design, y);

    TskFitReport report;
    report.rules_used = config.cluster_count;

    double effective_penalty = ridge_penalty;
    if (X.rows() < columns && effective_penalty == 0.0) {
        // under-determined system; penalty is mandatory here
        effective_penalty = kFallbackRidge;
        report.design_condition_flag = true;
    }

    std::optional<Eigen::VectorXd> solution = solve_normal_equations(equations, effective_penalty);
    if (!solution && effective_penalty == 0.0) {
        effective_penalty = kFallbackRidge;
        report.design_condition_flag = true;
        solution = solve_normal_equations(equations, effective_penalty);
    }
    if (!solution) {
        throw std::runtime_error("tsk_fit: consequent least-squares solve failed");
    }

    model.consequents = reshape_coefficients(*solution, config.cluster_count, block);
    model.ridge_penalty = effective_penalty;

    const Eigen::VectorXd fitted = design * (*solution);
    report.training_rmse = std::sqrt((y - fitted).squaredNorm() / static_cast<double>(y.size()));
    return {std::move(model), report};
}

double tsk_predict(const TskModel& model, const Eigen::VectorXd& point) {
    double output = 0.0;
    for (const RuleContribution& rule : tsk_explain(model, point)) {
        output += rule.contribution;
    }
    return output;
}

Eigen::VectorXd tsk_predict_batch(const TskModel& model, const Eigen::MatrixXd& X) {
    Eigen::VectorXd predictions(X.rows());
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
        predictions[r] = tsk_predict(model, X.row(r).transpose());
    }
    return predictions;
}

std::vector<RuleContribution> tsk_explain(const TskModel& model, const Eigen::VectorXd& point) {
    const Eigen::VectorXd memberships = fcm_membership(model.antecedent, point);
    std::vector<RuleContribution> rules(static_cast<std::size_t>(memberships.size()));
    for (Eigen::Index i = 0; i < memberships.size(); ++i) {
        RuleContribution& rule = rules[static_cast<std::size_t>(i)];
        rule.rule_index = static_cast<int>(i);
        rule.membership = memberships[i];
        rule.local_output =
            model.consequents(i, 0) + model.consequents.row(i).tail(point.size()).dot(point);
        rule.contribution = rule.membership * rule.local_output;
    }
    return rules;
}

}  // namespace fuzzyboost
