#include "fuzzyboost/fcm.hpp"

#include "fuzzyboost/detail/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fuzzyboost {

namespace {

constexpr double kCoincidenceDistance = 1e-12;
constexpr double kCoincidenceDistanceSq = kCoincidenceDistance * kCoincidenceDistance;

// Squared Euclidean distances between every prototype (rows of V) and every
// point (rows of X); result is c x N.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& prototypes, const Eigen::MatrixXd& points) {
    Eigen::MatrixXd d2 = -2.0 * prototypes * points.transpose();
    d2.colwise() += prototypes.rowwise().squaredNorm();
    d2.rowwise() += points.rowwise().squaredNorm().transpose();
    return d2.cwiseMax(0.0);
}

// Inverse-distance-ratio memberships from squared distances. Each column is
// normalized against its own minimum so the power never overflows.
Eigen::MatrixXd memberships_from_distances(const Eigen::MatrixXd& d2, double fuzzifier) {
    const Eigen::Index c = d2.rows();
    const Eigen::Index n = d2.cols();
    const double exponent = 1.0 / (fuzzifier - 1.0);
    Eigen::MatrixXd u(c, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double d_min = d2.col(j).minCoeff();
        if (d_min < kCoincidenceDistanceSq) {
            // analytic limit: full membership at coincident prototypes
            int hits = 0;
            for (Eigen::Index i = 0; i < c; ++i) {
                if (d2(i, j) < kCoincidenceDistanceSq) ++hits;
            }
            for (Eigen::Index i = 0; i < c; ++i) {
                u(i, j) = (d2(i, j) < kCoincidenceDistanceSq) ? 1.0 / hits : 0.0;
            }
            continue;
        }
        Eigen::ArrayXd weights = (d2.col(j).array() / d_min).pow(-exponent);
        u.col(j) = weights / weights.sum();
    }
    return u;
}

// Prototype update: u^m-weighted mean of the points. A cluster whose total
// weight underflows keeps its previous prototype.
Eigen::MatrixXd update_prototypes(const Eigen::MatrixXd& memberships, double fuzzifier,
                                  const Eigen::MatrixXd& points,
                                  const Eigen::MatrixXd& previous) {
    const Eigen::MatrixXd weights = memberships.array().pow(fuzzifier).matrix();
    const Eigen::VectorXd totals = weights.rowwise().sum();
    Eigen::MatrixXd prototypes = weights * points;
    for (Eigen::Index i = 0; i < prototypes.rows(); ++i) {
        if (totals[i] > 1e-300) {
            prototypes.row(i) /= totals[i];
        } else {
            prototypes.row(i) = previous.row(i);
        }
    }
    return prototypes;
}

double objective_value(const Eigen::MatrixXd& memberships, double fuzzifier,
                       const Eigen::MatrixXd& d2) {
    return (memberships.array().pow(fuzzifier) * d2.array()).sum();
}

}  // namespace

void FcmConfig::validate() const {
    if (cluster_count < 1) throw std::invalid_argument("cluster_count must be >= 1");
    if (!(fuzzifier > 1.0)) throw std::invalid_argument("fuzzifier must be > 1");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
}

std::pair<FcmModel, Eigen::MatrixXd> fcm_fit(const Eigen::MatrixXd& data, const FcmConfig& config) {
    config.validate();
    const Eigen::Index n_points = data.rows();
    const Eigen::Index c = config.cluster_count;
    if (n_points == 0 || data.cols() == 0) throw std::invalid_argument("fcm_fit requires non-empty data");
    if (!data.allFinite()) throw std::invalid_argument("fcm_fit requires finite data");
    if (n_points < c) {
        throw std::invalid_argument("fcm_fit requires at least as many points as clusters");
    }

    // random column-normalized membership init
    detail::Rng rng(config.seed);
    Eigen::MatrixXd memberships(c, n_points);
    for (Eigen::Index j = 0; j < n_points; ++j) {
        double column_sum = 0.0;
        for (Eigen::Index i = 0; i < c; ++i) {
            // keep clear of exact zero so u^m weights stay well-defined
            const double value = rng.uniform01() + 1e-12;
            memberships(i, j) = value;
            column_sum += value;
        }
        memberships.col(j) /= column_sum;
    }

    FcmModel model;
    model.fuzzifier = config.fuzzifier;
    model.config = config;
    Eigen::MatrixXd prototypes = data.topRows(c);  // fallback only; overwritten below

    for (int iteration = 0; iteration < config.max_iterations; ++iteration) {
        prototypes = update_prototypes(memberships, config.fuzzifier, data, prototypes);
        const Eigen::MatrixXd d2 = squared_distances(prototypes, data);
        const Eigen::MatrixXd updated = memberships_from_distances(d2, config.fuzzifier);
        const double delta = (updated - memberships).cwiseAbs().maxCoeff();
        memberships = updated;
        model.objective_trace.push_back(objective_value(memberships, config.fuzzifier, d2));
        if (delta < config.tolerance) break;
    }

    model.prototypes = std::move(prototypes);
    if (!model.prototypes.allFinite()) {
        throw std::runtime_error("fcm_fit produced non-finite prototypes");
    }
    return {std::move(model), std::move(memberships)};
}

Eigen::VectorXd fcm_membership(const FcmModel& model, const Eigen::VectorXd& point) {
    return fcm_membership_batch(model, point.transpose());
}

Eigen::MatrixXd fcm_membership_batch(const FcmModel& model, const Eigen::MatrixXd& points) {
    if (points.cols() != model.prototypes.cols()) {
        throw std::invalid_argument("point dimension does not match prototypes");
    }
    if (!points.allFinite()) throw std::invalid_argument("membership evaluation requires finite points");
    const Eigen::MatrixXd d2 = squared_distances(model.prototypes, points);
    return memberships_from_distances(d2, model.fuzzifier);
}

double fcm_objective(const FcmModel& model, const Eigen::MatrixXd& data,
                     const Eigen::MatrixXd& memberships) {
    if (data.cols() != model.prototypes.cols() || memberships.rows() != model.prototypes.rows() ||
        memberships.cols() != data.rows()) {
        throw std::invalid_argument("fcm_objective shape mismatch");
    }
    return objective_value(memberships, model.fuzzifier, squared_distances(model.prototypes, data));
}

}  // namespace fuzzyboost
