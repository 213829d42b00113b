#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace fuzzyboost {

/// In-memory regression dataset: one feature row per sample plus a scalar
/// target. Immutable by convention once built; all fitting code treats it
/// as read-only.
struct Dataset {
    Eigen::MatrixXd features;  // N x n, row per sample
    Eigen::VectorXd targets;   // N
    std::vector<std::string> feature_names;
    std::string target_name;

    Eigen::Index row_count() const { return features.rows(); }
    Eigen::Index feature_count() const { return features.cols(); }

    /// Throws std::invalid_argument on shape mismatch, empty data, or
    /// non-finite values.
    void validate() const;
};

/// Raw numeric CSV contents: header plus all-double rows. Unlike a Dataset
/// this may be empty (header only) and has no target column.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Strict comma-separated reader: mandatory header, unique column names,
/// every cell a finite real. Errors name the offending file line and column.
CsvTable read_csv_numeric(const std::string& path);

/// Loads a CSV into a Dataset. `target_column` picks the target by name;
/// empty selects the last column. Requires at least one data row.
Dataset load_csv(const std::string& path, const std::string& target_column = "");

/// The 1-D benchmark curve y = sin(x) + sqrt(x/2) + exp(x/15) sampled at
/// `count` linearly spaced points in [x_min, x_max]. Requires x_min >= 0.
Dataset generate_synthetic(std::size_t count, double x_min, double x_max);

/// Disjoint row partition covering 0..N-1 exactly once. Each list is kept
/// sorted ascending so serialized forms compare byte-for-byte.
struct SplitIndices {
    std::vector<Eigen::Index> train;
    std::vector<Eigen::Index> validation;
    std::vector<Eigen::Index> test;

    void validate(Eigen::Index row_count) const;
};

/// Seeded shuffle split: ~`test_fraction` of rows go to test, the rest are
/// partitioned 2:1 into train:validation (validation = floor(rest / 3)).
/// Same (N, fraction, seed) always produces identical indices.
/// `required_train_rows` lets callers demand enough rows for downstream
/// cluster counts.
SplitIndices split(const Dataset& dataset, double test_fraction, std::uint64_t seed,
                   Eigen::Index required_train_rows = 2);

/// Per-column z-scoring statistics, fit on training rows only. Constant
/// columns get stddev 1 (identity transform) and a flag.
struct StandardScaler {
    Eigen::VectorXd feature_means;
    Eigen::VectorXd feature_stds;
    std::vector<bool> feature_constant;
    double target_mean = 0.0;
    double target_std = 1.0;
    bool target_constant = false;

    Eigen::MatrixXd transform_features(const Eigen::MatrixXd& raw) const;
    Eigen::VectorXd transform_feature_row(const Eigen::VectorXd& raw) const;
    Eigen::VectorXd transform_targets(const Eigen::VectorXd& raw) const;
    double transform_target(double raw) const;

    Eigen::MatrixXd invert_features(const Eigen::MatrixXd& standardized) const;
    Eigen::VectorXd invert_targets(const Eigen::VectorXd& standardized) const;
    double invert_target(double standardized) const;

    static StandardScaler identity(Eigen::Index feature_count);
};

/// Population mean/stddev over the given rows only (never validation or
/// test rows). `rows` must be non-empty.
StandardScaler fit_scaler(const Dataset& dataset, const std::vector<Eigen::Index>& rows);

/// Row gather helpers used everywhere a split view is needed.
Eigen::MatrixXd select_rows(const Eigen::MatrixXd& matrix, const std::vector<Eigen::Index>& rows);
Eigen::VectorXd select_rows(const Eigen::VectorXd& vector, const std::vector<Eigen::Index>& rows);

}  // namespace fuzzyboost
