#pragma once

#include "fuzzyboost/dataset.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

namespace test_support {

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                     double low = -3.0, double high = 3.0) {
    std::uniform_real_distribution<double> dist(low, high);
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = dist(rng);
    }
    return out;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index size, double low = -3.0,
                                     double high = 3.0) {
    std::uniform_real_distribution<double> dist(low, high);
    Eigen::VectorXd out(size);
    for (Eigen::Index i = 0; i < size; ++i) out[i] = dist(rng);
    return out;
}

// Small nonlinear regression dataset for end-to-end fixtures.
inline fuzzyboost::Dataset toy_dataset(std::mt19937_64& rng, Eigen::Index rows,
                                       Eigen::Index features = 2) {
    fuzzyboost::Dataset dataset;
    dataset.features = random_matrix(rng, rows, features);
    dataset.targets.resize(rows);
    std::normal_distribution<double> noise(0.0, 0.05);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double x0 = dataset.features(r, 0);
        const double x1 = features > 1 ? dataset.features(r, 1) : 0.0;
        dataset.targets[r] = std::sin(x0) + 0.5 * x1 * x1 + noise(rng);
    }
    for (Eigen::Index c = 0; c < features; ++c) {
        dataset.feature_names.push_back("f" + std::to_string(c));
    }
    dataset.target_name = "y";
    return dataset;
}

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        for (int attempt = 0;; ++attempt) {
            path_ = base / ("fuzzyboost_test_" + std::to_string(::getpid()) + "_" +
                            std::to_string(counter_++) + "_" + std::to_string(attempt));
            if (std::filesystem::create_directory(path_)) break;
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace test_support
