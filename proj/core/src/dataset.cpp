#include "fuzzyboost/dataset.hpp"

#include "fuzzyboost/detail/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace fuzzyboost {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream stream(line);
    while (std::getline(stream, cell, ',')) {
        // trim whitespace/CR and optional surrounding quotes
        auto begin = cell.find_first_not_of(" \t\r");
        auto end = cell.find_last_not_of(" \t\r");
        cell = (begin == std::string::npos) ? std::string{} : cell.substr(begin, end - begin + 1);
        if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
            cell = cell.substr(1, cell.size() - 2);
        }
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& text, std::size_t file_line, const std::string& column) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw std::invalid_argument("unparseable cell '" + text + "' at line " +
                                    std::to_string(file_line) + ", column '" + column + "'");
    }
    return value;
}

}  // namespace

void Dataset::validate() const {
    if (features.rows() < 1 || features.cols() < 1) {
        throw std::invalid_argument("dataset requires at least one row and one feature");
    }
    if (features.rows() != targets.size()) {
        throw std::invalid_argument("feature row count does not match target length");
    }
    if (!features.allFinite() || !targets.allFinite()) {
        throw std::invalid_argument("dataset contains non-finite values");
    }
    if (!feature_names.empty() &&
        static_cast<Eigen::Index>(feature_names.size()) != features.cols()) {
        throw std::invalid_argument("feature name count does not match feature columns");
    }
}

CsvTable read_csv_numeric(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw std::invalid_argument("cannot open CSV file: " + path);
    }

    CsvTable table;
    std::string line;
    if (!std::getline(file, line)) {
        throw std::invalid_argument("empty CSV file (missing header): " + path);
    }
    table.header = split_line(line);
    if (table.header.empty()) {
        throw std::invalid_argument("CSV header row has no columns: " + path);
    }
    {
        std::unordered_set<std::string> seen;
        for (const auto& name : table.header) {
            if (!seen.insert(name).second) {
                throw std::invalid_argument("duplicate column name '" + name + "' in " + path);
            }
        }
    }

    std::size_t file_line = 1;
    while (std::getline(file, line)) {
        ++file_line;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != table.header.size()) {
            throw std::invalid_argument("line " + std::to_string(file_line) + " has " +
                                        std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(table.header.size()));
        }
        std::vector<double> row(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            row[i] = parse_cell(cells[i], file_line, table.header[i]);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

Dataset load_csv(const std::string& path, const std::string& target_column) {
    const CsvTable table = read_csv_numeric(path);
    const std::vector<std::string>& header = table.header;
    const std::vector<std::vector<double>>& rows = table.rows;

    std::size_t target_index = header.size() - 1;
    if (!target_column.empty()) {
        auto it = std::find(header.begin(), header.end(), target_column);
        if (it == header.end()) {
            throw std::invalid_argument("target column '" + target_column + "' not found in " + path);
        }
        target_index = static_cast<std::size_t>(it - header.begin());
    }
    if (header.size() < 2) {
        throw std::invalid_argument("CSV needs at least one feature column besides the target: " + path);
    }
    if (rows.empty()) {
        throw std::invalid_argument("CSV contains a header but no data rows: " + path);
    }

    Dataset dataset;
    const Eigen::Index n_rows = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index n_features = static_cast<Eigen::Index>(header.size() - 1);
    dataset.features.resize(n_rows, n_features);
    dataset.targets.resize(n_rows);
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != target_index) dataset.feature_names.push_back(header[c]);
    }
    dataset.target_name = header[target_index];
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        Eigen::Index f = 0;
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c == target_index) {
                dataset.targets[r] = rows[static_cast<std::size_t>(r)][c];
            } else {
                dataset.features(r, f++) = rows[static_cast<std::size_t>(r)][c];
            }
        }
    }
    dataset.validate();
    return dataset;
}

Dataset generate_synthetic(std::size_t count, double x_min, double x_max) {
    if (count < 2) {
        throw std::invalid_argument("synthetic generator needs count >= 2");
    }
    if (!(x_min < x_max)) {
        throw std::invalid_argument("synthetic generator needs x_min < x_max");
    }
    if (x_min < 0.0) {
        throw std::invalid_argument("synthetic generator needs x_min >= 0 (sqrt domain)");
    }

    Dataset dataset;
    const Eigen::Index n = static_cast<Eigen::Index>(count);
    dataset.features.resize(n, 1);
    dataset.targets.resize(n);
    const double step = (x_max - x_min) / static_cast<double>(count - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = (i + 1 == n) ? x_max : x_min + step * static_cast<double>(i);
        dataset.features(i, 0) = x;
        dataset.targets[i] = std::sin(x) + std::sqrt(x / 2.0) + std::exp(x / 15.0);
    }
    dataset.feature_names = {"x"};
    dataset.target_name = "y";
    dataset.validate();
    return dataset;
}

void SplitIndices::validate(Eigen::Index row_count) const {
    std::vector<Eigen::Index> all;
    all.reserve(train.size() + validation.size() + test.size());
    all.insert(all.end(), train.begin(), train.end());
    all.insert(all.end(), validation.begin(), validation.end());
    all.insert(all.end(), test.begin(), test.end());
    if (static_cast<Eigen::Index>(all.size()) != row_count) {
        throw std::invalid_argument("split does not cover every row exactly once");
    }
    std::sort(all.begin(), all.end());
    for (Eigen::Index i = 0; i < row_count; ++i) {
        if (all[static_cast<std::size_t>(i)] != i) {
            throw std::invalid_argument("split indices are not a permutation of 0..N-1");
        }
    }
}

SplitIndices split(const Dataset& dataset, double test_fraction, std::uint64_t seed,
                   Eigen::Index required_train_rows) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("test_fraction must lie in (0, 1)");
    }
    const Eigen::Index n = dataset.row_count();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    detail::Rng rng(seed);
    rng.shuffle(order);

    const auto test_count =
        static_cast<Eigen::Index>(std::llround(static_cast<double>(n) * test_fraction));
    if (test_count < 1 || test_count >= n) {
        throw std::invalid_argument("test_fraction leaves no usable test or train rows");
    }
    const Eigen::Index rest = n - test_count;
    const Eigen::Index validation_count = rest / 3;
    const Eigen::Index train_count = rest - validation_count;
    if (train_count < std::max<Eigen::Index>(required_train_rows, 2)) {
        throw std::invalid_argument("test_fraction leaves fewer train rows than required (" +
                                    std::to_string(train_count) + " < " +
                                    std::to_string(std::max<Eigen::Index>(required_train_rows, 2)) + ")");
    }

    SplitIndices indices;
    indices.test.assign(order.begin(), order.begin() + test_count);
    indices.validation.assign(order.begin() + test_count, order.begin() + test_count + validation_count);
    indices.train.assign(order.begin() + test_count + validation_count, order.end());
    std::sort(indices.test.begin(), indices.test.end());
    std::sort(indices.validation.begin(), indices.validation.end());
    std::sort(indices.train.begin(), indices.train.end());
    indices.validate(n);
    return indices;
}

Eigen::MatrixXd StandardScaler::transform_features(const Eigen::MatrixXd& raw) const {
    if (raw.cols() != feature_means.size()) {
        throw std::invalid_argument("scaler feature dimension mismatch");
    }
    return (raw.rowwise() - feature_means.transpose()).array().rowwise() /
           feature_stds.transpose().array();
}

Eigen::VectorXd StandardScaler::transform_feature_row(const Eigen::VectorXd& raw) const {
    if (raw.size() != feature_means.size()) {
        throw std::invalid_argument("scaler feature dimension mismatch");
    }
    return (raw - feature_means).cwiseQuotient(feature_stds);
}

Eigen::VectorXd StandardScaler::transform_targets(const Eigen::VectorXd& raw) const {
    return (raw.array() - target_mean) / target_std;
}

double StandardScaler::transform_target(double raw) const {
    return (raw - target_mean) / target_std;
}

Eigen::MatrixXd StandardScaler::invert_features(const Eigen::MatrixXd& standardized) const {
    return (standardized.array().rowwise() * feature_stds.transpose().array()).rowwise() +
           feature_means.transpose().array();
}

Eigen::VectorXd StandardScaler::invert_targets(const Eigen::VectorXd& standardized) const {
    return standardized.array() * target_std + target_mean;
}

double StandardScaler::invert_target(double standardized) const {
    return standardized * target_std + target_mean;
}

StandardScaler StandardScaler::identity(Eigen::Index feature_count) {
    StandardScaler scaler;
    scaler.feature_means = Eigen::VectorXd::Zero(feature_count);
    scaler.feature_stds = Eigen::VectorXd::Ones(feature_count);
    scaler.feature_constant.assign(static_cast<std::size_t>(feature_count), false);
    return scaler;
}

StandardScaler fit_scaler(const Dataset& dataset, const std::vector<Eigen::Index>& rows) {
    if (rows.empty()) {
        throw std::invalid_argument("fit_scaler requires a non-empty row set");
    }
    const Eigen::MatrixXd X = select_rows(dataset.features, rows);
    const Eigen::VectorXd y = select_rows(dataset.targets, rows);
    const double count = static_cast<double>(rows.size());

    StandardScaler scaler;
    scaler.feature_means = X.colwise().mean();
    Eigen::MatrixXd centered = X.rowwise() - scaler.feature_means.transpose();
    Eigen::VectorXd variance = centered.array().square().colwise().sum() / count;
    scaler.feature_stds.resize(X.cols());
    scaler.feature_constant.assign(static_cast<std::size_t>(X.cols()), false);
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        const double std_dev = std::sqrt(variance[c]);
        if (std_dev > 0.0) {
            scaler.feature_stds[c] = std_dev;
        } else {
            scaler.feature_stds[c] = 1.0;
            scaler.feature_constant[static_cast<std::size_t>(c)] = true;
        }
    }

    scaler.target_mean = y.mean();
    const double target_var = (y.array() - scaler.target_mean).square().sum() / count;
    const double target_std = std::sqrt(target_var);
    if (target_std > 0.0) {
        scaler.target_std = target_std;
    } else {
        scaler.target_std = 1.0;
        scaler.target_constant = true;
    }
    return scaler;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& matrix, const std::vector<Eigen::Index>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), matrix.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = matrix.row(rows[i]);
    }
    return out;
}

Eigen::VectorXd select_rows(const Eigen::VectorXd& vector, const std::vector<Eigen::Index>& rows) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = vector[rows[i]];
    }
    return out;
}

}  // namespace fuzzyboost
