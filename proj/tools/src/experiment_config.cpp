#include "experiment_config.hpp"

#include <fuzzyboost/serialization.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fuzzyboost::cli {

namespace {

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, const std::string& key) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(value)) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': cannot parse number '" + text + "'");
    }
}

long long parse_integer(const std::string& text, const std::string& key) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("config key '" + key + "': cannot parse integer '" + text + "'");
    }
    return value;
}

std::vector<std::string> split_on(const std::string& text, char separator) {
    std::vector<std::string> parts;
    std::stringstream stream(text);
    std::string part;
    while (std::getline(stream, part, separator)) parts.push_back(trim(part));
    return parts;
}

template <typename T>
std::string join(const std::vector<T>& values) {
    std::ostringstream out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out << ',';
        if constexpr (std::is_same_v<T, double>) {
            out << format_double(values[i]);
        } else {
            out << values[i];
        }
    }
    return out.str();
}

}  // namespace

std::vector<int> parse_int_grid(const std::string& text) {
    const std::string body = trim(text);
    if (body.find(':') != std::string::npos) {
        const auto parts = split_on(body, ':');
        if (parts.size() < 2 || parts.size() > 3) {
            throw std::invalid_argument("integer range must be first:last[:step]: " + text);
        }
        const long long first = parse_integer(parts[0], "grid");
        const long long last = parse_integer(parts[1], "grid");
        const long long step = parts.size() == 3 ? parse_integer(parts[2], "grid") : 1;
        if (step < 1 || last < first) throw std::invalid_argument("bad integer range: " + text);
        std::vector<int> values;
        for (long long v = first; v <= last; v += step) values.push_back(static_cast<int>(v));
        return values;
    }
    std::vector<int> values;
    for (const std::string& part : split_on(body, ',')) {
        if (!part.empty()) values.push_back(static_cast<int>(parse_integer(part, "grid")));
    }
    if (values.empty()) throw std::invalid_argument("empty integer grid: " + text);
    return values;
}

std::vector<double> parse_double_grid(const std::string& text) {
    const std::string body = trim(text);
    if (body.find(':') != std::string::npos) {
        const auto parts = split_on(body, ':');
        if (parts.size() < 2 || parts.size() > 3) {
            throw std::invalid_argument("range must be first:last[:step]: " + text);
        }
        const double first = parse_double(parts[0], "grid");
        const double last = parse_double(parts[1], "grid");
        const double step = parts.size() == 3 ? parse_double(parts[2], "grid") : 1.0;
        return value_range(first, last, step);
    }
    std::vector<double> values;
    for (const std::string& part : split_on(body, ',')) {
        if (!part.empty()) values.push_back(parse_double(part, "grid"));
    }
    if (values.empty()) throw std::invalid_argument("empty grid: " + text);
    return values;
}

void ExperimentConfig::apply(const std::string& raw_key, const std::string& raw_value) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);

    if (key == "dataset") {
        dataset = value;
    } else if (key == "target") {
        target = value;
    } else if (key == "synthetic_count") {
        synthetic_count = static_cast<std::size_t>(parse_integer(value, key));
    } else if (key == "synthetic_x_min") {
        synthetic_x_min = parse_double(value, key);
    } else if (key == "synthetic_x_max") {
        synthetic_x_max = parse_double(value, key);
    } else if (key == "test_fraction") {
        test_fraction = parse_double(value, key);
    } else if (key == "seed") {
        seed = static_cast<std::uint64_t>(parse_integer(value, key));
        boost.seed = seed;
    } else if (key == "mode") {
        mode = value;
    } else if (key == "fixed_lambdas") {
        fixed_lambdas = parse_double_grid(value);
    } else if (key == "output_dir") {
        output_dir = value;
    } else if (key == "preset") {
        if (value == "large") {
            // escalated search for the big benchmark datasets; later keys
            // still override the preset's grid and stage count
            const std::uint64_t keep_seed = boost.seed;
            const int keep_threads = boost.threads;
            boost = BoostConfig::large_dataset_preset();
            boost.seed = keep_seed;
            boost.threads = keep_threads;
        } else if (!value.empty()) {
            throw std::invalid_argument("unknown preset '" + value + "' (expected: large)");
        }
    } else if (key == "max_stages") {
        boost.max_stages = static_cast<int>(parse_integer(value, key));
    } else if (key == "tolerance") {
        boost.tolerance = parse_double(value, key);
    } else if (key == "patience") {
        boost.patience = static_cast<int>(parse_integer(value, key));
    } else if (key == "cluster_grid") {
        boost.cluster_grid = parse_int_grid(value);
    } else if (key == "fuzzifier_grid") {
        boost.fuzzifier_grid = parse_double_grid(value);
    } else if (key == "lambda_grid") {
        boost.lambda_grid = parse_double_grid(value);
    } else if (key == "ridge_grid") {
        boost.ridge_grid = parse_double_grid(value);
    } else if (key == "subsample_fraction") {
        boost.subsample_fraction = parse_double(value, key);
    } else if (key == "threads") {
        boost.threads = static_cast<int>(parse_integer(value, key));
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

void ExperimentConfig::apply_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(file, line)) {
        ++line_number;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto equals = body.find('=');
        if (equals == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(line_number) +
                                        ": expected key = value");
        }
        apply(body.substr(0, equals), body.substr(equals + 1));
    }
}

void ExperimentConfig::apply_override(const std::string& assignment) {
    const auto equals = assignment.find('=');
    if (equals == std::string::npos) {
        throw std::invalid_argument("override must be key=value: " + assignment);
    }
    apply(assignment.substr(0, equals), assignment.substr(equals + 1));
}

void ExperimentConfig::validate() const {
    if (dataset.empty()) throw std::invalid_argument("dataset must be 'synthetic' or a CSV path");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("test_fraction must lie in (0, 1)");
    }
    if (mode != "dynamic" && mode != "fixed" && mode != "sweep") {
        throw std::invalid_argument("mode must be dynamic, fixed, or sweep");
    }
    if (mode == "fixed") {
        if (fixed_lambdas.empty()) throw std::invalid_argument("fixed mode needs fixed_lambdas");
        for (double lambda : fixed_lambdas) {
            if (!(lambda > 0.0)) throw std::invalid_argument("fixed lambdas must be > 0");
        }
    }
    if (dataset == "synthetic") {
        if (synthetic_count < 2) throw std::invalid_argument("synthetic_count must be >= 2");
        if (synthetic_x_min < 0.0) throw std::invalid_argument("synthetic_x_min must be >= 0");
        if (!(synthetic_x_min < synthetic_x_max)) {
            throw std::invalid_argument("synthetic_x_min must be < synthetic_x_max");
        }
    }
    boost.validate();
}

Dataset ExperimentConfig::load() const {
    if (dataset == "synthetic") {
        return generate_synthetic(synthetic_count, synthetic_x_min, synthetic_x_max);
    }
    return load_csv(dataset, target);
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream out;
    out << "dataset = " << dataset << '\n';
    out << "target = " << target << '\n';
    out << "synthetic_count = " << synthetic_count << '\n';
    out << "synthetic_x_min = " << format_double(synthetic_x_min) << '\n';
    out << "synthetic_x_max = " << format_double(synthetic_x_max) << '\n';
    out << "test_fraction = " << format_double(test_fraction) << '\n';
    out << "seed = " << seed << '\n';
    out << "mode = " << mode << '\n';
    out << "fixed_lambdas = " << join(fixed_lambdas) << '\n';
    out << "output_dir = " << output_dir << '\n';
    out << "max_stages = " << boost.max_stages << '\n';
    out << "tolerance = " << format_double(boost.tolerance) << '\n';
    out << "patience = " << boost.patience << '\n';
    out << "cluster_grid = " << join(boost.cluster_grid) << '\n';
    out << "fuzzifier_grid = " << join(boost.fuzzifier_grid) << '\n';
    out << "lambda_grid = " << join(boost.lambda_grid) << '\n';
    out << "ridge_grid = " << join(boost.ridge_grid) << '\n';
    out << "subsample_fraction = " << format_double(boost.subsample_fraction) << '\n';
    out << "threads = " << boost.threads << '\n';
    return out.str();
}

}  // namespace fuzzyboost::cli
