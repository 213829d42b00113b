#include "fuzzyboost/serialization.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fuzzyboost {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormatTag = "fuzzyboost.model";
constexpr int kFormatVersion = 1;

std::string fnv1a64_hex(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char byte : text) {
        hash ^= byte;
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << hash;
    return out.str();
}

Json matrix_to_json(const Eigen::MatrixXd& matrix) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < matrix.cols(); ++c) row.push_back(matrix(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& rows) {
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = n_rows > 0 ? static_cast<Eigen::Index>(rows.at(0).size()) : 0;
    Eigen::MatrixXd matrix(n_rows, n_cols);
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        const Json& row = rows.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != n_cols) {
            throw std::runtime_error("model JSON: ragged matrix");
        }
        for (Eigen::Index c = 0; c < n_cols; ++c) {
            matrix(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
        }
    }
    return matrix;
}

Json vector_to_json(const Eigen::VectorXd& vector) {
    Json values = Json::array();
    for (Eigen::Index i = 0; i < vector.size(); ++i) values.push_back(vector[i]);
    return values;
}

Eigen::VectorXd vector_from_json(const Json& values) {
    Eigen::VectorXd vector(static_cast<Eigen::Index>(values.size()));
    for (Eigen::Index i = 0; i < vector.size(); ++i) {
        vector[i] = values.at(static_cast<std::size_t>(i)).get<double>();
    }
    return vector;
}

Json scaler_to_json(const StandardScaler& scaler) {
    Json out;
    out["feature_means"] = vector_to_json(scaler.feature_means);
    out["feature_stds"] = vector_to_json(scaler.feature_stds);
    out["feature_constant"] = scaler.feature_constant;
    out["target_mean"] = scaler.target_mean;
    out["target_std"] = scaler.target_std;
    out["target_constant"] = scaler.target_constant;
    return out;
}

StandardScaler scaler_from_json(const Json& in) {
    StandardScaler scaler;
    scaler.feature_means = vector_from_json(in.at("feature_means"));
    scaler.feature_stds = vector_from_json(in.at("feature_stds"));
    scaler.feature_constant = in.at("feature_constant").get<std::vector<bool>>();
    scaler.target_mean = in.at("target_mean").get<double>();
    scaler.target_std = in.at("target_std").get<double>();
    scaler.target_constant = in.at("target_constant").get<bool>();
    return scaler;
}

Json fcm_to_json(const FcmModel& model) {
    Json out;
    out["prototypes"] = matrix_to_json(model.prototypes);
    out["fuzzifier"] = model.fuzzifier;
    Json config;
    config["cluster_count"] = model.config.cluster_count;
    config["fuzzifier"] = model.config.fuzzifier;
    config["max_iterations"] = model.config.max_iterations;
    config["tolerance"] = model.config.tolerance;
    config["seed"] = model.config.seed;
    out["config"] = std::move(config);
    return out;
}

FcmModel fcm_from_json(const Json& in) {
    FcmModel model;
    model.prototypes = matrix_from_json(in.at("prototypes"));
    model.fuzzifier = in.at("fuzzifier").get<double>();
    const Json& config = in.at("config");
    model.config.cluster_count = config.at("cluster_count").get<int>();
    model.config.fuzzifier = config.at("fuzzifier").get<double>();
    model.config.max_iterations = config.at("max_iterations").get<int>();
    model.config.tolerance = config.at("tolerance").get<double>();
    model.config.seed = config.at("seed").get<std::uint64_t>();
    return model;
}

Json stage_to_json(const BoostStage& stage) {
    Json out;
    out["lambda"] = stage.lambda;
    Json tsk;
    tsk["ridge_penalty"] = stage.model.ridge_penalty;
    tsk["consequents"] = matrix_to_json(stage.model.consequents);
    tsk["fcm"] = fcm_to_json(stage.model.antecedent);
    out["tsk"] = std::move(tsk);
    return out;
}

BoostStage stage_from_json(const Json& in) {
    BoostStage stage;
    stage.lambda = in.at("lambda").get<double>();
    const Json& tsk = in.at("tsk");
    stage.model.ridge_penalty = tsk.at("ridge_penalty").get<double>();
    stage.model.consequents = matrix_from_json(tsk.at("consequents"));
    stage.model.antecedent = fcm_from_json(tsk.at("fcm"));
    return stage;
}

// threads is a wall-clock knob with no bearing on the fitted model, so the
// echo leaves it out and keeps artifacts reproducible across machines.
Json config_to_json(const BoostConfig& config) {
    Json out;
    out["max_stages"] = config.max_stages;
    out["tolerance"] = config.tolerance;
    out["patience"] = config.patience;
    out["cluster_grid"] = config.cluster_grid;
    out["fuzzifier_grid"] = config.fuzzifier_grid;
    out["lambda_grid"] = config.lambda_grid;
    out["ridge_grid"] = config.ridge_grid;
    out["subsample_fraction"] = config.subsample_fraction;
    out["seed"] = config.seed;
    return out;
}

BoostConfig config_from_json(const Json& in) {
    BoostConfig config;
    config.max_stages = in.at("max_stages").get<int>();
    config.tolerance = in.at("tolerance").get<double>();
    config.patience = in.at("patience").get<int>();
    config.cluster_grid = in.at("cluster_grid").get<std::vector<int>>();
    config.fuzzifier_grid = in.at("fuzzifier_grid").get<std::vector<double>>();
    config.lambda_grid = in.at("lambda_grid").get<std::vector<double>>();
    config.ridge_grid = in.at("ridge_grid").get<std::vector<double>>();
    config.subsample_fraction = in.at("subsample_fraction").get<double>();
    config.seed = in.at("seed").get<std::uint64_t>();
    return config;
}

Json ensemble_to_json(const BoostedEnsemble& ensemble) {
    Json model;
    model["zero_model"] = ensemble.zero_model;
    model["feature_names"] = ensemble.feature_names;
    model["target_name"] = ensemble.target_name;
    model["scaler"] = scaler_to_json(ensemble.scaler);
    Json stages = Json::array();
    for (const BoostStage& stage : ensemble.stages) stages.push_back(stage_to_json(stage));
    model["stages"] = std::move(stages);
    model["config"] = config_to_json(ensemble.config);
    return model;
}

BoostedEnsemble ensemble_from_json(const Json& model) {
    BoostedEnsemble ensemble;
    ensemble.zero_model = model.at("zero_model").get<double>();
    ensemble.feature_names = model.at("feature_names").get<std::vector<std::string>>();
    ensemble.target_name = model.at("target_name").get<std::string>();
    ensemble.scaler = scaler_from_json(model.at("scaler"));
    for (const Json& stage : model.at("stages")) {
        ensemble.stages.push_back(stage_from_json(stage));
    }
    ensemble.config = config_from_json(model.at("config"));
    return ensemble;
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buffer, ptr);
}

std::string model_to_json(const BoostedEnsemble& ensemble) {
    Json document;
    document["format"] = kFormatTag;
    document["format_version"] = kFormatVersion;
    const Json model = ensemble_to_json(ensemble);
    document["content_hash"] = fnv1a64_hex(model.dump());
    document["model"] = model;
    return document.dump(2) + "\n";
}

BoostedEnsemble model_from_json(const std::string& text) {
    Json document;
    try {
        document = Json::parse(text);
    } catch (const std::exception& error) {
        throw std::runtime_error(std::string("model JSON parse error: ") + error.what());
    }
    if (!document.contains("format") || document.at("format").get<std::string>() != kFormatTag) {
        throw std::runtime_error("model JSON: unrecognized format tag");
    }
    if (document.at("format_version").get<int>() != kFormatVersion) {
        throw std::runtime_error("model JSON: unsupported format version");
    }
    const Json& model = document.at("model");
    const std::string expected = document.at("content_hash").get<std::string>();
    const std::string actual = fnv1a64_hex(model.dump());
    if (expected != actual) {
        throw std::runtime_error("model JSON: content hash mismatch (file corrupted or edited)");
    }
    return ensemble_from_json(model);
}

void save_model(const BoostedEnsemble& ensemble, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write model file: " + path);
    file << model_to_json(ensemble);
    if (!file.good()) throw std::runtime_error("failed writing model file: " + path);
}

BoostedEnsemble load_model(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open model file: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return model_from_json(buffer.str());
}

std::string trace_to_csv(const IterationTrace& trace) {
    std::ostringstream out;
    out << "stage,accepted,c,m,ridge,lambda,train_rmse,val_rmse,test_rmse,seconds\n";
    for (const StageRecord& record : trace) {
        out << record.stage << ',' << (record.accepted ? 1 : 0) << ',';
        if (record.clusters) out << *record.clusters;
        out << ',';
        if (record.fuzzifier) out << format_double(*record.fuzzifier);
        out << ',';
        if (record.ridge) out << format_double(*record.ridge);
        out << ',';
        if (record.lambda) out << format_double(*record.lambda);
        out << ',' << format_double(record.train_rmse) << ',' << format_double(record.validation_rmse)
            << ',';
        if (record.test_rmse) out << format_double(*record.test_rmse);
        out << ',' << format_double(record.seconds) << '\n';
    }
    return out.str();
}

void write_trace_csv(const IterationTrace& trace, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write trace file: " + path);
    file << trace_to_csv(trace);
    if (!file.good()) throw std::runtime_error("failed writing trace file: " + path);
}

std::string sweep_to_csv(const SweepTable& table) {
    std::ostringstream out;
    out << "clusters,fuzzifier,method,test_rmse\n";
    for (const SweepRow& row : table) {
        out << row.clusters << ',' << format_double(row.fuzzifier) << ',' << to_string(row.method)
            << ',' << format_double(row.test_rmse) << '\n';
    }
    return out.str();
}

void write_sweep_csv(const SweepTable& table, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write sweep file: " + path);
    file << sweep_to_csv(table);
    if (!file.good()) throw std::runtime_error("failed writing sweep file: " + path);
}

std::string eval_report_to_json(const EvalReport& report) {
    Json out;
    out["rmse"] = report.rmse;
    out["n"] = report.n;
    out["target_units"] = to_string(report.target_units);
    return out.dump(2) + "\n";
}

}  // namespace fuzzyboost
