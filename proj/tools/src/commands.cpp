#include "commands.hpp"

#include <fuzzyboost/metrics.hpp>
#include <fuzzyboost/serialization.hpp>

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fuzzyboost::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << content;
    if (!out.good()) throw std::runtime_error("failed writing file: " + path.string());
}

// Writes every (path, content) pair via a temp file and renames at the end;
// on any failure nothing of the batch remains.
void write_outputs_atomically(const std::vector<std::pair<fs::path, std::string>>& outputs) {
    std::vector<fs::path> temps;
    std::vector<fs::path> finals;
    try {
        for (const auto& [path, content] : outputs) {
            fs::path temp = path;
            temp += ".tmp";
            write_file(temp, content);
            temps.push_back(temp);
        }
        for (std::size_t i = 0; i < outputs.size(); ++i) {
            fs::rename(temps[i], outputs[i].first);
            finals.push_back(outputs[i].first);
        }
    } catch (...) {
        std::error_code ec;
        for (const fs::path& temp : temps) fs::remove(temp, ec);
        for (const fs::path& final_path : finals) fs::remove(final_path, ec);
        throw;
    }
}

Eigen::Index required_train_rows(const BoostConfig& config) {
    const int max_clusters =
        *std::max_element(config.cluster_grid.begin(), config.cluster_grid.end());
    return 2 * static_cast<Eigen::Index>(max_clusters);
}

// Reorders CSV columns into the model's feature order; every model feature
// must be present by name, extra columns are ignored.
Eigen::MatrixXd features_by_name(const CsvTable& table, const std::vector<std::string>& names,
                                 const std::string& context) {
    std::vector<std::size_t> mapping;
    mapping.reserve(names.size());
    for (const std::string& name : names) {
        const auto it = std::find(table.header.begin(), table.header.end(), name);
        if (it == table.header.end()) {
            throw std::invalid_argument(context + " is missing feature column '" + name + "'");
        }
        mapping.push_back(static_cast<std::size_t>(it - table.header.begin()));
    }
    Eigen::MatrixXd features(static_cast<Eigen::Index>(table.rows.size()),
                             static_cast<Eigen::Index>(names.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = 0; c < mapping.size(); ++c) {
            features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                table.rows[r][mapping[c]];
        }
    }
    return features;
}

nlohmann::ordered_json report_json(const EvalReport& report) {
    nlohmann::ordered_json out;
    out["rmse"] = report.rmse;
    out["n"] = report.n;
    out["target_units"] = to_string(report.target_units);
    return out;
}

struct NamedRun {
    std::string name;
    BoostedEnsemble ensemble;
    IterationTrace trace;
};

std::string curves_csv(const std::vector<NamedRun>& runs, const Dataset& dataset,
                       const SplitIndices& splits) {
    const Eigen::MatrixXd X_val = select_rows(dataset.features, splits.validation);
    const Eigen::VectorXd y_val = select_rows(dataset.targets, splits.validation);
    const Eigen::MatrixXd X_test = select_rows(dataset.features, splits.test);
    const Eigen::VectorXd y_test = select_rows(dataset.targets, splits.test);

    std::vector<std::vector<double>> val_curves;
    std::vector<std::vector<double>> test_curves;
    std::size_t longest = 0;
    for (const NamedRun& run : runs) {
        val_curves.push_back(prefix_rmse_trace(run.ensemble, X_val, y_val));
        test_curves.push_back(prefix_rmse_trace(run.ensemble, X_test, y_test));
        longest = std::max(longest, val_curves.back().size());
    }

    std::ostringstream out;
    out << "stage";
    for (const NamedRun& run : runs) out << ',' << run.name << "_val," << run.name << "_test";
    out << '\n';
    for (std::size_t stage = 0; stage < longest; ++stage) {
        out << stage;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            out << ',';
            if (stage < val_curves[i].size()) out << format_double(val_curves[i][stage]);
            out << ',';
            if (stage < test_curves[i].size()) out << format_double(test_curves[i][stage]);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace

int cmd_fit(const ExperimentConfig& config) {
    config.validate();
    const Dataset dataset = config.load();
    const SplitIndices splits =
        split(dataset, config.test_fraction, config.seed, required_train_rows(config.boost));

    auto [ensemble, trace] = boost_fit(dataset, splits, config.boost);
    fill_test_rmse(trace, ensemble, dataset, splits.test);

    const fs::path out_dir(config.output_dir);
    fs::create_directories(out_dir);
    write_outputs_atomically({{out_dir / "model.json", model_to_json(ensemble)},
                              {out_dir / "trace.csv", trace_to_csv(trace)}});

    const std::size_t attempted = trace.size() - 1;
    double validation_rmse = trace.front().validation_rmse;
    for (const StageRecord& record : trace) {
        if (record.accepted) validation_rmse = record.validation_rmse;
    }
    const EvalReport test = evaluate(ensemble, dataset, splits.test, TargetUnits::standardized);

    std::cout << "fit: accepted " << ensemble.stage_count() << "/" << attempted
              << " stages, validation rmse " << format_double(validation_rmse) << ", test rmse "
              << format_double(test.rmse) << " (standardized)\n";
    std::cout << "model: " << (out_dir / "model.json").string() << '\n';
    std::cout << "trace: " << (out_dir / "trace.csv").string() << '\n';
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input_csv,
                const std::string& output_csv, bool explain) {
    const BoostedEnsemble ensemble = load_model(model_path);
    const CsvTable table = read_csv_numeric(input_csv);
    const Eigen::MatrixXd features = features_by_name(table, ensemble.feature_names, "input CSV");
    const Eigen::VectorXd predictions = boost_predict_batch(ensemble, features);

    const TskModel* explained_stage = nullptr;
    double explained_lambda = 0.0;
    if (explain) {
        for (const BoostStage& stage : ensemble.stages) {
            if (explained_stage == nullptr || stage.lambda > explained_lambda) {
                explained_stage = &stage.model;
                explained_lambda = stage.lambda;
            }
        }
        if (explained_stage == nullptr) {
            std::cerr << "warning: model has no stages, nothing to explain\n";
        }
    }

    std::ostringstream out;
    out << "prediction";
    if (explained_stage != nullptr) {
        for (int rule = 0; rule < explained_stage->rule_count(); ++rule) {
            out << ",rule" << rule << "_contribution";
        }
    }
    out << '\n';
    for (Eigen::Index r = 0; r < predictions.size(); ++r) {
        out << format_double(predictions[r]);
        if (explained_stage != nullptr) {
            const Eigen::VectorXd standardized =
                ensemble.scaler.transform_feature_row(features.row(r).transpose());
            for (const RuleContribution& rule : tsk_explain(*explained_stage, standardized)) {
                out << ',' << format_double(rule.contribution);
            }
        }
        out << '\n';
    }

    const fs::path out_path(output_csv);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    write_outputs_atomically({{out_path, out.str()}});

    std::cout << "predict: " << predictions.size() << " rows -> " << output_csv << '\n';
    if (explained_stage != nullptr) {
        std::cout << "explain: stage with lambda " << format_double(explained_lambda)
                  << ", contributions in standardized target units\n";
    }
    return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& input_csv,
                 const std::string& target_column) {
    const BoostedEnsemble ensemble = load_model(model_path);
    const Dataset loaded = load_csv(input_csv, target_column);

    CsvTable table;
    table.header = loaded.feature_names;
    table.rows.resize(static_cast<std::size_t>(loaded.row_count()));
    for (Eigen::Index r = 0; r < loaded.row_count(); ++r) {
        auto& row = table.rows[static_cast<std::size_t>(r)];
        row.resize(static_cast<std::size_t>(loaded.feature_count()));
        for (Eigen::Index c = 0; c < loaded.feature_count(); ++c) {
            row[static_cast<std::size_t>(c)] = loaded.features(r, c);
        }
    }

    Dataset aligned;
    aligned.features = features_by_name(table, ensemble.feature_names, "evaluation CSV");
    aligned.targets = loaded.targets;
    aligned.feature_names = ensemble.feature_names;
    aligned.target_name = loaded.target_name;

    std::vector<Eigen::Index> all_rows(static_cast<std::size_t>(aligned.row_count()));
    for (Eigen::Index i = 0; i < aligned.row_count(); ++i) {
        all_rows[static_cast<std::size_t>(i)] = i;
    }

    nlohmann::ordered_json document;
    document["standardized"] =
        report_json(evaluate(ensemble, aligned, all_rows, TargetUnits::standardized));
    document["raw"] = report_json(evaluate(ensemble, aligned, all_rows, TargetUnits::raw));
    std::cout << document.dump(2) << '\n';
    return 0;
}

int cmd_experiment(const ExperimentConfig& config) {
    config.validate();
    if (config.mode != "fixed" && config.mode != "sweep") {
        throw std::invalid_argument("experiment requires mode=fixed or mode=sweep");
    }
    const Dataset dataset = config.load();
    const SplitIndices splits =
        split(dataset, config.test_fraction, config.seed, required_train_rows(config.boost));
    const fs::path out_dir(config.output_dir);
    fs::create_directories(out_dir);

    if (config.mode == "fixed") {
        std::vector<NamedRun> runs;
        for (double lambda : config.fixed_lambdas) {
            auto [ensemble, trace] = boost_fit_fixed_lambda(dataset, splits, config.boost, lambda);
            fill_test_rmse(trace, ensemble, dataset, splits.test);
            runs.push_back({"fixed_" + format_double(lambda), std::move(ensemble), std::move(trace)});
        }
        {
            auto [ensemble, trace] = boost_fit(dataset, splits, config.boost);
            fill_test_rmse(trace, ensemble, dataset, splits.test);
            runs.push_back({"dynamic", std::move(ensemble), std::move(trace)});
        }

        std::vector<std::pair<fs::path, std::string>> outputs;
        for (const NamedRun& run : runs) {
            outputs.emplace_back(out_dir / ("trace_" + run.name + ".csv"), trace_to_csv(run.trace));
        }
        outputs.emplace_back(out_dir / "rmse_curves.csv", curves_csv(runs, dataset, splits));
        write_outputs_atomically(outputs);

        for (const NamedRun& run : runs) {
            const EvalReport test = evaluate(run.ensemble, dataset, splits.test,
                                             TargetUnits::standardized);
            std::cout << "experiment " << run.name << ": stages " << run.ensemble.stage_count()
                      << ", test rmse " << format_double(test.rmse) << " (standardized)\n";
        }
        std::cout << "curves: " << (out_dir / "rmse_curves.csv").string() << '\n';
        return 0;
    }

    // sweep
    const SweepTable table = run_sweep(dataset, splits, config.boost.cluster_grid,
                                       config.boost.fuzzifier_grid, config.boost);
    const SweepSummary summary = summarize_sweep(table);

    nlohmann::ordered_json summary_json;
    summary_json["cells"] = summary.cells;
    summary_json["mean_improvement_percent"] = summary.mean_improvement_percent;
    summary_json["std_improvement_percent"] = summary.std_improvement_percent;

    write_outputs_atomically({{out_dir / "sweep.csv", sweep_to_csv(table)},
                              {out_dir / "summary.json", summary_json.dump(2) + "\n"}});

    std::cout << "sweep: " << summary.cells << " cells, boosted improves single-model rmse by "
              << format_double(summary.mean_improvement_percent) << "% +- "
              << format_double(summary.std_improvement_percent) << "%\n";
    std::cout << "table: " << (out_dir / "sweep.csv").string() << '\n';
    return 0;
}

int cmd_synth(std::size_t count, double x_min, double x_max, const std::string& output_path) {
    const Dataset dataset = generate_synthetic(count, x_min, x_max);

    std::ostringstream out;
    out << "x,y\n";
    for (Eigen::Index r = 0; r < dataset.row_count(); ++r) {
        out << format_double(dataset.features(r, 0)) << ',' << format_double(dataset.targets[r])
            << '\n';
    }

    const fs::path path(output_path);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_outputs_atomically({{path, out.str()}});
    std::cout << "synth: " << dataset.row_count() << " rows -> " << output_path << '\n';
    return 0;
}

}  // namespace fuzzyboost::cli
