#include "commands.hpp"
#include "experiment_config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

// defaults < config file < --set overrides < dedicated flags
fuzzyboost::cli::ExperimentConfig assemble_config(const std::string& config_path,
                                                  const std::vector<std::string>& overrides,
                                                  const std::vector<std::string>& flag_settings) {
    fuzzyboost::cli::ExperimentConfig config;
    if (!config_path.empty()) config.apply_file(config_path);
    for (const std::string& assignment : overrides) config.apply_override(assignment);
    for (const std::string& assignment : flag_settings) config.apply_override(assignment);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient-boosted Takagi-Sugeno fuzzy regression"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;

    // fit
    auto* fit = app.add_subcommand("fit", "train an ensemble, write model.json and trace.csv");
    std::string fit_dataset, fit_output, fit_target;
    long long fit_seed = -1;
    fit->add_option("--config", config_path, "key=value config file");
    fit->add_option("--set", overrides, "override a config key (key=value, repeatable)");
    fit->add_option("--dataset", fit_dataset, "CSV path or 'synthetic'");
    fit->add_option("--target", fit_target, "target column name");
    fit->add_option("--output-dir", fit_output, "output directory");
    fit->add_option("--seed", fit_seed, "split/fit seed");

    // predict
    auto* predict = app.add_subcommand("predict", "score a CSV through a saved model");
    std::string predict_model, predict_input, predict_output;
    bool predict_explain = false;
    predict->add_option("--model", predict_model, "model.json path")->required();
    predict->add_option("--input", predict_input, "input CSV")->required();
    predict->add_option("--output", predict_output, "predictions CSV")->required();
    predict->add_flag("--explain", predict_explain,
                      "append per-rule contributions of the largest-lambda stage");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "report RMSE of a saved model on a CSV");
    std::string eval_model, eval_input, eval_target;
    evaluate->add_option("--model", eval_model, "model.json path")->required();
    evaluate->add_option("--input", eval_input, "labelled CSV")->required();
    evaluate->add_option("--target", eval_target, "target column name (default: last column)");

    // experiment
    auto* experiment =
        app.add_subcommand("experiment", "fixed-vs-dynamic lambda traces or a parameter sweep");
    std::string experiment_mode, experiment_dataset, experiment_output;
    long long experiment_seed = -1;
    experiment->add_option("--config", config_path, "key=value config file");
    experiment->add_option("--set", overrides, "override a config key (key=value, repeatable)");
    experiment->add_option("--mode", experiment_mode, "fixed | sweep");
    experiment->add_option("--dataset", experiment_dataset, "CSV path or 'synthetic'");
    experiment->add_option("--output-dir", experiment_output, "output directory");
    experiment->add_option("--seed", experiment_seed, "split/fit seed");

    // synth
    auto* synth = app.add_subcommand("synth", "write the synthetic benchmark curve as CSV");
    std::size_t synth_count = 4000;
    double synth_x_min = 1.0;
    double synth_x_max = 4000.0;
    std::string synth_output;
    synth->add_option("--count", synth_count, "number of samples");
    synth->add_option("--x-min", synth_x_min, "domain lower bound (>= 0)");
    synth->add_option("--x-max", synth_x_max, "domain upper bound");
    synth->add_option("--output", synth_output, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::CallForAllHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 2;
    }

    try {
        if (fit->parsed()) {
            std::vector<std::string> flags;
            if (!fit_dataset.empty()) flags.push_back("dataset=" + fit_dataset);
            if (!fit_target.empty()) flags.push_back("target=" + fit_target);
            if (!fit_output.empty()) flags.push_back("output_dir=" + fit_output);
            if (fit_seed >= 0) flags.push_back("seed=" + std::to_string(fit_seed));
            return fuzzyboost::cli::cmd_fit(assemble_config(config_path, overrides, flags));
        }
        if (predict->parsed()) {
            return fuzzyboost::cli::cmd_predict(predict_model, predict_input, predict_output,
                                                predict_explain);
        }
        if (evaluate->parsed()) {
            return fuzzyboost::cli::cmd_evaluate(eval_model, eval_input, eval_target);
        }
        if (experiment->parsed()) {
            std::vector<std::string> flags;
            if (!experiment_dataset.empty()) flags.push_back("dataset=" + experiment_dataset);
            if (!experiment_mode.empty()) flags.push_back("mode=" + experiment_mode);
            if (!experiment_output.empty()) flags.push_back("output_dir=" + experiment_output);
            if (experiment_seed >= 0) flags.push_back("seed=" + std::to_string(experiment_seed));
            return fuzzyboost::cli::cmd_experiment(assemble_config(config_path, overrides, flags));
        }
        if (synth->parsed()) {
            return fuzzyboost::cli::cmd_synth(synth_count, synth_x_min, synth_x_max, synth_output);
        }
    } catch (const std::invalid_argument& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 2;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }
    return 0;
}
