// quanting: conditional quantile estimation by reduction to binary
// classification, with a linear pinball-loss baseline and a benchmark
// harness.
//
//   quanting train  --data train.csv --method quanting-tree --q 0.5 --out model.json
//   quanting predict --model model.json --data test.csv --out predictions.txt
//   quanting eval   --model model.json --data test.csv
//   quanting bench  --data housing.csv --output-dir out/
//   quanting synth-csv --name housing --rows 506 --out data.csv

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "quanting/bench.hpp"
#include "quanting/synth_data.hpp"

namespace {

using namespace quanting;

struct SchemaFlags {
    std::string categorical;
    std::string schema_file;
    int label_column = -1;

    ColumnSchema build() const {
        ColumnSchema schema;
        if (!schema_file.empty())
            schema = ColumnSchema::from_file(schema_file);
        else
            schema = ColumnSchema::from_flags(
                categorical, label_column >= 0
                                 ? std::optional<std::size_t>(static_cast<std::size_t>(label_column))
                                 : std::nullopt);
        return schema;
    }
};

void add_schema_flags(CLI::App* cmd, SchemaFlags& flags) {
    cmd->add_option("--categorical", flags.categorical,
                    "comma-separated zero-based indices of categorical columns");
    cmd->add_option("--schema", flags.schema_file, "JSON schema sidecar file");
    cmd->add_option("--label-col", flags.label_column,
                    "zero-based label column index (default: last)");
}

Dataset load_training_data(const std::string& data, const SchemaFlags& schema,
                           std::size_t synth_rows, std::uint64_t seed) {
    if (data.rfind("synth:", 0) == 0)
        return make_synthetic_dataset({data.substr(6), synth_rows, seed});
    return preprocess(load_csv(data, schema.build()), schema.build());
}

int cmd_train(const std::string& data, const SchemaFlags& schema, const std::string& method,
              double q_value, const BenchConfig& knobs, const std::string& out_path) {
    const QuantileSpec q{q_value};
    const Dataset train = load_training_data(data, schema, knobs.synth_rows, knobs.seed);

    const auto started = std::chrono::steady_clock::now();
    const AnyModel model = train_method(method, train, q, knobs, knobs.seed);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    save_model(out_path, model);
    std::cout << "trained " << method << " (q=" << q_value << ") on " << train.rows()
              << " examples in " << seconds << "s -> " << out_path << "\n";
    return 0;
}

Dataset load_eval_data(const AnyModel& model, const std::string& data,
                       const SchemaFlags& schema, std::size_t synth_rows, std::uint64_t seed) {
    // evaluation maps labels with the model's stored normalization so losses
    // stay in original units even when test labels leave the train range
    const auto norm = [&]() -> LabelNormalization {
        if (const auto* qm = std::get_if<QuantingModel>(&model))
            return qm->ensemble.normalization;
        if (const auto* lm = std::get_if<LinearQuantileModel>(&model))
            return lm->normalization;
        return std::get<ConstantModel>(model).normalization;
    }();
    if (data.rfind("synth:", 0) == 0) {
        const Dataset own = make_synthetic_dataset({data.substr(6), synth_rows, seed});
        return Dataset::with_normalization(std::vector<double>(own.feature_values()),
                                           own.cols(), own.original_labels(), norm);
    }
    return encode_with_normalization(load_csv(data, schema.build()), schema.build(), norm);
}

int cmd_predict(const std::string& model_path, const std::string& data,
                const SchemaFlags& schema, const std::string& out_path) {
    const AnyModel model = load_model(model_path);
    const Dataset test = load_eval_data(model, data, schema, 2000, 1);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file)
            throw std::runtime_error("cannot open output file: " + out_path);
        out = &file;
    }
    out->precision(17);
    for (std::size_t i = 0; i < test.rows(); ++i)
        *out << predict_with(model, test.row(i)) << "\n";
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& data, const SchemaFlags& schema,
             const std::string& out_path, bool with_curve) {
    const AnyModel model = load_model(model_path);
    const Dataset test = load_eval_data(model, data, schema, 2000, 1);
    const EvalReport report = evaluate_model(model, test, with_curve);
    const std::string json = report_to_json(report);
    std::cout << json << "\n";
    if (!out_path.empty())
        std::ofstream(out_path) << json << "\n";
    return 0;
}

int cmd_bench(BenchConfig& config, const SchemaFlags& schema) {
    config.schema = schema.build();
    const BenchResult result = run_bench(config);
    std::cout << bench_to_table(result);
    if (!config.output_dir.empty())
        std::cout << "artifacts written to " << config.output_dir << "\n";
    return result.all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantile regression by reduction to binary classification"};
    app.require_subcommand(1);

    std::string data, method = "quanting-tree", model_path, out_path;
    double q_value = 0.5;
    bool with_curve = false;
    SchemaFlags schema;
    BenchConfig config;
    std::string scheme = "adaptive", path = "native";
    SyntheticSpec synth;

    auto add_learner_flags = [&](CLI::App* cmd) {
        cmd->add_option("--n-classifiers", config.n_classifiers, "grid size (default 100)");
        cmd->add_option("--scheme", scheme, "threshold scheme: uniform|adaptive");
        cmd->add_option("--weighted-path", path,
                        "native importance weights or rejection sampling");
        cmd->add_flag("--hard-outputs", config.hard_outputs,
                      "threshold classifier outputs at 0.5 before averaging");
        cmd->add_option("--seed", config.seed, "random seed");
        cmd->add_option("--threads", config.threads, "per-threshold training threads");
        cmd->add_option("--synth-rows", config.synth_rows, "rows for synth: datasets");
        cmd->add_option("--tree-max-depth", config.tree_config.tree_max_depth);
        cmd->add_option("--tree-min-leaf-weight", config.tree_config.tree_min_leaf_weight);
        cmd->add_option("--logreg-max-iterations", config.logreg_config.logreg_max_iterations);
        cmd->add_option("--logreg-l2", config.logreg_config.logreg_l2);
        cmd->add_option("--logreg-tolerance", config.logreg_config.logreg_tolerance);
        cmd->add_option("--linear-max-iterations", config.linear_options.max_iterations);
        cmd->add_option("--linear-tolerance", config.linear_options.tolerance);
    };

    auto* train = app.add_subcommand("train", "train a model and write a model file");
    train->add_option("--data", data, "training CSV or synth:<name>")->required();
    train->add_option("--method", method, "quanting-tree|quanting-logreg|linear|constant");
    train->add_option("--q", q_value, "target quantile in (0,1)");
    train->add_option("--out", out_path, "model file path")->required();
    add_schema_flags(train, schema);
    add_learner_flags(train);

    auto* predict = app.add_subcommand("predict", "write per-example predictions");
    predict->add_option("--model", model_path, "model file")->required();
    predict->add_option("--data", data, "CSV to predict on")->required();
    predict->add_option("--out", out_path, "output path (default: stdout)");
    add_schema_flags(predict, schema);

    auto* eval = app.add_subcommand("eval", "evaluate a model file on a test CSV");
    eval->add_option("--model", model_path, "model file")->required();
    eval->add_option("--data", data, "test CSV")->required();
    eval->add_option("--out", out_path, "also write the JSON report here");
    eval->add_flag("--curve", with_curve, "include the ensemble-size loss curve");
    add_schema_flags(eval, schema);

    auto* bench = app.add_subcommand("bench", "methods x quantiles comparison table");
    bench->add_option("--data", config.data, "CSV path or synth:<name>");
    bench->add_option("--train-data", config.train_data, "pre-split train CSV");
    bench->add_option("--test-data", config.test_data, "pre-split test CSV");
    bench->add_option("--q", config.q_values, "quantiles (default 0.1 0.5 0.9)");
    bench->add_option("--methods", config.methods, "subset of the four methods");
    bench->add_option("--train-fraction", config.train_fraction,
                      "train share when splitting one file");
    bench->add_option("--output-dir", config.output_dir, "artifact directory");
    bench->add_flag("--dump-predictions", config.dump_predictions,
                    "write per-example predictions per cell");
    add_schema_flags(bench, schema);
    add_learner_flags(bench);

    auto* synth_csv = app.add_subcommand("synth-csv", "write a synthetic dataset as CSV");
    synth_csv->add_option("--name", synth.name, "linear-exp|step|het|housing")->required();
    synth_csv->add_option("--rows", synth.rows, "row count")->required();
    synth_csv->add_option("--seed", synth.seed, "generator seed");
    synth_csv->add_option("--out", out_path, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        config.scheme = grid_scheme_from_name(scheme);
        config.path = weighted_path_from_name(path);
        config.tree_config.kind = LearnerKind::tree;
        config.logreg_config.kind = LearnerKind::logreg;

        if (train->parsed())
            return cmd_train(data, schema, method, q_value, config, out_path);
        if (predict->parsed())
            return cmd_predict(model_path, data, schema, out_path);
        if (eval->parsed())
            return cmd_eval(model_path, data, schema, out_path, with_curve);
        if (bench->parsed())
            return cmd_bench(config, schema);
        if (synth_csv->parsed()) {
            write_csv(out_path, make_synthetic_table(synth));
            std::cout << "wrote " << synth.rows << " rows to " << out_path << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
