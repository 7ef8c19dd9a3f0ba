#include "quanting/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "quanting/rng.hpp"
#include "quanting/synth_data.hpp"

namespace quanting {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool is_quanting_method(const std::string& method) {
    return method == "quanting-tree" || method == "quanting-logreg";
}

// synth:<name> dataset designator
std::optional<std::string> synth_name(const std::string& data) {
    if (data.rfind("synth:", 0) == 0)
        return data.substr(6);
    return std::nullopt;
}

} // namespace

void BenchConfig::validate() const {
    if (methods.empty())
        throw std::invalid_argument("methods must be nonempty");
    for (const auto& m : methods)
        if (!is_quanting_method(m) && m != "linear" && m != "constant")
            throw std::invalid_argument("unknown method: " + m);
    for (double q : q_values)
        if (!(q > 0.0 && q < 1.0))
            throw std::invalid_argument("q must be in (0,1)");
    if (q_values.empty())
        throw std::invalid_argument("at least one q value required");
    if (n_classifiers == 0)
        throw std::invalid_argument("n_classifiers must be positive");
    const bool presplit = !train_data.empty() || !test_data.empty();
    if (presplit && (train_data.empty() || test_data.empty()))
        throw std::invalid_argument("pre-split mode needs both train and test paths");
    if (!presplit && data.empty())
        throw std::invalid_argument("no dataset configured");
}

std::vector<std::size_t> curve_sizes(std::size_t grid_size) {
    std::vector<std::size_t> sizes;
    for (std::size_t k : {1, 2, 5, 10, 20, 50, 100})
        if (k < grid_size)
            sizes.push_back(k);
    sizes.push_back(grid_size);
    return sizes;
}

AnyModel train_method(const std::string& method, const Dataset& train, const QuantileSpec& q,
                      const BenchConfig& config, std::uint64_t cell_seed) {
    if (method == "constant")
        return ConstantModel{empirical_quantile(train.original_labels(), q), q,
                             *train.normalization()};
    if (method == "linear")
        return fit_linear_quantile(train, q, config.linear_options);

    if (!is_quanting_method(method))
        throw std::invalid_argument("unknown method: " + method);
    LearnerConfig learner_config =
        method == "quanting-tree" ? config.tree_config : config.logreg_config;
    learner_config.kind =
        method == "quanting-tree" ? LearnerKind::tree : LearnerKind::logreg;
    learner_config.seed = cell_seed;

    auto learner = make_weighted_learner(learner_config);
    if (config.path == WeightedPath::rejection)
        learner = with_rejection_path(std::move(learner));

    const auto grid = build_grid(config.n_classifiers, config.scheme, train.labels());
    QuantingModel model;
    model.ensemble = quanting_train(train, q, grid, learner, cell_seed, config.threads,
                                    config.hard_outputs);
    model.learner = learner_config;
    model.path = config.path;
    return model;
}

EvalReport evaluate_model(const AnyModel& model, const Dataset& test, bool with_curve,
                          std::vector<double>* predictions_out) {
    const std::size_t arity = model_feature_count(model);
    if (arity != 0 && arity != test.cols())
        throw std::invalid_argument("feature arity mismatch: model expects " +
                                    std::to_string(arity) + ", data has " +
                                    std::to_string(test.cols()));

    const QuantileSpec q = model_quantile(model);
    const auto labels = test.original_labels();

    const auto started = Clock::now();
    std::vector<double> predictions(test.rows());
    for (std::size_t i = 0; i < test.rows(); ++i)
        predictions[i] = predict_with(model, test.row(i));

    EvalReport report;
    report.predict_seconds = seconds_since(started);
    report.mean_pinball_loss = mean_pinball_loss(predictions, labels, q);
    report.sum_pinball_loss = sum_pinball_loss(predictions, labels, q);
    report.coverage_below = coverage_below(predictions, labels);

    if (with_curve) {
        if (const auto* qm = std::get_if<QuantingModel>(&model)) {
            std::vector<LossCurvePoint> curve;
            for (std::size_t size : curve_sizes(qm->ensemble.size())) {
                const auto subset = spread_subset_indices(qm->ensemble.grid, size);
                std::vector<double> partial(test.rows());
                for (std::size_t i = 0; i < test.rows(); ++i)
                    partial[i] = quanting_predict_subset(qm->ensemble, test.row(i), subset);
                curve.push_back({size, mean_pinball_loss(partial, labels, q)});
            }
            report.loss_curve = std::move(curve);
        }
    }
    report.validate();
    if (predictions_out)
        *predictions_out = std::move(predictions);
    return report;
}

std::pair<Dataset, Dataset> load_bench_data(const BenchConfig& config) {
    config.validate();
    if (!config.train_data.empty()) {
        const auto train_table = load_csv(config.train_data, config.schema);
        const auto test_table = load_csv(config.test_data, config.schema);
        return preprocess_presplit(train_table, test_table, config.schema);
    }

    Dataset full = [&] {
        if (auto name = synth_name(config.data))
            return make_synthetic_dataset({*name, config.synth_rows, config.seed});
        return preprocess(load_csv(config.data, config.schema), config.schema);
    }();
    return split(full, config.train_fraction, config.seed);
}

BenchResult run_bench(const BenchConfig& config) {
    config.validate();
    auto [train, test] = load_bench_data(config);

    BenchResult result;
    std::vector<std::vector<double>> predictions;
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        for (std::size_t qi = 0; qi < config.q_values.size(); ++qi) {
            BenchRow row;
            row.method = config.methods[mi];
            row.q = config.q_values[qi];
            predictions.emplace_back();
            try {
                const QuantileSpec q{row.q};
                const auto cell_seed = Rng::derive(config.seed, mi * 1000 + qi);
                const auto started = Clock::now();
                const AnyModel model = train_method(row.method, train, q, config, cell_seed);
                const double train_seconds = seconds_since(started);
                row.report = evaluate_model(model, test, is_quanting_method(row.method),
                                            &predictions.back());
                row.report.train_seconds = train_seconds;
            } catch (const std::exception& e) {
                row.error = e.what();
                result.all_ok = false;
            }
            result.rows.push_back(std::move(row));
        }
    }

    if (!config.output_dir.empty())
        write_bench_artifacts(config, result, predictions, test);
    return result;
}

namespace {

using Json = nlohmann::ordered_json;

Json report_json(const EvalReport& report) {
    Json j;
    j["mean_pinball_loss"] = report.mean_pinball_loss;
    j["sum_pinball_loss"] = report.sum_pinball_loss;
    j["coverage_below"] = report.coverage_below;
    j["train_seconds"] = report.train_seconds;
    j["predict_seconds"] = report.predict_seconds;
    if (report.loss_curve) {
        Json curve = Json::array();
        for (const auto& p : *report.loss_curve)
            curve.push_back({p.ensemble_size, p.mean_pinball_loss});
        j["loss_curve"] = std::move(curve);
    }
    return j;
}

} // namespace

std::string report_to_json(const EvalReport& report) { return report_json(report).dump(2); }

std::string bench_to_json(const BenchConfig& config, const BenchResult& result) {
    Json j;
    j["config"] = {{"data", config.data},
                   {"train_data", config.train_data},
                   {"test_data", config.test_data},
                   {"q_values", config.q_values},
                   {"methods", config.methods},
                   {"n_classifiers", config.n_classifiers},
                   {"scheme", grid_scheme_name(config.scheme)},
                   {"weighted_path", weighted_path_name(config.path)},
                   {"hard_outputs", config.hard_outputs},
                   {"seed", config.seed},
                   {"train_fraction", config.train_fraction}};
    Json rows = Json::array();
    for (const auto& row : result.rows) {
        Json r;
        r["method"] = row.method;
        r["q"] = row.q;
        if (row.error.empty())
            r["report"] = report_json(row.report);
        else
            r["error"] = row.error;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    j["all_ok"] = result.all_ok;
    return j.dump(2);
}

std::string bench_to_table(const BenchResult& result) {
    std::ostringstream out;
    out << "method           q     quantile-loss  %below    train-s   predict-s\n";
    for (const auto& row : result.rows) {
        char line[160];
        if (row.error.empty())
            std::snprintf(line, sizeof(line), "%-16s %-5.2f %-14.6g %-9.6g %-9.3f %-9.3f\n",
                          row.method.c_str(), row.q, row.report.mean_pinball_loss,
                          row.report.coverage_below, row.report.train_seconds,
                          row.report.predict_seconds);
        else
            std::snprintf(line, sizeof(line), "%-16s %-5.2f FAILED: %s\n", row.method.c_str(),
                          row.q, row.error.c_str());
        out << line;
    }
    return out.str();
}

void write_bench_artifacts(const BenchConfig& config, const BenchResult& result,
                           const std::vector<std::vector<double>>& predictions,
                           const Dataset& test) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const fs::path dir(config.output_dir);

    std::ofstream(dir / "report.json") << bench_to_json(config, result) << "\n";
    std::ofstream(dir / "table.txt") << bench_to_table(result);

    const auto labels = test.original_labels();
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
        const auto& row = result.rows[r];
        if (!row.error.empty())
            continue;
        std::ostringstream suffix;
        suffix << row.method << "_q" << row.q;
        if (row.report.loss_curve) {
            std::ofstream curve(dir / ("curve_" + suffix.str() + ".txt"));
            curve.precision(17);
            for (const auto& p : *row.report.loss_curve)
                curve << p.ensemble_size << " " << p.mean_pinball_loss << "\n";
        }
        if (config.dump_predictions && r < predictions.size()) {
            std::ofstream preds(dir / ("predictions_" + suffix.str() + ".txt"));
            preds.precision(17);
            for (std::size_t i = 0; i < predictions[r].size(); ++i)
                preds << predictions[r][i] << " " << labels[i] << "\n";
        }
    }
}

} // namespace quanting
