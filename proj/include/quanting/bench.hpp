#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quanting/dataio.hpp"
#include "quanting/metrics.hpp"
#include "quanting/model_io.hpp"

namespace quanting {

// One benchmark run: dataset x methods x quantiles, mirroring the CLI flags
// one-to-one.
struct BenchConfig {
    // either a CSV path / "synth:<name>" in `data`, or both pre-split paths
    std::string data;
    std::string train_data;
    std::string test_data;
    ColumnSchema schema;
    std::size_t synth_rows = 2000;

    std::vector<double> q_values = {0.1, 0.5, 0.9};
    std::vector<std::string> methods = {"quanting-tree", "quanting-logreg", "linear",
                                        "constant"};
    std::size_t n_classifiers = 100;
    GridScheme scheme = GridScheme::adaptive;
    WeightedPath path = WeightedPath::native;
    bool hard_outputs = false;
    std::uint64_t seed = 1;
    double train_fraction = 0.8;
    unsigned threads = 1;

    LearnerConfig tree_config;   // kind forced to tree
    LearnerConfig logreg_config; // kind forced to logreg
    LinearFitOptions linear_options;

    std::string output_dir; // empty: no artifacts written
    bool dump_predictions = false;

    void validate() const;
};

struct BenchRow {
    std::string method;
    double q = 0.0;
    EvalReport report;
    std::string error; // empty on success
};

struct BenchResult {
    std::vector<BenchRow> rows;
    bool all_ok = true;
};

// Ensemble prefix sizes evaluated for the convergence curve.
std::vector<std::size_t> curve_sizes(std::size_t grid_size);

// Trains one method at one quantile. Methods: quanting-tree, quanting-logreg,
// linear, constant.
AnyModel train_method(const std::string& method, const Dataset& train, const QuantileSpec& q,
                      const BenchConfig& config, std::uint64_t cell_seed);

// Losses in original label units; fills the loss curve for quanting models
// when requested. The curve's final point repeats the full-model loss
// exactly.
EvalReport evaluate_model(const AnyModel& model, const Dataset& test, bool with_curve,
                          std::vector<double>* predictions_out = nullptr);

// Loads the configured dataset and returns (train, test).
std::pair<Dataset, Dataset> load_bench_data(const BenchConfig& config);

BenchResult run_bench(const BenchConfig& config);

std::string report_to_json(const EvalReport& report);
std::string bench_to_json(const BenchConfig& config, const BenchResult& result);
std::string bench_to_table(const BenchResult& result);

// Artifacts under config.output_dir: report.json, table.txt, per-cell curve
// files (two numeric columns) and optional prediction dumps.
void write_bench_artifacts(const BenchConfig& config, const BenchResult& result,
                           const std::vector<std::vector<double>>& predictions,
                           const Dataset& test);

} // namespace quanting
