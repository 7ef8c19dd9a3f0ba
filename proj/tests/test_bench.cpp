#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "quanting/bench.hpp"
#include "quanting/rng.hpp"
#include "quanting/synth_data.hpp"

using namespace quanting;

namespace {

BenchConfig small_config() {
    BenchConfig config;
    config.data = "synth:step";
    config.synth_rows = 400;
    config.n_classifiers = 20;
    config.seed = 11;
    config.train_fraction = 0.75;
    return config;
}

std::string json_without_timings(const BenchConfig& config, const BenchResult& result) {
    BenchResult scrubbed = result;
    for (auto& row : scrubbed.rows) {
        row.report.train_seconds = 0.0;
        row.report.predict_seconds = 0.0;
    }
    return bench_to_json(config, scrubbed);
}

} // namespace

TEST_CASE("curve sizes end at the grid size") {
    CHECK(curve_sizes(100) == std::vector<std::size_t>{1, 2, 5, 10, 20, 50, 100});
    CHECK(curve_sizes(95) == std::vector<std::size_t>{1, 2, 5, 10, 20, 50, 95});
    CHECK(curve_sizes(7) == std::vector<std::size_t>{1, 2, 5, 7});
    CHECK(curve_sizes(1) == std::vector<std::size_t>{1});
}

TEST_CASE("constant model coverage sits at the order statistic") {
    // distinct labels: the returned constant is the ceil(m/2)-th smallest, so
    // strictly-below counts land within floor(m/2)/m +- 1/m
    for (std::size_t m : {9u, 10u, 57u}) {
        Rng rng(m);
        std::vector<double> features(m), labels(m);
        for (std::size_t i = 0; i < m; ++i) {
            features[i] = rng.next_double();
            labels[i] = static_cast<double>(i) + rng.next_double() * 0.25;
        }
        const auto data = Dataset::normalized(std::move(features), 1, std::move(labels));
        const QuantileSpec q{0.5};
        const ConstantModel model{empirical_quantile(data.original_labels(), q), q,
                                  *data.normalization()};
        const auto report = evaluate_model(model, data, false);
        const double anchor =
            std::floor(static_cast<double>(m) / 2.0) / static_cast<double>(m);
        CHECK(report.coverage_below >= anchor - 1.0 / static_cast<double>(m) - 1e-12);
        CHECK(report.coverage_below <= anchor + 1.0 / static_cast<double>(m) + 1e-12);
    }
}

TEST_CASE("a perfect predictor reports zero loss") {
    // feature equals the label, identity-coefficient linear model
    std::vector<double> values{0.2, 0.4, 0.6, 0.8};
    const auto data = Dataset::with_normalization(std::vector<double>(values), 1,
                                                  std::vector<double>(values),
                                                  LabelNormalization{0.0, 1.0});
    LinearQuantileModel model;
    model.coefficients = {1.0};
    model.intercept = 0.0;
    model.q = QuantileSpec{0.3};
    model.normalization = {0.0, 1.0};
    const auto report = evaluate_model(model, data, false);
    CHECK(report.mean_pinball_loss == 0.0);
    CHECK(report.sum_pinball_loss == 0.0);
    CHECK(report.coverage_below == 0.0);
}

TEST_CASE("bench produces one row per method and quantile") {
    auto config = small_config();
    const auto result = run_bench(config);
    CHECK(result.all_ok);
    REQUIRE(result.rows.size() == config.methods.size() * config.q_values.size());

    for (const auto& row : result.rows) {
        INFO(row.method << " q=" << row.q);
        CHECK(row.error.empty());
        CHECK(std::isfinite(row.report.mean_pinball_loss));
        const bool quanting = row.method.rfind("quanting", 0) == 0;
        CHECK(row.report.loss_curve.has_value() == quanting);
        if (quanting) {
            CHECK(row.report.loss_curve->size() == curve_sizes(config.n_classifiers).size());
            // the final curve point repeats the full-model evaluation exactly
            CHECK(row.report.loss_curve->back().mean_pinball_loss ==
                  row.report.mean_pinball_loss);
        }
    }
}

TEST_CASE("constant rows equal the oracle recomputation") {
    auto config = small_config();
    config.methods = {"constant"};
    const auto result = run_bench(config);
    const auto [train, test] = load_bench_data(config);
    for (const auto& row : result.rows) {
        const QuantileSpec q{row.q};
        const double constant = empirical_quantile(train.original_labels(), q);
        const double expected = mean_pinball_loss(
            std::vector<double>(test.rows(), constant), test.original_labels(), q);
        CHECK(row.report.mean_pinball_loss == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("reports are deterministic apart from wall-clock fields") {
    auto config = small_config();
    config.methods = {"quanting-tree", "linear", "constant"};
    const auto a = run_bench(config);
    const auto b = run_bench(config);
    CHECK(json_without_timings(config, a) == json_without_timings(config, b));
}

TEST_CASE("the rejection path plugs into the bench unchanged") {
    auto config = small_config();
    config.methods = {"quanting-tree"};
    config.q_values = {0.5};
    config.path = WeightedPath::rejection;
    config.synth_rows = 1200;
    const auto result = run_bench(config);
    REQUIRE(result.all_ok);
    CHECK(std::isfinite(result.rows[0].report.mean_pinball_loss));
    CHECK(result.rows[0].report.loss_curve->back().mean_pinball_loss ==
          result.rows[0].report.mean_pinball_loss);
}

TEST_CASE("per-cell failures leave other cells standing") {
    auto config = small_config();
    config.methods = {"quanting-logreg", "constant"};
    config.logreg_config.logreg_tolerance = -1.0; // invalid: poisons only logreg cells
    const auto result = run_bench(config);
    CHECK(!result.all_ok);
    for (const auto& row : result.rows) {
        if (row.method == "quanting-logreg")
            CHECK(!row.error.empty());
        else
            CHECK(row.error.empty());
    }
}

TEST_CASE("bench artifacts are auditable") {
    namespace fs = std::filesystem;
    auto config = small_config();
    config.methods = {"quanting-tree", "constant"};
    config.q_values = {0.5};
    config.dump_predictions = true;
    config.output_dir = (fs::temp_directory_path() / "quanting_bench_test").string();
    const auto result = run_bench(config);
    REQUIRE(result.all_ok);

    CHECK(fs::exists(fs::path(config.output_dir) / "report.json"));
    CHECK(fs::exists(fs::path(config.output_dir) / "table.txt"));
    CHECK(fs::exists(fs::path(config.output_dir) / "curve_quanting-tree_q0.5.txt"));

    // coverage_below recomputes from the dumped per-example predictions
    std::ifstream preds(fs::path(config.output_dir) / "predictions_quanting-tree_q0.5.txt");
    REQUIRE(preds.good());
    double prediction = 0.0, label = 0.0;
    std::size_t n = 0, above = 0;
    while (preds >> prediction >> label) {
        ++n;
        if (prediction > label)
            ++above;
    }
    REQUIRE(n > 0);
    CHECK(static_cast<double>(above) / static_cast<double>(n) ==
          result.rows[0].report.coverage_below);

    fs::remove_all(config.output_dir);
}

TEST_CASE("pre-split mode maps test labels with train statistics") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "quanting_presplit_test";
    fs::create_directories(dir);
    std::ofstream(dir / "train.csv") << "x,y\n0.1,5\n0.5,10\n0.9,15\n0.3,7\n0.7,12\n";
    std::ofstream(dir / "test.csv") << "x,y\n0.2,6\n0.8,20\n"; // 20 exceeds the train range

    BenchConfig config;
    config.train_data = (dir / "train.csv").string();
    config.test_data = (dir / "test.csv").string();
    config.methods = {"constant"};
    config.q_values = {0.5};
    const auto [train, test] = load_bench_data(config);
    CHECK(train.rows() == 5);
    CHECK(test.rows() == 2);
    CHECK(test.normalization()->label_max == 15.0);
    CHECK(test.labels()[1] > 1.0); // mapped label leaves [0,1]
    CHECK(test.original_label(1) == doctest::Approx(20.0));

    const auto result = run_bench(config);
    CHECK(result.all_ok);
    fs::remove_all(dir);
}

TEST_CASE("two methods across three quantiles yield six rows") {
    BenchConfig config;
    config.data = std::string(QUANTING_DATA_DIR) + "/housing_synth.csv";
    config.train_fraction = 450.0 / 506.0;
    config.methods = {"linear", "quanting-tree"};
    config.n_classifiers = 25;
    config.seed = 3;
    const auto result = run_bench(config);
    CHECK(result.all_ok);
    CHECK(result.rows.size() == 6);
    const std::string table = bench_to_table(result);
    CHECK(std::count(table.begin(), table.end(), '\n') == 7); // header + 6 rows
}

TEST_CASE("bench config validation") {
    BenchConfig config;
    config.data = "synth:step";
    config.methods = {};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = BenchConfig{};
    config.data = "synth:step";
    config.methods = {"mystery"};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = BenchConfig{};
    config.data = "";
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = BenchConfig{};
    config.data = "synth:step";
    config.q_values = {0.0};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = BenchConfig{};
    config.train_data = "only_one_side.csv";
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}
