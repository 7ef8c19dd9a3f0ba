#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "quanting/dataio.hpp"
#include "quanting/synth_data.hpp"

using namespace quanting;

namespace {

namespace fs = std::filesystem;

struct TempCsv {
    fs::path path;
    explicit TempCsv(const std::string& content) {
        static int counter = 0;
        path = fs::temp_directory_path() / ("quanting_dataio_" + std::to_string(counter++) + ".csv");
        std::ofstream(path) << content;
    }
    ~TempCsv() { fs::remove(path); }
};

} // namespace

TEST_CASE("numeric csv parses into columns") {
    TempCsv file("a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
    const auto table = load_csv(file.path.string(), ColumnSchema::all_numeric());
    CHECK(table.n_rows == 3);
    REQUIRE(table.columns.size() == 3);
    CHECK(table.columns[0].name == "a");
    CHECK(table.columns[2].numeric == std::vector<double>{3, 6, 9});
}

TEST_CASE("csv error paths name their location") {
    TempCsv header_only("a,b,y\n");
    CHECK_THROWS_WITH_AS(load_csv(header_only.path.string(), ColumnSchema::all_numeric()),
                         doctest::Contains("no data rows"), std::runtime_error);

    CHECK_THROWS_WITH_AS(load_csv("/nonexistent/file.csv", ColumnSchema::all_numeric()),
                         doctest::Contains("cannot open"), std::runtime_error);

    TempCsv ragged("a,b,y\n1,2,3\n4,5\n");
    CHECK_THROWS_WITH_AS(load_csv(ragged.path.string(), ColumnSchema::all_numeric()),
                         doctest::Contains("ragged row 3"), std::runtime_error);

    TempCsv bad_cell("a,b,y\n1,2,3\n4,oops,6\n");
    CHECK_THROWS_WITH_AS(load_csv(bad_cell.path.string(), ColumnSchema::all_numeric()),
                         doctest::Contains("row 3, column 2"), std::runtime_error);

    // label column must be numeric
    TempCsv text_label("a,y\n1,hi\n2,lo\n");
    const auto schema = ColumnSchema::from_flags("1", std::nullopt);
    const auto table = load_csv(text_label.path.string(), schema);
    CHECK_THROWS_WITH_AS(preprocess(table, schema), doctest::Contains("label column"),
                         std::runtime_error);
}

TEST_CASE("the shipped housing table has the classic shape") {
    const auto table = load_csv(std::string(QUANTING_DATA_DIR) + "/housing_synth.csv",
                                ColumnSchema::all_numeric());
    CHECK(table.n_rows == 506);
    CHECK(table.columns.size() == 14);
    CHECK(table.columns.back().name == "medv");
}

TEST_CASE("preprocess min-max normalizes the label column") {
    TempCsv file("x,y\n1,10\n2,20\n3,30\n");
    const auto data = preprocess(load_csv(file.path.string(), ColumnSchema::all_numeric()),
                                 ColumnSchema::all_numeric());
    CHECK(data.labels() == std::vector<double>{0.0, 0.5, 1.0});
    REQUIRE(data.normalization().has_value());
    CHECK(data.normalization()->label_min == 10.0);
    CHECK(data.normalization()->label_max == 30.0);
}

TEST_CASE("categorical columns one-hot in first-appearance order") {
    TempCsv file("color,y\na,1\nb,2\na,3\n");
    const auto schema = ColumnSchema::from_flags("0", std::nullopt);
    const auto table = load_csv(file.path.string(), schema);
    const auto data = preprocess(table, schema);
    REQUIRE(data.cols() == 2);
    CHECK(std::vector<double>(data.row(0).begin(), data.row(0).end()) ==
          std::vector<double>{1.0, 0.0});
    CHECK(std::vector<double>(data.row(1).begin(), data.row(1).end()) ==
          std::vector<double>{0.0, 1.0});
    CHECK(std::vector<double>(data.row(2).begin(), data.row(2).end()) ==
          std::vector<double>{1.0, 0.0});
    CHECK(feature_names(table, schema) == std::vector<std::string>{"color=a", "color=b"});

    // indicators sum to one in every row
    for (std::size_t i = 0; i < data.rows(); ++i) {
        double sum = 0.0;
        for (double v : data.row(i))
            sum += v;
        CHECK(sum == 1.0);
    }
}

TEST_CASE("constant labels are rejected at preprocessing") {
    TempCsv file("x,y\n1,5\n2,5\n3,5\n");
    CHECK_THROWS_WITH_AS(preprocess(load_csv(file.path.string(), ColumnSchema::all_numeric()),
                                    ColumnSchema::all_numeric()),
                         doctest::Contains("constant labels"), std::invalid_argument);
    // same rejection straight at dataset construction
    CHECK_THROWS_AS(Dataset::normalized({0.1, 0.2}, 1, {5.0, 5.0}), std::invalid_argument);
}

TEST_CASE("normalization round-trips the train labels") {
    const auto data = make_synthetic_dataset({"het", 500, 99});
    REQUIRE(data.normalization().has_value());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const double y = data.original_label(i);
        CHECK(std::abs(data.normalization()->to_original(data.normalization()->to_unit(y)) - y) <=
              1e-12 * std::max(1.0, std::abs(y)));
    }
}

TEST_CASE("split hits the classic 450/56 counts") {
    const auto table = load_csv(std::string(QUANTING_DATA_DIR) + "/housing_synth.csv",
                                ColumnSchema::all_numeric());
    const auto data = preprocess(table, ColumnSchema::all_numeric());
    const auto [train, test] = split(data, 450.0 / 506.0, 7);
    CHECK(train.rows() == 450);
    CHECK(test.rows() == 56);
    // the test side is mapped with train statistics
    REQUIRE(test.normalization().has_value());
    CHECK(test.normalization()->label_min == train.normalization()->label_min);
    CHECK(test.normalization()->label_max == train.normalization()->label_max);
}

TEST_CASE("split is a seeded partition") {
    const auto data = make_synthetic_dataset({"step", 101, 5});
    const auto [train_a, test_a] = split(data, 0.7, 42);
    const auto [train_b, test_b] = split(data, 0.7, 42);
    CHECK(train_a.labels() == train_b.labels());
    CHECK(test_a.labels() == test_b.labels());
    CHECK(train_a.feature_values() == train_b.feature_values());

    // disjoint and exhaustive: the union of both sides restores every row
    std::multiset<double> seen, expected;
    for (std::size_t i = 0; i < train_a.rows(); ++i)
        seen.insert(train_a.original_label(i));
    for (std::size_t i = 0; i < test_a.rows(); ++i)
        seen.insert(test_a.original_label(i));
    for (std::size_t i = 0; i < data.rows(); ++i)
        expected.insert(data.original_label(i));
    CHECK(seen.size() == data.rows());
    // labels carry duplicates, so compare with a tolerance-free multiset walk
    auto it = expected.begin();
    for (double v : seen)
        CHECK(std::abs(v - *it++) < 1e-9);

    const auto [tiny_train, tiny_test] = split(make_synthetic_dataset({"step", 2, 5}), 0.5, 1);
    CHECK(tiny_train.rows() == 1);
    CHECK(tiny_test.rows() == 1);
}

TEST_CASE("split rejects degenerate fractions") {
    const auto data = make_synthetic_dataset({"step", 10, 5});
    CHECK_THROWS_AS(split(data, 0.01, 1), std::invalid_argument);
    CHECK_THROWS_AS(split(data, 0.999, 1), std::invalid_argument);
}

TEST_CASE("pre-split encoding follows the train table's category order") {
    // the test file meets the categories in the opposite order; columns must
    // still line up with the train encoding
    TempCsv train_file("color,y\na,1\nb,2\na,3\nb,4\n");
    TempCsv test_file("color,y\nb,5\na,6\n");
    const auto schema = ColumnSchema::from_flags("0", std::nullopt);
    const auto [train, test] = preprocess_presplit(load_csv(train_file.path.string(), schema),
                                                   load_csv(test_file.path.string(), schema),
                                                   schema);
    REQUIRE(test.cols() == train.cols());
    // first test row is 'b': second indicator in train order
    CHECK(std::vector<double>(test.row(0).begin(), test.row(0).end()) ==
          std::vector<double>{0.0, 1.0});
    CHECK(std::vector<double>(test.row(1).begin(), test.row(1).end()) ==
          std::vector<double>{1.0, 0.0});
    CHECK(test.original_label(0) == doctest::Approx(5.0));

    TempCsv surprise("color,y\nc,7\n");
    CHECK_THROWS_WITH_AS(preprocess_presplit(load_csv(train_file.path.string(), schema),
                                             load_csv(surprise.path.string(), schema), schema),
                         doctest::Contains("does not occur in the training data"),
                         std::runtime_error);
}

TEST_CASE("missing values are rejected, not imputed") {
    TempCsv gap("color,y\na,1\n,2\n");
    const auto schema = ColumnSchema::from_flags("0", std::nullopt);
    CHECK_THROWS_WITH_AS(load_csv(gap.path.string(), schema),
                         doctest::Contains("missing value at row 3"), std::runtime_error);
}

TEST_CASE("evaluation encoding accepts constant labels") {
    TempCsv file("x,y\n0.5,7\n0.6,7\n");
    const auto data = encode_with_normalization(
        load_csv(file.path.string(), ColumnSchema::all_numeric()), ColumnSchema::all_numeric(),
        LabelNormalization{0.0, 10.0});
    CHECK(data.rows() == 2);
    CHECK(data.original_label(0) == doctest::Approx(7.0));
}

TEST_CASE("schema sidecar files parse") {
    const auto path = fs::temp_directory_path() / "quanting_schema_test.json";
    std::ofstream(path) << R"({"columns": ["numeric", "categorical", "numeric"], "label": 2})";
    const auto schema = ColumnSchema::from_file(path.string());
    fs::remove(path);
    CHECK(schema.kind_of(0) == ColumnKind::numeric);
    CHECK(schema.kind_of(1) == ColumnKind::categorical);
    CHECK(schema.resolve_label(3) == 2);

    const auto flags = ColumnSchema::from_flags("1,3", 0);
    CHECK(flags.kind_of(1) == ColumnKind::categorical);
    CHECK(flags.kind_of(2) == ColumnKind::numeric);
    CHECK(flags.kind_of(3) == ColumnKind::categorical);
    CHECK(flags.resolve_label(5) == 0);
}

TEST_CASE("synthetic generators are deterministic and unknown names fail") {
    const auto a = make_synthetic_table({"linear-exp", 50, 3});
    const auto b = make_synthetic_table({"linear-exp", 50, 3});
    CHECK(a.columns[1].numeric == b.columns[1].numeric);
    CHECK(is_synthetic_name("housing"));
    CHECK(!is_synthetic_name("boston"));
    CHECK_THROWS_AS(make_synthetic_table({"boston", 10, 1}), std::invalid_argument);
}
