#include "quanting/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "quanting/rng.hpp"

namespace quanting {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& text, std::size_t row, std::size_t column) {
    const std::string t = trim(text);
    const char* first = t.data();
    const char* last = t.data() + t.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || t.empty())
        throw std::runtime_error("cannot parse numeric value '" + text + "' at row " +
                                 std::to_string(row) + ", column " + std::to_string(column));
    if (!std::isfinite(value))
        throw std::runtime_error("non-finite value at row " + std::to_string(row) + ", column " +
                                 std::to_string(column));
    return value;
}

} // namespace

ColumnSchema ColumnSchema::from_flags(const std::string& categorical_list,
                                      std::optional<std::size_t> label_column) {
    ColumnSchema schema;
    schema.label_column = label_column;
    if (!categorical_list.empty()) {
        std::stringstream ss(categorical_list);
        std::string item;
        std::size_t max_index = 0;
        std::vector<std::size_t> indices;
        while (std::getline(ss, item, ',')) {
            const std::size_t idx = std::stoul(trim(item));
            indices.push_back(idx);
            max_index = std::max(max_index, idx);
        }
        schema.kinds.assign(max_index + 1, ColumnKind::numeric);
        for (std::size_t idx : indices)
            schema.kinds[idx] = ColumnKind::categorical;
    }
    return schema;
}

ColumnSchema ColumnSchema::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open schema file: " + path);
    nlohmann::json j;
    in >> j;
    ColumnSchema schema;
    if (j.contains("label"))
        schema.label_column = j.at("label").get<std::size_t>();
    if (j.contains("columns"))
        for (const auto& kind : j.at("columns"))
            schema.kinds.push_back(kind.get<std::string>() == "categorical"
                                       ? ColumnKind::categorical
                                       : ColumnKind::numeric);
    return schema;
}

std::size_t ColumnSchema::resolve_label(std::size_t n_cols) const {
    const std::size_t label = label_column.value_or(n_cols - 1);
    if (label >= n_cols)
        throw std::runtime_error("label column index out of range");
    if (kind_of(label) != ColumnKind::numeric)
        throw std::runtime_error("label column must be numeric");
    return label;
}

RawTable load_csv(const std::string& path, const ColumnSchema& schema) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty file: " + path);
    const auto header = split_csv_line(line);
    if (header.empty())
        throw std::runtime_error("empty header row in " + path);

    RawTable table;
    table.columns.resize(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        table.columns[c].name = trim(header[c]);
        table.columns[c].kind = schema.kind_of(c);
    }

    std::size_t row = 1; // header is row 1
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty())
            continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error("ragged row " + std::to_string(row) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (table.columns[c].kind == ColumnKind::numeric) {
                table.columns[c].numeric.push_back(parse_number(fields[c], row, c + 1));
            } else {
                std::string value = trim(fields[c]);
                if (value.empty())
                    throw std::runtime_error("missing value at row " + std::to_string(row) +
                                             ", column " + std::to_string(c + 1));
                table.columns[c].text.push_back(std::move(value));
            }
        }
        ++table.n_rows;
    }
    if (table.n_rows == 0)
        throw std::runtime_error("no data rows in " + path);
    return table;
}

namespace {

// one-hot categories in first-appearance order
std::vector<std::string> category_order(const std::vector<std::string>& values) {
    std::vector<std::string> order;
    std::unordered_map<std::string, bool> seen;
    for (const auto& v : values)
        if (!seen[v]) {
            seen[v] = true;
            order.push_back(v);
        }
    return order;
}

} // namespace

std::vector<std::string> feature_names(const RawTable& table, const ColumnSchema& schema) {
    const std::size_t label = schema.resolve_label(table.columns.size());
    std::vector<std::string> names;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c == label)
            continue;
        const auto& col = table.columns[c];
        if (col.kind == ColumnKind::numeric) {
            names.push_back(col.name);
        } else {
            for (const auto& cat : category_order(col.text))
                names.push_back(col.name + "=" + cat);
        }
    }
    return names;
}

namespace {

// Row-major feature matrix with categoricals one-hot encoded. Category order
// comes from `reference` (the table itself in the single-file path, the
// train table in pre-split mode); categories absent from the reference are
// an error.
std::pair<std::vector<double>, std::size_t> encode_features(const RawTable& table,
                                                            const RawTable& reference,
                                                            const ColumnSchema& schema) {
    if (table.n_rows == 0)
        throw std::runtime_error("no data rows");
    if (table.columns.size() != reference.columns.size())
        throw std::runtime_error("table column count differs from the reference");
    const std::size_t label = schema.resolve_label(table.columns.size());

    std::vector<std::vector<double>> feature_cols;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c == label)
            continue;
        const auto& col = table.columns[c];
        if (col.kind == ColumnKind::numeric) {
            feature_cols.push_back(col.numeric);
        } else {
            const auto order = category_order(reference.columns[c].text);
            std::unordered_map<std::string, std::size_t> index;
            for (std::size_t k = 0; k < order.size(); ++k)
                index[order[k]] = k;
            std::vector<std::vector<double>> hot(order.size(),
                                                 std::vector<double>(table.n_rows, 0.0));
            for (std::size_t i = 0; i < table.n_rows; ++i) {
                const auto found = index.find(col.text[i]);
                if (found == index.end())
                    throw std::runtime_error("category '" + col.text[i] + "' in column " +
                                             col.name + " does not occur in the training data");
                hot[found->second][i] = 1.0;
            }
            for (auto& h : hot)
                feature_cols.push_back(std::move(h));
        }
    }
    if (feature_cols.empty())
        throw std::runtime_error("no feature columns besides the label");

    const std::size_t d = feature_cols.size();
    std::vector<double> features(table.n_rows * d);
    for (std::size_t i = 0; i < table.n_rows; ++i)
        for (std::size_t j = 0; j < d; ++j)
            features[i * d + j] = feature_cols[j][i];
    return {std::move(features), d};
}

} // namespace

Dataset preprocess(const RawTable& table, const ColumnSchema& schema) {
    auto [features, d] = encode_features(table, table, schema);
    const std::size_t label = schema.resolve_label(table.columns.size());
    return Dataset::normalized(std::move(features), d, table.columns[label].numeric);
}

std::pair<Dataset, Dataset> preprocess_presplit(const RawTable& train_table,
                                                const RawTable& test_table,
                                                const ColumnSchema& schema) {
    Dataset train = preprocess(train_table, schema);
    auto [features, d] = encode_features(test_table, train_table, schema);
    const std::size_t label = schema.resolve_label(test_table.columns.size());
    Dataset test = Dataset::with_normalization(std::move(features), d,
                                               test_table.columns[label].numeric,
                                               *train.normalization());
    if (test.cols() != train.cols())
        throw std::runtime_error("train/test files expand to different feature arities");
    return {std::move(train), std::move(test)};
}

Dataset encode_with_normalization(const RawTable& table, const ColumnSchema& schema,
                                  const LabelNormalization& norm) {
    auto [features, d] = encode_features(table, table, schema);
    const std::size_t label = schema.resolve_label(table.columns.size());
    return Dataset::with_normalization(std::move(features), d, table.columns[label].numeric,
                                       norm);
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction,
                                  std::uint64_t seed) {
    if (data.rows() < 2)
        throw std::invalid_argument("need at least 2 rows to split");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train fraction must be in (0,1)");
    const std::size_t m = data.rows();
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(m)));
    if (n_train == 0 || n_train >= m)
        throw std::invalid_argument("train fraction yields an empty split side");

    // hand-rolled Fisher-Yates so the permutation is stable across platforms
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i)
        perm[i] = i;
    Rng rng(seed);
    for (std::size_t i = m; i-- > 1;)
        std::swap(perm[i], perm[rng.next_index(i + 1)]);

    const std::size_t d = data.cols();
    auto gather = [&](std::size_t begin, std::size_t end) {
        std::vector<double> features((end - begin) * d);
        std::vector<double> labels(end - begin);
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t i = perm[k];
            auto row = data.row(i);
            std::copy(row.begin(), row.end(), features.begin() + (k - begin) * d);
            labels[k - begin] = data.original_label(i);
        }
        return std::make_pair(std::move(features), std::move(labels));
    };

    auto [train_features, train_labels] = gather(0, n_train);
    auto [test_features, test_labels] = gather(n_train, m);

    // constant train labels (one-row splits, mostly) cannot define their own
    // min-max map; fall back to the parent's
    const auto [lo_it, hi_it] = std::minmax_element(train_labels.begin(), train_labels.end());
    const bool constant_train = !(*lo_it < *hi_it);
    if (constant_train) {
        if (!data.normalization()) {
            Dataset train = Dataset::raw(std::move(train_features), d, std::move(train_labels));
            Dataset test = Dataset::raw(std::move(test_features), d, std::move(test_labels));
            return {std::move(train), std::move(test)};
        }
        Dataset train = Dataset::with_normalization(std::move(train_features), d,
                                                    std::move(train_labels),
                                                    *data.normalization());
        Dataset test = Dataset::with_normalization(std::move(test_features), d,
                                                   std::move(test_labels),
                                                   *data.normalization());
        return {std::move(train), std::move(test)};
    }

    Dataset train = Dataset::normalized(std::move(train_features), d, std::move(train_labels));
    Dataset test = Dataset::with_normalization(std::move(test_features), d,
                                               std::move(test_labels), *train.normalization());
    return {std::move(train), std::move(test)};
}

} // namespace quanting
