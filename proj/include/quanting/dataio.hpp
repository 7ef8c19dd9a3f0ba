#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quanting/dataset.hpp"

namespace quanting {

enum class ColumnKind { numeric, categorical };

// Per-column kinds plus the label column (default: last). The label column
// must be numeric.
struct ColumnSchema {
    std::vector<ColumnKind> kinds;           // empty means all numeric
    std::optional<std::size_t> label_column; // default: last column

    static ColumnSchema all_numeric() { return {}; }
    // "3,5" style list of zero-based categorical column indices
    static ColumnSchema from_flags(const std::string& categorical_list,
                                   std::optional<std::size_t> label_column);
    static ColumnSchema from_file(const std::string& path); // JSON sidecar

    std::size_t resolve_label(std::size_t n_cols) const;
    ColumnKind kind_of(std::size_t column) const {
        return column < kinds.size() ? kinds[column] : ColumnKind::numeric;
    }
};

struct RawColumn {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    std::vector<double> numeric;   // filled for numeric columns
    std::vector<std::string> text; // filled for categorical columns
};

struct RawTable {
    std::vector<RawColumn> columns;
    std::size_t n_rows = 0;
};

// Comma-separated, header row required, '.'-decimal numerics. Parse failures
// report the 1-based row and column.
RawTable load_csv(const std::string& path, const ColumnSchema& schema);

// One-hot encodes categorical columns (category order = first appearance),
// min-max normalizes the labels and stores the map. Constant labels are an
// error. Missing values were already rejected at load time.
Dataset preprocess(const RawTable& table, const ColumnSchema& schema);

// Pre-split pass-through: category order and label normalization both come
// from the train table; a test category unseen in training is an error, and
// mapped test labels may leave [0,1].
std::pair<Dataset, Dataset> preprocess_presplit(const RawTable& train_table,
                                                const RawTable& test_table,
                                                const ColumnSchema& schema);

// Encodes a table for evaluation under an existing model's label map; the
// labels are not required to span a range of their own.
Dataset encode_with_normalization(const RawTable& table, const ColumnSchema& schema,
                                  const LabelNormalization& norm);

// Seeded shuffle then split. Normalization is recomputed from the train
// split only and applied to both sides, so test labels may leave [0,1].
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction,
                                  std::uint64_t seed);

// Names of the feature columns produced by preprocess, in output order.
std::vector<std::string> feature_names(const RawTable& table, const ColumnSchema& schema);

} // namespace quanting
