#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quanting/dataio.hpp"
#include "quanting/dataset.hpp"

namespace quanting {

// Seeded synthetic regression tables for the benchmark harness and tests.
//
//   linear-exp   y = x1 + Exponential(1); the conditional q-quantile is
//                x1 - ln(1 - q), so slopes and intercepts have closed forms.
//   step         y piecewise constant in x1 plus uniform noise; a one-split
//                tree captures it exactly.
//   het          nonlinear trend with noise whose scale grows with x1, so
//                different quantiles have genuinely different shapes.
//   housing      13 housing-style feature columns and a nonlinear,
//                heteroscedastic price-like label; written at the classic
//                Boston row count (506) by the CLI's synth-csv command.
struct SyntheticSpec {
    std::string name = "linear-exp";
    std::size_t rows = 2000;
    std::uint64_t seed = 1;
};

bool is_synthetic_name(const std::string& name);

// Feature matrix and labels in original (unnormalized) units.
RawTable make_synthetic_table(const SyntheticSpec& spec);

// make_synthetic_table run through the standard preprocessing (label
// normalization; all columns numeric).
Dataset make_synthetic_dataset(const SyntheticSpec& spec);

void write_csv(const std::string& path, const RawTable& table);

} // namespace quanting
