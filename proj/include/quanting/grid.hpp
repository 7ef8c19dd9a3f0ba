#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "quanting/dataset.hpp"

namespace quanting {

enum class GridScheme { uniform, adaptive };

// Ordered thresholds indexing the classifier family. Values are strictly
// increasing and live in the open interval (0, 1).
//
// uniform:  t_k = (k - 0.5) / n, the midpoint mesh. Endpoints 0 and 1 would
//           produce all-one / all-zero classification tasks, and the midpoint
//           average is the exact midpoint Riemann sum of the prediction
//           integral.
// adaptive: t_k is the empirical (k - 0.5)/n-quantile of the normalized
//           training labels, so every classification task sees comparable
//           class balance; duplicates within 1e-9 are dropped.
struct ThresholdGrid {
    std::vector<double> thresholds;
    GridScheme scheme = GridScheme::uniform;

    std::size_t size() const { return thresholds.size(); }

    // [0,1] partitioned into one cell per threshold, with boundaries halfway
    // between neighbors. For the uniform midpoint grid every cell has width
    // exactly 1/n.
    std::vector<double> cell_widths() const;

    void validate() const;
};

ThresholdGrid build_grid(std::size_t n, GridScheme scheme,
                         std::span<const double> training_labels = {});

const char* grid_scheme_name(GridScheme scheme);
GridScheme grid_scheme_from_name(const std::string& name);

} // namespace quanting
