#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "quanting/dataset.hpp"

namespace quanting {

// Tilted absolute loss: q * (y - f) when y >= f, (1 - q) * (f - y) otherwise.
// Zero exactly when y == f.
double pinball_loss(double y, double f, const QuantileSpec& q);

// The ceil(q*m)-th smallest label (1-indexed). This is the smallest minimizer
// of the summed pinball loss over constant predictors; ties on atomless gaps
// break toward the left endpoint (left-continuous inverse CDF convention).
double empirical_quantile(std::span<const double> labels, const QuantileSpec& q);

double mean_pinball_loss(std::span<const double> predictions, std::span<const double> labels,
                         const QuantileSpec& q);
double sum_pinball_loss(std::span<const double> predictions, std::span<const double> labels,
                        const QuantileSpec& q);

// Fraction of examples whose prediction strictly exceeds the label. Ties
// count as not-exceeding.
double coverage_below(std::span<const double> predictions, std::span<const double> labels);

struct LossCurvePoint {
    std::size_t ensemble_size = 0;
    double mean_pinball_loss = 0.0;
};

// The three benchmark columns plus the convergence curve. Losses are in
// original label units.
struct EvalReport {
    double mean_pinball_loss = 0.0;
    double sum_pinball_loss = 0.0;
    double coverage_below = 0.0;
    double train_seconds = 0.0;
    double predict_seconds = 0.0;
    std::optional<std::vector<LossCurvePoint>> loss_curve;

    // Throws if any field is outside its documented range or the curve sizes
    // are not strictly increasing.
    void validate() const;
};

} // namespace quanting
