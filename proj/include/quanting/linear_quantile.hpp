#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "quanting/dataset.hpp"

namespace quanting {

// Affine predictor of the normalized label: u(x) = coefficients . x +
// intercept, denormalized at prediction time. The *_label_units accessors
// report the same affine map composed with the label normalization, i.e. in
// original label units.
struct LinearQuantileModel {
    std::vector<double> coefficients;
    double intercept = 0.0;
    QuantileSpec q{0.5};
    LabelNormalization normalization;

    double coefficient_label_units(std::size_t j) const {
        return coefficients[j] * normalization.span();
    }
    double intercept_label_units() const {
        return normalization.to_original(intercept);
    }
};

struct LinearFitOptions {
    std::size_t max_iterations = 5000;
    double tolerance = 1e-7; // best-objective improvement over a 50-iteration window
};

// Minimizes the mean pinball loss over affine predictors by subgradient
// descent with Polyak-style diminishing steps, starting from the constant
// empirical-quantile predictor and returning the best iterate seen. Features
// are standardized internally; the returned coefficients are in raw feature
// space. At the kink y == f the y >= f branch slope is used.
LinearQuantileModel fit_linear_quantile(const Dataset& data, const QuantileSpec& q,
                                        const LinearFitOptions& options = {});

double predict_linear(const LinearQuantileModel& model, std::span<const double> x);

} // namespace quanting
