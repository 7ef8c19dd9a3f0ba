#pragma once

#include <span>
#include <string>
#include <variant>

#include "quanting/linear_quantile.hpp"
#include "quanting/quanting.hpp"

namespace quanting {

// Constant predictor: the train-split empirical quantile, the natural floor
// every other method must beat.
struct ConstantModel {
    double value = 0.0; // original label units
    QuantileSpec q{0.5};
    LabelNormalization normalization;
};

struct QuantingModel {
    QuantileEnsemble ensemble;
    LearnerConfig learner;
    WeightedPath path = WeightedPath::native;
};

using AnyModel = std::variant<QuantingModel, LinearQuantileModel, ConstantModel>;

// Single self-describing JSON file: version tag, grid, q, normalization,
// learner kind + hyperparameters, per-classifier parameters. Identical models
// serialize to byte-identical files.
std::string model_to_json(const AnyModel& model);
AnyModel model_from_json(const std::string& text);
void save_model(const std::string& path, const AnyModel& model);
AnyModel load_model(const std::string& path);

double predict_with(const AnyModel& model, std::span<const double> x);
std::size_t model_feature_count(const AnyModel& model);
QuantileSpec model_quantile(const AnyModel& model);
std::string model_kind(const AnyModel& model);

} // namespace quanting
