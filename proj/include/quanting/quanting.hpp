#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quanting/dataset.hpp"
#include "quanting/grid.hpp"
#include "quanting/learners.hpp"
#include "quanting/samples.hpp"

namespace quanting {

enum class WeightedPath { native, rejection };

const char* weighted_path_name(WeightedPath path);
WeightedPath weighted_path_from_name(const std::string& name);

// The deployable model: one trained classifier per grid threshold, plus the
// label map needed to report predictions in original units. With
// hard_outputs set, each classifier is thresholded at 0.5 before averaging.
struct QuantileEnsemble {
    std::vector<ScorerPtr> classifiers;
    ThresholdGrid grid;
    QuantileSpec q{0.5};
    LabelNormalization normalization;
    bool hard_outputs = false;

    std::size_t size() const { return classifiers.size(); }
    std::size_t feature_count() const;
};

// Trains one classifier per threshold on the importance-weighted task
// I(y >= t). Each invocation of the learner is a pure function of
// (samples, per-threshold derived seed), so the ensemble is bit-identical
// for any thread count.
QuantileEnsemble quanting_train(const Dataset& data, const QuantileSpec& q,
                                const ThresholdGrid& grid, const WeightedLearner& learner,
                                std::uint64_t seed, unsigned threads = 1,
                                bool hard_outputs = false);

// Average of the (clamped) classifier outputs; always in [0, 1].
double quanting_predict_normalized(const QuantileEnsemble& model, std::span<const double> x);

// quanting_predict_normalized pushed through the inverse label map; always
// in [label_min, label_max].
double quanting_predict(const QuantileEnsemble& model, std::span<const double> x);

// Average over the given classifier subset only (convergence studies).
double quanting_predict_subset(const QuantileEnsemble& model, std::span<const double> x,
                               std::span<const std::size_t> subset);

// The k classifier indices whose thresholds best match the uniform midpoint
// positions (j - 0.5)/k, returned in increasing order; the full index set
// when k == grid size, so a full-size "prefix" reproduces the model exactly.
std::vector<std::size_t> spread_subset_indices(const ThresholdGrid& grid, std::size_t k);

// Wraps a weighted learner so each threshold task is first converted to an
// unweighted one by rejection sampling; the appended threshold column rides
// along and the returned scorer re-attaches it at prediction time.
WeightedLearner with_rejection_path(WeightedLearner base);

// Scorer adapter used by the rejection path: evaluates an inner scorer on
// x with a fixed threshold appended.
class ThresholdAugmentedScorer final : public BinaryScorer {
  public:
    ThresholdAugmentedScorer(ScorerPtr inner, double threshold)
        : inner_(std::move(inner)), threshold_(threshold) {}

    double score(std::span<const double> x) const override;
    std::size_t feature_count() const override { return inner_->feature_count() - 1; }
    std::string kind() const override { return "threshold_augmented"; }

    const ScorerPtr& inner() const { return inner_; }
    double threshold() const { return threshold_; }

  private:
    ScorerPtr inner_;
    double threshold_;
};

} // namespace quanting
