#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quanting/dataset.hpp"
#include "quanting/scorer.hpp"

namespace quanting {

// One importance-weighted training example for the threshold-t task:
// label = I(y >= t) (equality counts as positive), weight = q for positives
// and 1 - q for negatives.
struct WeightedBinarySample {
    std::vector<double> features;
    double threshold = 0.0;
    int label = 0;
    double weight = 0.0;
};

// Unweighted example produced by rejection sampling; the threshold is
// appended to the features as an extra column.
struct UnweightedBinarySample {
    std::vector<double> features;
    int label = 0;
};

// Builds the threshold-t task from a normalized dataset: one sample per
// training example.
std::vector<WeightedBinarySample> make_weighted_set(const Dataset& data, double t,
                                                    const QuantileSpec& q);

// Keeps each sample independently with probability equal to its weight;
// kept samples carry weight 1 and the threshold appended as a feature.
// Deterministic given the seed. Empty output is legal.
std::vector<UnweightedBinarySample> rejection_sample(std::span<const WeightedBinarySample> samples,
                                                     std::uint64_t seed);

// Mean over samples of weight * I(predicted label != sample label), with soft
// scores thresholded at 0.5 (score >= 0.5 predicts 1).
double importance_weighted_error(const BinaryScorer& scorer,
                                 std::span<const WeightedBinarySample> samples);

} // namespace quanting
