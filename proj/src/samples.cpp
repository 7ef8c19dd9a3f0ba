#include "quanting/samples.hpp"

#include <algorithm>
#include <stdexcept>

#include "quanting/rng.hpp"

namespace quanting {

double predict_score(const BinaryScorer& scorer, std::span<const double> x) {
    if (x.size() != scorer.feature_count())
        throw std::invalid_argument("feature arity mismatch: scorer expects " +
                                    std::to_string(scorer.feature_count()) + ", got " +
                                    std::to_string(x.size()));
    return std::clamp(scorer.score(x), 0.0, 1.0);
}

std::vector<WeightedBinarySample> make_weighted_set(const Dataset& data, double t,
                                                    const QuantileSpec& q) {
    std::vector<WeightedBinarySample> out;
    out.reserve(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const double y = data.labels()[i];
        const int label = y >= t ? 1 : 0;
        auto row = data.row(i);
        out.push_back(WeightedBinarySample{
            std::vector<double>(row.begin(), row.end()),
            t,
            label,
            label == 1 ? q.q : 1.0 - q.q,
        });
    }
    return out;
}

std::vector<UnweightedBinarySample> rejection_sample(std::span<const WeightedBinarySample> samples,
                                                     std::uint64_t seed) {
    for (const auto& s : samples)
        if (!(s.weight > 0.0 && s.weight <= 1.0))
            throw std::invalid_argument("rejection sampling requires weights in (0,1]");

    Rng rng(seed);
    std::vector<UnweightedBinarySample> kept;
    for (const auto& s : samples) {
        if (rng.next_double() < s.weight) {
            UnweightedBinarySample u;
            u.features = s.features;
            u.features.push_back(s.threshold);
            u.label = s.label;
            kept.push_back(std::move(u));
        }
    }
    return kept;
}

double importance_weighted_error(const BinaryScorer& scorer,
                                 std::span<const WeightedBinarySample> samples) {
    if (samples.empty())
        throw std::invalid_argument("importance_weighted_error: empty sample set");
    double total = 0.0;
    for (const auto& s : samples) {
        const int predicted = predict_score(scorer, s.features) >= 0.5 ? 1 : 0;
        if (predicted != s.label)
            total += s.weight;
    }
    return total / static_cast<double>(samples.size());
}

} // namespace quanting
