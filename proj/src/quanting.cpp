#include "quanting/quanting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <stdexcept>
#include <string>

#include "quanting/rng.hpp"

namespace quanting {

const char* weighted_path_name(WeightedPath path) {
    return path == WeightedPath::native ? "native" : "rejection";
}

WeightedPath weighted_path_from_name(const std::string& name) {
    if (name == "native")
        return WeightedPath::native;
    if (name == "rejection")
        return WeightedPath::rejection;
    throw std::invalid_argument("unknown weighted path: " + name);
}

std::size_t QuantileEnsemble::feature_count() const {
    return classifiers.empty() ? 0 : classifiers.front()->feature_count();
}

QuantileEnsemble quanting_train(const Dataset& data, const QuantileSpec& q,
                                const ThresholdGrid& grid, const WeightedLearner& learner,
                                std::uint64_t seed, unsigned threads, bool hard_outputs) {
    grid.validate();
    if (!data.normalization())
        throw std::invalid_argument("quanting_train requires a normalized dataset");
    for (double y : data.labels())
        if (!(y >= 0.0 && y <= 1.0))
            throw std::invalid_argument("quanting_train requires labels in [0,1]");

    const std::size_t n = grid.size();
    std::vector<ScorerPtr> classifiers(n);

    auto train_one = [&](std::size_t k) {
        const double t = grid.thresholds[k];
        try {
            auto task = make_weighted_set(data, t, q);
            classifiers[k] = learner.train(task, Rng::derive(seed, k));
        } catch (const std::exception& e) {
            throw std::runtime_error("training failed at threshold " + std::to_string(t) + ": " +
                                     e.what());
        }
        if (!classifiers[k])
            throw std::runtime_error("learner returned no classifier at threshold " +
                                     std::to_string(grid.thresholds[k]));
    };

    if (threads <= 1 || n <= 1) {
        for (std::size_t k = 0; k < n; ++k)
            train_one(k);
    } else {
        // fan out; results land in per-threshold slots so the outcome does
        // not depend on scheduling
        std::atomic<std::size_t> next{0};
        auto worker = [&]() -> std::exception_ptr {
            try {
                for (std::size_t k = next.fetch_add(1); k < n; k = next.fetch_add(1))
                    train_one(k);
            } catch (...) {
                return std::current_exception();
            }
            return nullptr;
        };
        std::vector<std::future<std::exception_ptr>> futures;
        const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
        futures.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            futures.push_back(std::async(std::launch::async, worker));
        std::exception_ptr first_error;
        for (auto& f : futures)
            if (auto err = f.get(); err && !first_error)
                first_error = err;
        if (first_error)
            std::rethrow_exception(first_error);
    }

    QuantileEnsemble model;
    model.classifiers = std::move(classifiers);
    model.grid = grid;
    model.q = q;
    model.normalization = *data.normalization();
    model.hard_outputs = hard_outputs;
    return model;
}

namespace {

double classifier_output(const QuantileEnsemble& model, std::size_t k, std::span<const double> x) {
    const double s = predict_score(*model.classifiers[k], x);
    if (model.hard_outputs)
        return s >= 0.5 ? 1.0 : 0.0;
    return s;
}

} // namespace

double quanting_predict_normalized(const QuantileEnsemble& model, std::span<const double> x) {
    if (model.classifiers.empty())
        throw std::invalid_argument("empty ensemble");
    if (model.grid.scheme == GridScheme::uniform) {
        // cells all have width 1/n: the plain mean is the midpoint Riemann sum
        double sum = 0.0;
        for (std::size_t k = 0; k < model.classifiers.size(); ++k)
            sum += classifier_output(model, k, x);
        return sum / static_cast<double>(model.classifiers.size());
    }
    // non-uniform mesh: weight each classifier by its cell so the average
    // still approximates the uniform-in-t prediction integral
    const auto widths = model.grid.cell_widths();
    double sum = 0.0, total = 0.0;
    for (std::size_t k = 0; k < model.classifiers.size(); ++k) {
        sum += widths[k] * classifier_output(model, k, x);
        total += widths[k];
    }
    return sum / total;
}

double quanting_predict(const QuantileEnsemble& model, std::span<const double> x) {
    return model.normalization.to_original(quanting_predict_normalized(model, x));
}

double quanting_predict_subset(const QuantileEnsemble& model, std::span<const double> x,
                               std::span<const std::size_t> subset) {
    if (subset.empty())
        throw std::invalid_argument("empty classifier subset");
    if (subset.size() == model.size())
        return quanting_predict(model, x); // the full "prefix" is the model itself
    // smaller prefixes are chosen maximally spread over [0,1], so the plain
    // mean is the midpoint-style estimate of the prediction integral
    double sum = 0.0;
    for (std::size_t k : subset)
        sum += classifier_output(model, k, x);
    return model.normalization.to_original(sum / static_cast<double>(subset.size()));
}

std::vector<std::size_t> spread_subset_indices(const ThresholdGrid& grid, std::size_t k) {
    const std::size_t n = grid.size();
    if (k == 0 || k > n)
        throw std::invalid_argument("subset size must be in [1, grid size]");
    if (k == n) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i)
            all[i] = i;
        return all;
    }
    std::vector<bool> used(n, false);
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    for (std::size_t j = 1; j <= k; ++j) {
        const double target = (static_cast<double>(j) - 0.5) / static_cast<double>(k);
        std::size_t best = n;
        double best_dist = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i])
                continue;
            const double dist = std::abs(grid.thresholds[i] - target);
            if (best == n || dist < best_dist) {
                best = i;
                best_dist = dist;
            }
        }
        used[best] = true;
        chosen.push_back(best);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

double ThresholdAugmentedScorer::score(std::span<const double> x) const {
    std::vector<double> augmented(x.begin(), x.end());
    augmented.push_back(threshold_);
    return predict_score(*inner_, augmented);
}

WeightedLearner with_rejection_path(WeightedLearner base) {
    WeightedLearner wrapped;
    wrapped.name = base.name + "+rejection";
    wrapped.train = [base](const std::vector<WeightedBinarySample>& samples,
                           std::uint64_t seed) -> ScorerPtr {
        if (samples.empty())
            throw std::invalid_argument("empty sample set");
        const double threshold = samples.front().threshold;
        auto kept = rejection_sample(samples, Rng::derive(seed, 0x72656a65637400ULL));
        if (kept.empty())
            throw std::runtime_error("rejection sampling kept no samples");
        std::vector<WeightedBinarySample> unweighted;
        unweighted.reserve(kept.size());
        for (auto& u : kept)
            unweighted.push_back(
                WeightedBinarySample{std::move(u.features), threshold, u.label, 1.0});
        auto inner = base.train(unweighted, Rng::derive(seed, 0x72656a65637401ULL));
        return std::make_shared<ThresholdAugmentedScorer>(std::move(inner), threshold);
    };
    return wrapped;
}

} // namespace quanting
