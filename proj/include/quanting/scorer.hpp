#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>

namespace quanting {

// A trained binary scorer: feature vector -> score in [0, 1]. Scorers are
// immutable once built and safe to share across threads.
class BinaryScorer {
  public:
    virtual ~BinaryScorer() = default;

    // Raw score; implementations keep this within [0, 1] but callers should
    // go through predict_score, which checks arity and clamps.
    virtual double score(std::span<const double> x) const = 0;

    virtual std::size_t feature_count() const = 0;
    virtual std::string kind() const = 0;
};

using ScorerPtr = std::shared_ptr<const BinaryScorer>;

// Checked scoring entry point: verifies the feature arity and clamps the
// result to [0, 1].
double predict_score(const BinaryScorer& scorer, std::span<const double> x);

inline double predict_score(const ScorerPtr& scorer, std::span<const double> x) {
    return predict_score(*scorer, x);
}

// Constant-output scorer; the degenerate single-leaf case and a handy test
// double.
class ConstantScorer final : public BinaryScorer {
  public:
    ConstantScorer(double value, std::size_t feature_count)
        : value_(value), feature_count_(feature_count) {}

    double score(std::span<const double>) const override { return value_; }
    std::size_t feature_count() const override { return feature_count_; }
    std::string kind() const override { return "constant"; }

    double value() const { return value_; }

  private:
    double value_;
    std::size_t feature_count_;
};

} // namespace quanting
