#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "quanting/samples.hpp"
#include "quanting/scorer.hpp"

namespace quanting {

enum class LearnerKind { tree, logreg };

struct LearnerConfig {
    LearnerKind kind = LearnerKind::tree;
    // tree
    std::size_t tree_max_depth = 8;
    // Minimum child weight, measured after weights are rescaled to mean 1, so
    // the grown structure is invariant to a global rescaling of the weights.
    double tree_min_leaf_weight = 1.0;
    // logreg
    std::size_t logreg_max_iterations = 200;
    double logreg_l2 = 1e-4;
    double logreg_tolerance = 1e-8;

    std::uint64_t seed = 0;

    void validate() const;
};

const char* learner_kind_name(LearnerKind kind);
LearnerKind learner_kind_from_name(const std::string& name);

// ---------------------------------------------------------------------------
// Weighted CART-style tree
// ---------------------------------------------------------------------------

// Flat node array; feature < 0 marks a leaf. Samples with x[feature] >= cut go
// right, x[feature] < cut go left.
struct TreeNode {
    int feature = -1;
    double cut = 0.0;
    int left = -1;
    int right = -1;
    double score = 0.0; // leaf only: weighted positive fraction

    bool is_leaf() const { return feature < 0; }
};

class TreeScorer final : public BinaryScorer {
  public:
    TreeScorer(std::vector<TreeNode> nodes, std::size_t feature_count)
        : nodes_(std::move(nodes)), feature_count_(feature_count) {}

    double score(std::span<const double> x) const override;
    std::size_t feature_count() const override { return feature_count_; }
    std::string kind() const override { return "tree"; }

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::size_t depth() const;

  private:
    std::vector<TreeNode> nodes_;
    std::size_t feature_count_;
};

// Axis-aligned binary tree grown by weighted Gini impurity reduction: greedy
// best split over all features, candidate cuts at midpoints between
// consecutive distinct sorted values, ties broken toward the lowest feature
// index and lowest cut. Growth stops at max_depth, min_leaf_weight, or zero
// impurity. Zero-weight samples are dropped up front.
ScorerPtr train_weighted_tree(std::span<const WeightedBinarySample> samples,
                              const LearnerConfig& config);

// ---------------------------------------------------------------------------
// Weighted logistic regression
// ---------------------------------------------------------------------------

class LogregScorer final : public BinaryScorer {
  public:
    LogregScorer(std::vector<double> coefficients, double intercept)
        : coefficients_(std::move(coefficients)), intercept_(intercept) {}

    double score(std::span<const double> x) const override;
    std::size_t feature_count() const override { return coefficients_.size(); }
    std::string kind() const override { return "logreg"; }

    const std::vector<double>& coefficients() const { return coefficients_; }
    double intercept() const { return intercept_; }

  private:
    std::vector<double> coefficients_; // raw feature space
    double intercept_;
};

// Weighted negative log-likelihood plus (l2/2)*||coefficients||^2 with the
// intercept unpenalized, evaluated at (coefficients, intercept). `gradient`
// gets the analytic gradient appended as [d/dcoef..., d/dintercept].
// Exposed so tests can difference it numerically.
double logreg_objective(std::span<const WeightedBinarySample> samples,
                        std::span<const double> coefficients, double intercept, double l2,
                        std::vector<double>* gradient = nullptr);

// Minimizes logreg_objective by iteratively reweighted least squares with
// step halving; features are standardized internally and the solution mapped
// back to raw feature space.
ScorerPtr train_weighted_logreg(std::span<const WeightedBinarySample> samples,
                                const LearnerConfig& config);

// ---------------------------------------------------------------------------
// Learner interface consumed by the reduction driver
// ---------------------------------------------------------------------------

// A pure function of (samples, seed): identical inputs produce bit-identical
// scorers, so per-threshold training tasks can run in any order.
struct WeightedLearner {
    std::string name;
    std::function<ScorerPtr(const std::vector<WeightedBinarySample>&, std::uint64_t)> train;
};

WeightedLearner make_weighted_learner(const LearnerConfig& config);

} // namespace quanting
