#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "quanting/learners.hpp"

namespace quanting {

void LearnerConfig::validate() const {
    if (tree_max_depth == 0)
        throw std::invalid_argument("tree_max_depth must be positive");
    if (!(tree_min_leaf_weight > 0.0))
        throw std::invalid_argument("tree_min_leaf_weight must be positive");
    if (logreg_max_iterations == 0)
        throw std::invalid_argument("logreg_max_iterations must be positive");
    if (!(logreg_l2 >= 0.0))
        throw std::invalid_argument("logreg_l2 must be nonnegative");
    if (!(logreg_tolerance > 0.0))
        throw std::invalid_argument("logreg_tolerance must be positive");
}

const char* learner_kind_name(LearnerKind kind) {
    return kind == LearnerKind::tree ? "tree" : "logreg";
}

LearnerKind learner_kind_from_name(const std::string& name) {
    if (name == "tree")
        return LearnerKind::tree;
    if (name == "logreg")
        return LearnerKind::logreg;
    throw std::invalid_argument("unknown learner kind: " + name);
}

double TreeScorer::score(std::span<const double> x) const {
    const TreeNode* node = &nodes_[0];
    while (!node->is_leaf())
        node = x[static_cast<std::size_t>(node->feature)] < node->cut ? &nodes_[node->left]
                                                                      : &nodes_[node->right];
    return node->score;
}

std::size_t TreeScorer::depth() const {
    // iterative depth over the flat array
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    std::size_t deepest = 0;
    while (!stack.empty()) {
        auto [idx, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const TreeNode& node = nodes_[static_cast<std::size_t>(idx)];
        if (!node.is_leaf()) {
            stack.push_back({node.left, d + 1});
            stack.push_back({node.right, d + 1});
        }
    }
    return deepest;
}

namespace {

// Gini impurity scaled by node weight: W * (1 - p^2 - (1-p)^2) = 2*Wp*Wn/W.
double weighted_gini(double positive_weight, double total_weight) {
    if (!(total_weight > 0.0))
        return 0.0;
    return 2.0 * positive_weight * (total_weight - positive_weight) / total_weight;
}

struct TreeBuilder {
    std::span<const WeightedBinarySample> samples;
    const LearnerConfig& config;
    std::vector<double> weights; // rescaled to mean 1
    std::vector<TreeNode> nodes;

    int grow(std::vector<std::size_t>& indices, std::size_t depth) {
        double total = 0.0, positive = 0.0;
        for (std::size_t i : indices) {
            total += weights[i];
            positive += weights[i] * samples[i].label;
        }

        const double node_impurity = weighted_gini(positive, total);
        int best_feature = -1;
        double best_cut = 0.0;

        if (depth < config.tree_max_depth && node_impurity > 0.0) {
            const std::size_t d = samples[indices[0]].features.size();
            // best gain == parent impurity - children impurity; since the
            // parent term is fixed, track the smallest children impurity
            double best_gain = 1e-12; // require strictly positive gain
            std::vector<std::size_t> order;
            for (std::size_t feature = 0; feature < d; ++feature) {
                order = indices;
                std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                    double fa = samples[a].features[feature];
                    double fb = samples[b].features[feature];
                    return fa != fb ? fa < fb : a < b;
                });
                double left_w = 0.0, left_pos = 0.0;
                for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
                    const std::size_t i = order[pos];
                    left_w += weights[i];
                    left_pos += weights[i] * samples[i].label;
                    const double lo = samples[i].features[feature];
                    const double hi = samples[order[pos + 1]].features[feature];
                    if (!(lo < hi))
                        continue;
                    const double right_w = total - left_w;
                    if (left_w < config.tree_min_leaf_weight ||
                        right_w < config.tree_min_leaf_weight)
                        continue;
                    double cut = 0.5 * (lo + hi);
                    if (cut <= lo)
                        cut = hi; // adjacent doubles: keep the partition consistent with x < cut
                    const double children = weighted_gini(left_pos, left_w) +
                                            weighted_gini(positive - left_pos, right_w);
                    const double gain = node_impurity - children;
                    // strict > keeps the first (lowest feature, lowest cut) of tied splits
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_feature = static_cast<int>(feature);
                        best_cut = cut;
                    }
                }
            }
        }

        const int node_index = static_cast<int>(nodes.size());
        nodes.emplace_back();
        if (best_feature < 0) {
            nodes[node_index].score = positive / total;
            return node_index;
        }

        std::vector<std::size_t> left, right;
        for (std::size_t i : indices)
            (samples[i].features[static_cast<std::size_t>(best_feature)] < best_cut ? left : right)
                .push_back(i);
        indices.clear();
        indices.shrink_to_fit();

        nodes[node_index].feature = best_feature;
        nodes[node_index].cut = best_cut;
        const int left_index = grow(left, depth + 1);
        nodes[node_index].left = left_index;
        const int right_index = grow(right, depth + 1);
        nodes[node_index].right = right_index;
        return node_index;
    }
};

} // namespace

ScorerPtr train_weighted_tree(std::span<const WeightedBinarySample> samples,
                              const LearnerConfig& config) {
    config.validate();
    std::vector<std::size_t> live;
    double total_weight = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].weight >= 0.0) || !std::isfinite(samples[i].weight))
            throw std::invalid_argument("sample weights must be finite and nonnegative");
        if (samples[i].weight > 0.0) {
            live.push_back(i);
            total_weight += samples[i].weight;
        }
    }
    if (live.empty() || !(total_weight > 0.0))
        throw std::invalid_argument("tree learner needs positive total weight");

    const std::size_t arity = samples[live[0]].features.size();
    for (std::size_t i : live)
        if (samples[i].features.size() != arity)
            throw std::invalid_argument("inconsistent feature arity across samples");

    TreeBuilder builder{samples, config, {}, {}};
    // rescale to mean 1 over live samples; min_leaf_weight then counts
    // average-weight samples and the structure ignores global weight scale
    builder.weights.assign(samples.size(), 0.0);
    const double scale = static_cast<double>(live.size()) / total_weight;
    for (std::size_t i : live)
        builder.weights[i] = samples[i].weight * scale;

    builder.grow(live, 0);
    return std::make_shared<TreeScorer>(std::move(builder.nodes), arity);
}

} // namespace quanting
