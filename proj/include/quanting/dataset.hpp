#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace quanting {

// Target order statistic. Endpoints are rejected: at q = 0 or q = 1 the
// pinball loss degenerates and arbitrarily extreme predictors become optimal.
struct QuantileSpec {
    double q;

    explicit QuantileSpec(double q_value) : q(q_value) {
        if (!(q > 0.0 && q < 1.0))
            throw std::invalid_argument("q must be in (0,1)");
    }
};

// Affine map applied to labels so they live in [0, 1] during training.
struct LabelNormalization {
    double label_min = 0.0;
    double label_max = 1.0;

    double span() const { return label_max - label_min; }
    double to_unit(double y) const { return (y - label_min) / span(); }
    double to_original(double u) const { return label_min + u * span(); }
};

// Feature matrix (row-major) plus labels. When `normalization` is present the
// stored labels are the min-max mapped values; labels() of a dataset built by
// `normalized` all lie in [0, 1], while a test split mapped under the train
// split's statistics may step outside that range.
class Dataset {
  public:
    Dataset() = default;

    // Owns its normalization: computes min/max from `labels`, stores mapped
    // labels. Constant labels are rejected (degenerate normalization).
    static Dataset normalized(std::vector<double> features, std::size_t cols,
                              std::vector<double> labels);

    // Applies a normalization computed elsewhere (train-split statistics).
    static Dataset with_normalization(std::vector<double> features, std::size_t cols,
                                      std::vector<double> original_labels,
                                      const LabelNormalization& norm);

    // No label mapping at all (synthetic intermediates, oracle fixtures).
    static Dataset raw(std::vector<double> features, std::size_t cols,
                       std::vector<double> labels);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::span<const double> row(std::size_t i) const {
        return {features_.data() + i * cols_, cols_};
    }
    const std::vector<double>& labels() const { return labels_; }
    const std::vector<double>& feature_values() const { return features_; }

    const std::optional<LabelNormalization>& normalization() const { return normalization_; }

    // Label in original units, undoing the stored map if any.
    double original_label(std::size_t i) const {
        return normalization_ ? normalization_->to_original(labels_[i]) : labels_[i];
    }
    std::vector<double> original_labels() const;

  private:
    Dataset(std::vector<double> features, std::size_t cols, std::vector<double> labels,
            std::optional<LabelNormalization> norm);

    std::vector<double> features_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> labels_;
    std::optional<LabelNormalization> normalization_;
};

} // namespace quanting
