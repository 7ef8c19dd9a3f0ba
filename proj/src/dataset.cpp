#include "quanting/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace quanting {

Dataset::Dataset(std::vector<double> features, std::size_t cols, std::vector<double> labels,
                 std::optional<LabelNormalization> norm)
    : features_(std::move(features)), cols_(cols), labels_(std::move(labels)),
      normalization_(norm) {
    if (cols_ == 0)
        throw std::invalid_argument("dataset needs at least one feature column");
    if (features_.size() % cols_ != 0)
        throw std::invalid_argument("feature buffer size is not a multiple of the column count");
    rows_ = features_.size() / cols_;
    if (rows_ == 0 || labels_.size() != rows_)
        throw std::invalid_argument("row counts of features and labels must be equal and >= 1");
    for (double v : features_)
        if (!std::isfinite(v))
            throw std::invalid_argument("non-finite feature value");
    for (double y : labels_)
        if (!std::isfinite(y))
            throw std::invalid_argument("non-finite label value");
    if (normalization_ && !(normalization_->label_min < normalization_->label_max))
        throw std::invalid_argument("normalization requires label_min < label_max");
}

Dataset Dataset::normalized(std::vector<double> features, std::size_t cols,
                            std::vector<double> labels) {
    if (labels.empty())
        throw std::invalid_argument("row counts of features and labels must be equal and >= 1");
    auto [lo_it, hi_it] = std::minmax_element(labels.begin(), labels.end());
    LabelNormalization norm{*lo_it, *hi_it};
    if (!(norm.label_min < norm.label_max))
        throw std::invalid_argument("constant labels: degenerate normalization");
    for (double& y : labels)
        y = norm.to_unit(y);
    return Dataset(std::move(features), cols, std::move(labels), norm);
}

Dataset Dataset::with_normalization(std::vector<double> features, std::size_t cols,
                                    std::vector<double> original_labels,
                                    const LabelNormalization& norm) {
    for (double& y : original_labels)
        y = norm.to_unit(y);
    return Dataset(std::move(features), cols, std::move(original_labels), norm);
}

Dataset Dataset::raw(std::vector<double> features, std::size_t cols, std::vector<double> labels) {
    return Dataset(std::move(features), cols, std::move(labels), std::nullopt);
}

std::vector<double> Dataset::original_labels() const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        out[i] = original_label(i);
    return out;
}

} // namespace quanting
