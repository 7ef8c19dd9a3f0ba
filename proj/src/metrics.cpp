#include "quanting/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quanting {

double pinball_loss(double y, double f, const QuantileSpec& q) {
    return y >= f ? q.q * (y - f) : (1.0 - q.q) * (f - y);
}

double empirical_quantile(std::span<const double> labels, const QuantileSpec& q) {
    if (labels.empty())
        throw std::invalid_argument("empty sample");
    const auto m = labels.size();
    // ceil(q*m), shaving FP noise so that e.g. 0.9 * 100 does not land at 91
    auto k = static_cast<std::size_t>(std::ceil(q.q * static_cast<double>(m) - 1e-9));
    k = std::clamp<std::size_t>(k, 1, m);
    std::vector<double> sorted(labels.begin(), labels.end());
    std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
    return sorted[k - 1];
}

double sum_pinball_loss(std::span<const double> predictions, std::span<const double> labels,
                        const QuantileSpec& q) {
    if (predictions.size() != labels.size() || labels.empty())
        throw std::invalid_argument("predictions and labels must have equal nonzero length");
    double s = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        s += pinball_loss(labels[i], predictions[i], q);
    return s;
}

double mean_pinball_loss(std::span<const double> predictions, std::span<const double> labels,
                         const QuantileSpec& q) {
    return sum_pinball_loss(predictions, labels, q) / static_cast<double>(labels.size());
}

double coverage_below(std::span<const double> predictions, std::span<const double> labels) {
    if (predictions.size() != labels.size() || labels.empty())
        throw std::invalid_argument("predictions and labels must have equal nonzero length");
    std::size_t above = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (predictions[i] > labels[i])
            ++above;
    return static_cast<double>(above) / static_cast<double>(labels.size());
}

void EvalReport::validate() const {
    if (!(mean_pinball_loss >= 0.0) || !(sum_pinball_loss >= 0.0))
        throw std::runtime_error("pinball loss must be nonnegative");
    if (!(coverage_below >= 0.0 && coverage_below <= 1.0))
        throw std::runtime_error("coverage_below must lie in [0,1]");
    if (!(train_seconds >= 0.0) || !(predict_seconds >= 0.0))
        throw std::runtime_error("timings must be nonnegative");
    if (loss_curve) {
        for (std::size_t i = 0; i + 1 < loss_curve->size(); ++i)
            if ((*loss_curve)[i].ensemble_size >= (*loss_curve)[i + 1].ensemble_size)
                throw std::runtime_error("loss_curve ensemble sizes must be strictly increasing");
        for (const auto& p : *loss_curve)
            if (!std::isfinite(p.mean_pinball_loss))
                throw std::runtime_error("loss_curve values must be finite");
    }
}

} // namespace quanting
