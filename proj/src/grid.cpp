#include "quanting/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "quanting/metrics.hpp"

namespace quanting {

void ThresholdGrid::validate() const {
    if (thresholds.empty())
        throw std::invalid_argument("threshold grid must not be empty");
    double prev = 0.0;
    for (double t : thresholds) {
        if (!(t > 0.0 && t < 1.0))
            throw std::invalid_argument("thresholds must lie in (0,1)");
        if (!(t > prev))
            throw std::invalid_argument("thresholds must be strictly increasing");
        prev = t;
    }
}

std::vector<double> ThresholdGrid::cell_widths() const {
    const std::size_t n = thresholds.size();
    std::vector<double> widths(n);
    for (std::size_t k = 0; k < n; ++k) {
        double lo = k == 0 ? 0.0 : 0.5 * (thresholds[k - 1] + thresholds[k]);
        double hi = k + 1 == n ? 1.0 : 0.5 * (thresholds[k] + thresholds[k + 1]);
        widths[k] = hi - lo;
    }
    return widths;
}

ThresholdGrid build_grid(std::size_t n, GridScheme scheme,
                         std::span<const double> training_labels) {
    if (n == 0)
        throw std::invalid_argument("grid size n must be positive");

    ThresholdGrid grid;
    grid.scheme = scheme;
    grid.thresholds.reserve(n);

    if (scheme == GridScheme::uniform) {
        for (std::size_t k = 1; k <= n; ++k)
            grid.thresholds.push_back((static_cast<double>(k) - 0.5) / static_cast<double>(n));
    } else {
        if (training_labels.empty())
            throw std::invalid_argument("adaptive grid requires training labels");
        constexpr double kMinGap = 1e-9;
        for (std::size_t k = 1; k <= n; ++k) {
            QuantileSpec level{(static_cast<double>(k) - 0.5) / static_cast<double>(n)};
            double t = empirical_quantile(training_labels, level);
            t = std::clamp(t, kMinGap, 1.0 - kMinGap);
            if (grid.thresholds.empty() || t - grid.thresholds.back() >= kMinGap)
                grid.thresholds.push_back(t);
        }
    }
    grid.validate();
    return grid;
}

const char* grid_scheme_name(GridScheme scheme) {
    return scheme == GridScheme::uniform ? "uniform" : "adaptive";
}

GridScheme grid_scheme_from_name(const std::string& name) {
    if (name == "uniform")
        return GridScheme::uniform;
    if (name == "adaptive")
        return GridScheme::adaptive;
    throw std::invalid_argument("unknown grid scheme: " + name);
}

} // namespace quanting
