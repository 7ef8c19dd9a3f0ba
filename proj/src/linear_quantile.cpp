#include "quanting/linear_quantile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "quanting/metrics.hpp"

namespace quanting {

namespace {

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;
};

Standardizer compute_standardizer(const Dataset& data) {
    const std::size_t d = data.cols();
    Standardizer st{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
    for (std::size_t i = 0; i < data.rows(); ++i) {
        auto row = data.row(i);
        for (std::size_t j = 0; j < d; ++j)
            st.mean[j] += row[j];
    }
    for (std::size_t j = 0; j < d; ++j)
        st.mean[j] /= static_cast<double>(data.rows());
    std::vector<double> var(d, 0.0);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        auto row = data.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double c = row[j] - st.mean[j];
            var[j] += c * c;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        var[j] /= static_cast<double>(data.rows());
        st.scale[j] = var[j] > 0.0 ? std::sqrt(var[j]) : 1.0;
    }
    return st;
}

} // namespace

LinearQuantileModel fit_linear_quantile(const Dataset& data, const QuantileSpec& q,
                                        const LinearFitOptions& options) {
    if (options.max_iterations == 0 || !(options.tolerance > 0.0))
        throw std::invalid_argument("invalid fit options");
    if (!data.normalization())
        throw std::invalid_argument("fit_linear_quantile requires a normalized dataset");

    const std::size_t m = data.rows();
    const std::size_t d = data.cols();
    const auto st = compute_standardizer(data);

    std::vector<double> z(m * d); // standardized features
    for (std::size_t i = 0; i < m; ++i) {
        auto row = data.row(i);
        for (std::size_t j = 0; j < d; ++j)
            z[i * d + j] = (row[j] - st.mean[j]) / st.scale[j];
    }
    const std::vector<double>& y = data.labels();

    auto objective = [&](std::span<const double> beta, double b) {
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double f = b;
            for (std::size_t j = 0; j < d; ++j)
                f += beta[j] * z[i * d + j];
            total += pinball_loss(y[i], f, q);
        }
        return total / static_cast<double>(m);
    };

    // start at the best constant predictor; it already beats the all-zero
    // model, so the returned best iterate can only improve on both
    std::vector<double> beta(d, 0.0);
    double b = empirical_quantile(y, q);
    std::vector<double> best_beta = beta;
    double best_b = b;
    double best_obj = objective(beta, b);

    std::vector<double> grad(d, 0.0);
    std::vector<double> window; // best objective at each iteration
    window.reserve(options.max_iterations + 1);
    window.push_back(best_obj);

    double current_obj = best_obj;
    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        // mean-pinball subgradient; y == f takes the y >= f branch slope
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double f = b;
            for (std::size_t j = 0; j < d; ++j)
                f += beta[j] * z[i * d + j];
            const double slope = y[i] >= f ? -q.q : (1.0 - q.q);
            for (std::size_t j = 0; j < d; ++j)
                grad[j] += slope * z[i * d + j];
            grad_b += slope;
        }
        for (std::size_t j = 0; j < d; ++j)
            grad[j] /= static_cast<double>(m);
        grad_b /= static_cast<double>(m);
        double norm_sq = grad_b * grad_b;
        for (double g : grad)
            norm_sq += g * g;
        if (norm_sq < 1e-30)
            break;

        // Polyak step toward an estimated target just below the best seen
        const double gap = current_obj - best_obj;
        const double target_slack =
            0.05 * (best_obj + 1e-3) / std::sqrt(static_cast<double>(iter) + 1.0);
        const double step = (gap + target_slack) / norm_sq;

        for (std::size_t j = 0; j < d; ++j)
            beta[j] -= step * grad[j];
        b -= step * grad_b;

        current_obj = objective(beta, b);
        if (current_obj < best_obj) {
            best_obj = current_obj;
            best_beta = beta;
            best_b = b;
        }
        window.push_back(best_obj);

        if (window.size() > 50) {
            const double improvement = window[window.size() - 51] - best_obj;
            if (improvement < options.tolerance)
                break;
        }
    }

    // map back to raw features (labels stay in normalized units)
    LinearQuantileModel model;
    model.q = q;
    model.normalization = *data.normalization();
    model.coefficients.assign(d, 0.0);
    model.intercept = best_b;
    for (std::size_t j = 0; j < d; ++j) {
        model.coefficients[j] = best_beta[j] / st.scale[j];
        model.intercept -= best_beta[j] * st.mean[j] / st.scale[j];
    }
    for (double c : model.coefficients)
        if (!std::isfinite(c))
            throw std::runtime_error("linear fit produced non-finite coefficients");
    return model;
}

double predict_linear(const LinearQuantileModel& model, std::span<const double> x) {
    if (x.size() != model.coefficients.size())
        throw std::invalid_argument("feature arity mismatch: model expects " +
                                    std::to_string(model.coefficients.size()) + ", got " +
                                    std::to_string(x.size()));
    double u = model.intercept;
    for (std::size_t j = 0; j < x.size(); ++j)
        u += model.coefficients[j] * x[j];
    return model.normalization.to_original(u);
}

} // namespace quanting
