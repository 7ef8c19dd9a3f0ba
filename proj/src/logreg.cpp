#include <cmath>
#include <stdexcept>

#include "quanting/learners.hpp"

namespace quanting {

namespace {

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// log(1 + exp(v)) without overflow
double softplus(double v) {
    if (v > 35.0)
        return v;
    return std::log1p(std::exp(v));
}

// In-place Cholesky solve of A x = b for small symmetric positive definite A
// (row-major n x n). Returns false when the factorization breaks down.
bool cholesky_solve(std::vector<double> a, std::vector<double> b, std::size_t n,
                    std::vector<double>& x) {
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k)
            diag -= a[j * n + k] * a[j * n + k];
        if (!(diag > 0.0))
            return false;
        diag = std::sqrt(diag);
        a[j * n + j] = diag;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k)
                v -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = v / diag;
        }
    }
    // forward then backward substitution
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k)
            v -= a[i * n + k] * b[k];
        b[i] = v / a[i * n + i];
    }
    x.assign(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k)
            v -= a[k * n + ii] * x[k];
        x[ii] = v / a[ii * n + ii];
    }
    return true;
}

struct Standardized {
    std::vector<double> mean;
    std::vector<double> scale;
};

} // namespace

double LogregScorer::score(std::span<const double> x) const {
    double u = intercept_;
    for (std::size_t j = 0; j < coefficients_.size(); ++j)
        u += coefficients_[j] * x[j];
    return sigmoid(u);
}

double logreg_objective(std::span<const WeightedBinarySample> samples,
                        std::span<const double> coefficients, double intercept, double l2,
                        std::vector<double>* gradient) {
    const std::size_t d = coefficients.size();
    if (gradient)
        gradient->assign(d + 1, 0.0);
    double objective = 0.0;
    for (const auto& s : samples) {
        double u = intercept;
        for (std::size_t j = 0; j < d; ++j)
            u += coefficients[j] * s.features[j];
        // -[y log p + (1-y) log(1-p)] = softplus(u) - y*u
        objective += s.weight * (softplus(u) - s.label * u);
        if (gradient) {
            const double r = s.weight * (sigmoid(u) - s.label);
            for (std::size_t j = 0; j < d; ++j)
                (*gradient)[j] += r * s.features[j];
            (*gradient)[d] += r;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        objective += 0.5 * l2 * coefficients[j] * coefficients[j];
        if (gradient)
            (*gradient)[j] += l2 * coefficients[j];
    }
    return objective;
}

ScorerPtr train_weighted_logreg(std::span<const WeightedBinarySample> samples,
                                const LearnerConfig& config) {
    config.validate();
    std::vector<WeightedBinarySample> live;
    for (const auto& s : samples) {
        if (!(s.weight >= 0.0) || !std::isfinite(s.weight))
            throw std::invalid_argument("sample weights must be finite and nonnegative");
        if (s.weight > 0.0)
            live.push_back(s);
    }
    if (live.empty())
        throw std::invalid_argument("logreg learner needs positive total weight");
    const std::size_t d = live[0].features.size();
    double positive_weight = 0.0, total_weight = 0.0;
    for (const auto& s : live) {
        if (s.features.size() != d)
            throw std::invalid_argument("inconsistent feature arity across samples");
        for (double v : s.features)
            if (!std::isfinite(v))
                throw std::invalid_argument("non-finite feature value");
        total_weight += s.weight;
        positive_weight += s.weight * s.label;
    }

    // one-sided data: the MLE intercept diverges, so return the saturated fit
    if (positive_weight == 0.0 || positive_weight == total_weight)
        return std::make_shared<LogregScorer>(std::vector<double>(d, 0.0),
                                              positive_weight == 0.0 ? -37.0 : 37.0);

    // standardize for conditioning; constant columns become inert zeros
    Standardized st{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
    for (const auto& s : live)
        for (std::size_t j = 0; j < d; ++j)
            st.mean[j] += s.features[j];
    for (std::size_t j = 0; j < d; ++j)
        st.mean[j] /= static_cast<double>(live.size());
    std::vector<double> var(d, 0.0);
    for (const auto& s : live)
        for (std::size_t j = 0; j < d; ++j) {
            const double c = s.features[j] - st.mean[j];
            var[j] += c * c;
        }
    for (std::size_t j = 0; j < d; ++j) {
        var[j] /= static_cast<double>(live.size());
        st.scale[j] = var[j] > 0.0 ? std::sqrt(var[j]) : 1.0;
    }
    for (auto& s : live)
        for (std::size_t j = 0; j < d; ++j)
            s.features[j] = (s.features[j] - st.mean[j]) / st.scale[j];

    std::vector<double> theta(d, 0.0); // standardized-space coefficients
    double intercept = 0.0;
    std::vector<double> gradient;
    double objective = logreg_objective(live, theta, intercept, config.logreg_l2, &gradient);

    for (std::size_t iter = 0; iter < config.logreg_max_iterations; ++iter) {
        double gnorm = 0.0;
        for (double g : gradient)
            gnorm += g * g;
        if (std::sqrt(gnorm) <= config.logreg_tolerance)
            break;

        // Newton system: (X^T S X + l2 I') step = gradient
        const std::size_t n = d + 1;
        std::vector<double> hessian(n * n, 0.0);
        for (const auto& s : live) {
            double u = intercept;
            for (std::size_t j = 0; j < d; ++j)
                u += theta[j] * s.features[j];
            const double p = sigmoid(u);
            const double w = std::max(s.weight * p * (1.0 - p), 1e-12);
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = a; b < d; ++b)
                    hessian[a * n + b] += w * s.features[a] * s.features[b];
                hessian[a * n + d] += w * s.features[a];
            }
            hessian[d * n + d] += w;
        }
        for (std::size_t a = 0; a < d; ++a)
            hessian[a * n + a] += config.logreg_l2;
        for (std::size_t a = 0; a < n; ++a) {
            hessian[a * n + a] += 1e-12;
            for (std::size_t b = 0; b < a; ++b)
                hessian[a * n + b] = hessian[b * n + a];
        }

        std::vector<double> step;
        if (!cholesky_solve(hessian, gradient, n, step))
            break;

        double stepsize = 1.0;
        bool accepted = false;
        std::vector<double> trial(d), trial_grad;
        for (int halving = 0; halving < 40; ++halving) {
            for (std::size_t j = 0; j < d; ++j)
                trial[j] = theta[j] - stepsize * step[j];
            const double trial_intercept = intercept - stepsize * step[d];
            const double trial_obj =
                logreg_objective(live, trial, trial_intercept, config.logreg_l2, &trial_grad);
            if (trial_obj <= objective) {
                theta = trial;
                intercept = trial_intercept;
                objective = trial_obj;
                gradient = trial_grad;
                accepted = true;
                break;
            }
            stepsize *= 0.5;
        }
        if (!accepted)
            break;
    }

    // back to raw feature space
    std::vector<double> coefficients(d, 0.0);
    double raw_intercept = intercept;
    for (std::size_t j = 0; j < d; ++j) {
        coefficients[j] = theta[j] / st.scale[j];
        raw_intercept -= theta[j] * st.mean[j] / st.scale[j];
    }
    return std::make_shared<LogregScorer>(std::move(coefficients), raw_intercept);
}

WeightedLearner make_weighted_learner(const LearnerConfig& config) {
    config.validate();
    WeightedLearner learner;
    learner.name = learner_kind_name(config.kind);
    learner.train = [config](const std::vector<WeightedBinarySample>& samples,
                             std::uint64_t seed) -> ScorerPtr {
        LearnerConfig per_call = config;
        per_call.seed = seed;
        return config.kind == LearnerKind::tree ? train_weighted_tree(samples, per_call)
                                                : train_weighted_logreg(samples, per_call);
    };
    return learner;
}

} // namespace quanting
