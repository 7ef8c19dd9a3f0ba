#include "quanting/synth_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include <json.hpp>

namespace quanting::synth {

double ContextPmf::cdf_strict(double u) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < labels.size(); ++j)
        if (labels[j] < u)
            sum += probs[j];
    return sum;
}

double ContextPmf::cdf(double u) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < labels.size(); ++j)
        if (labels[j] <= u)
            sum += probs[j];
    return sum;
}

void DiscreteInstance::validate() const {
    if (contexts.empty() || contexts.size() != context_probs.size() ||
        contexts.size() != pmfs.size())
        throw std::invalid_argument("instance needs matching context, probability and pmf lists");
    double total = 0.0;
    for (double p : context_probs) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("context probabilities must lie in [0,1]");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("context probabilities must sum to 1");
    for (const auto& pmf : pmfs) {
        if (pmf.labels.empty() || pmf.labels.size() != pmf.probs.size())
            throw std::invalid_argument("pmf needs matching nonempty label and probability lists");
        double mass = 0.0;
        double prev = -1.0;
        for (std::size_t j = 0; j < pmf.labels.size(); ++j) {
            if (!(pmf.labels[j] >= 0.0 && pmf.labels[j] <= 1.0))
                throw std::invalid_argument("pmf labels must lie in [0,1]");
            if (!(pmf.labels[j] > prev))
                throw std::invalid_argument("pmf labels must be strictly increasing");
            prev = pmf.labels[j];
            if (!(pmf.probs[j] >= 0.0 && pmf.probs[j] <= 1.0))
                throw std::invalid_argument("pmf probabilities must lie in [0,1]");
            mass += pmf.probs[j];
        }
        if (std::abs(mass - 1.0) > 1e-12)
            throw std::invalid_argument("pmf probabilities must sum to 1");
    }
}

double true_quantile(const DiscreteInstance& instance, std::size_t context,
                     const QuantileSpec& q) {
    const ContextPmf& pmf = instance.pmfs.at(context);
    double cumulative = 0.0;
    for (std::size_t j = 0; j < pmf.labels.size(); ++j) {
        cumulative += pmf.probs[j];
        const double at_or_above = 1.0 - (cumulative - pmf.probs[j]); // P(y >= label_j)
        if (cumulative >= q.q && at_or_above >= 1.0 - q.q)
            return pmf.labels[j];
    }
    return pmf.labels.back(); // cumulative rounding fallback; P(y <= max) = 1
}

int bayes_classifier_value(const DiscreteInstance& instance, std::size_t context, double t,
                           const QuantileSpec& q) {
    return instance.pmfs.at(context).cdf(t) <= q.q ? 1 : 0;
}

namespace {

// Closed-form signed integral of [P(y < u) - q] over [a, b] (negated when
// a > b). P(y < u) is constant between atoms, so split at atoms and sum.
double integral_strict_cdf_minus_q(const ContextPmf& pmf, double a, double b, double q) {
    if (a == b)
        return 0.0;
    const double sign = a < b ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    std::vector<double> cuts{lo};
    for (double label : pmf.labels)
        if (label > lo && label < hi)
            cuts.push_back(label);
    cuts.push_back(hi);
    double integral = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        // on (cuts[s], cuts[s+1]) the strict CDF equals P(y <= cuts[s])
        integral += (cuts[s + 1] - cuts[s]) * (pmf.cdf(cuts[s]) - q);
    }
    return sign * integral;
}

} // namespace

double exact_quantile_regret(const DiscreteInstance& instance, std::span<const double> predictor,
                             const QuantileSpec& q) {
    instance.validate();
    if (predictor.size() != instance.context_count())
        throw std::invalid_argument("one predictor value per context required");
    double regret = 0.0;
    for (std::size_t c = 0; c < instance.context_count(); ++c) {
        const double optimum = true_quantile(instance, c, q);
        regret += instance.context_probs[c] *
                  integral_strict_cdf_minus_q(instance.pmfs[c], optimum, predictor[c], q.q);
    }
    return regret;
}

double exact_classifier_regret(const DiscreteInstance& instance,
                               const std::vector<std::vector<double>>& classifier,
                               const QuantileSpec& q, const ThresholdGrid& grid) {
    instance.validate();
    grid.validate();
    if (classifier.size() != instance.context_count())
        throw std::invalid_argument("one classifier row per context required");
    const auto widths = grid.cell_widths();
    double regret = 0.0;
    for (std::size_t c = 0; c < instance.context_count(); ++c) {
        if (classifier[c].size() != grid.size())
            throw std::invalid_argument("one classifier value per grid threshold required");
        const ContextPmf& pmf = instance.pmfs[c];
        double error = 0.0, bayes_error = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double t = grid.thresholds[k];
            const double value = classifier[c][k];
            if (!(value >= 0.0 && value <= 1.0))
                throw std::invalid_argument("classifier values must lie in [0,1]");
            const double below = pmf.cdf_strict(t); // P(y < t)
            const double at_or_above = 1.0 - below; // P(y >= t)
            const double bayes = bayes_classifier_value(instance, c, t, q);
            error += widths[k] *
                     (q.q * at_or_above * (1.0 - value) + (1.0 - q.q) * below * value);
            bayes_error += widths[k] *
                           (q.q * at_or_above * (1.0 - bayes) + (1.0 - q.q) * below * bayes);
        }
        regret += instance.context_probs[c] * (error - bayes_error);
    }
    return regret;
}

double grid_average(std::span<const double> classifier_values, const ThresholdGrid& grid) {
    if (classifier_values.size() != grid.size())
        throw std::invalid_argument("one classifier value per grid threshold required");
    const auto widths = grid.cell_widths();
    double avg = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        avg += widths[k] * classifier_values[k];
    return avg;
}

DiscreteInstance random_instance(Rng& rng, std::size_t max_contexts, std::size_t max_atoms) {
    DiscreteInstance instance;
    const std::size_t n_contexts = 1 + rng.next_index(max_contexts);

    std::vector<double> raw(n_contexts);
    double total = 0.0;
    for (auto& p : raw) {
        p = 0.05 + rng.next_double();
        total += p;
    }
    for (std::size_t c = 0; c < n_contexts; ++c) {
        instance.contexts.push_back({rng.next_double(), static_cast<double>(c)});
        instance.context_probs.push_back(raw[c] / total);
    }
    // exactify the sum
    double partial = 0.0;
    for (std::size_t c = 0; c + 1 < n_contexts; ++c)
        partial += instance.context_probs[c];
    instance.context_probs.back() = 1.0 - partial;

    for (std::size_t c = 0; c < n_contexts; ++c) {
        const std::size_t n_atoms = 1 + rng.next_index(max_atoms);
        std::vector<double> labels(n_atoms);
        for (auto& v : labels)
            v = rng.next_double();
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end(),
                                 [](double a, double b) { return b - a < 1e-6; }),
                     labels.end());
        std::vector<double> probs(labels.size());
        double mass = 0.0;
        for (auto& p : probs) {
            p = 0.05 + rng.next_double();
            mass += p;
        }
        double acc = 0.0;
        for (std::size_t j = 0; j + 1 < probs.size(); ++j) {
            probs[j] /= mass;
            acc += probs[j];
        }
        probs.back() = 1.0 - acc;
        instance.pmfs.push_back(ContextPmf{std::move(labels), std::move(probs)});
    }
    instance.validate();
    return instance;
}

std::string to_fixture_json(const DiscreteInstance& instance) {
    nlohmann::ordered_json j;
    j["format"] = "quanting-instance";
    j["version"] = 1;
    j["contexts"] = instance.contexts;
    j["context_probs"] = instance.context_probs;
    auto& pmfs = j["pmfs"] = nlohmann::ordered_json::array();
    for (const auto& pmf : instance.pmfs)
        pmfs.push_back({{"labels", pmf.labels}, {"probs", pmf.probs}});
    return j.dump(2);
}

DiscreteInstance from_fixture_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "quanting-instance")
        throw std::runtime_error("not a quanting instance fixture");
    DiscreteInstance instance;
    instance.contexts = j.at("contexts").get<std::vector<std::vector<double>>>();
    instance.context_probs = j.at("context_probs").get<std::vector<double>>();
    for (const auto& p : j.at("pmfs"))
        instance.pmfs.push_back(ContextPmf{p.at("labels").get<std::vector<double>>(),
                                           p.at("probs").get<std::vector<double>>()});
    instance.validate();
    return instance;
}

void save_fixture(const std::string& path, const DiscreteInstance& instance) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open fixture file for writing: " + path);
    out << to_fixture_json(instance) << "\n";
}

DiscreteInstance load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open fixture file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_fixture_json(text);
}

} // namespace quanting::synth
