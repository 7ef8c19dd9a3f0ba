#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "quanting/dataset.hpp"
#include "quanting/grid.hpp"
#include "quanting/rng.hpp"

namespace quanting::synth {

// Finite conditional distribution with everything computable by enumeration:
// a handful of contexts, each with a short list of (label, probability)
// atoms. Labels live in [0,1] and are strictly increasing within a context.
struct ContextPmf {
    std::vector<double> labels;
    std::vector<double> probs;

    // P(y < u): strict CDF just below u
    double cdf_strict(double u) const;
    // P(y <= u)
    double cdf(double u) const;
};

struct DiscreteInstance {
    std::vector<std::vector<double>> contexts; // feature vectors
    std::vector<double> context_probs;
    std::vector<ContextPmf> pmfs;

    std::size_t context_count() const { return contexts.size(); }
    void validate() const;
};

// Smallest label satisfying both quantile inequalities
// P(y <= f) >= q and P(y >= f) >= 1 - q for the context's pmf.
double true_quantile(const DiscreteInstance& instance, std::size_t context,
                     const QuantileSpec& q);

// I(P(y <= t | x) <= q), the per-threshold optimal classifier.
int bayes_classifier_value(const DiscreteInstance& instance, std::size_t context, double t,
                           const QuantileSpec& q);

// E[l_q(y, predictor(x))] - E[l_q(y, quantile(x))], computed in closed form
// by integrating the piecewise-constant integrand q - P(y < u | x) between
// pmf atoms. `predictor` holds one value per context.
double exact_quantile_regret(const DiscreteInstance& instance, std::span<const double> predictor,
                             const QuantileSpec& q);

// e(D, c) - e(D, c*) with both importance-weighted errors enumerated on the
// grid (Riemann midpoint over grid cells) and c* from bayes_classifier_value.
// `classifier[ctx][k]` is the soft output at threshold k, in [0, 1].
double exact_classifier_regret(const DiscreteInstance& instance,
                               const std::vector<std::vector<double>>& classifier,
                               const QuantileSpec& q, const ThresholdGrid& grid);

// Integral of the piecewise-constant classifier extension over [0,1]:
// sum of cell_width * value. Equals the plain mean on a uniform midpoint
// grid; this is the predictor the reduction's averaging step produces.
double grid_average(std::span<const double> classifier_values, const ThresholdGrid& grid);

// Seeded construction: context probabilities and atom probabilities are
// normalized uniform draws; atom locations are sorted uniform draws.
DiscreteInstance random_instance(Rng& rng, std::size_t max_contexts = 4,
                                 std::size_t max_atoms = 5);

// JSON fixture round-trip so regression fixtures stay stable across runs.
std::string to_fixture_json(const DiscreteInstance& instance);
DiscreteInstance from_fixture_json(const std::string& text);
void save_fixture(const std::string& path, const DiscreteInstance& instance);
DiscreteInstance load_fixture(const std::string& path);

} // namespace quanting::synth
