#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "lla/preference.hpp"
#include "lla/problems.hpp"
#include "lla/scalarize.hpp"
#include "lla/types.hpp"

namespace lla {

struct Individual {
    DecisionVector x;
    ObjectiveVector f;
};

/// N individuals paired one-to-one with the preference set, plus the running
/// reference point. `eval_count` counts evaluator calls made on its behalf.
struct Population {
    std::vector<Individual> members;
    PreferenceSet prefs;
    ReferencePoint z;
    std::size_t eval_count = 0;

    std::size_t size() const noexcept { return members.size(); }
    /// g(x^i, lambda^i) under the current z.
    double subproblem_value(std::size_t i) const;
    double mean_subproblem_value() const;
};

/// MOEA/D-DE operator settings. Defaults are the canonical MOEA/D-DE values;
/// `mutation_prob` <= 0 means 1/n.
struct MoeadConfig {
    std::size_t neighborhood_size = 20;
    double mating_locality = 0.9;
    std::size_t max_replacements = 2;
    double de_scale = 0.5;
    double crossover_rate = 1.0;
    double mutation_prob = -1.0;
    double mutation_eta = 20.0;
    /// Visit sub-problems in a random order each generation instead of by index.
    bool permute_order = false;
    /// Testing hook: keep z fixed during generations.
    bool freeze_reference = false;

    /// Throws ConfigError naming the offending field.
    void validate(std::size_t population_size) const;
    double effective_mutation_prob(std::size_t n) const;
};

Population init_population(const MopDefinition &problem, const PreferenceSet &prefs, Rng &rng);

/// Indices of the T nearest preference vectors (Euclidean, self included),
/// ties broken by lower index.
std::vector<std::vector<std::size_t>> build_neighborhoods(const PreferenceSet &prefs, std::size_t t);

/// DE/rand/1 + binomial crossover + polynomial mutation, clamped to bounds.
DecisionVector de_offspring(const Population &pop, std::size_t i,
                            const std::vector<std::vector<std::size_t>> &neighborhoods,
                            const MopDefinition &problem, const MoeadConfig &config, Rng &rng);

/// Polynomial mutation in its bound-independent form; leaves repair to the caller.
void polynomial_mutation(DecisionVector &x, const MopDefinition &problem, double prob, double eta,
                         Rng &rng);

/// One pass over all sub-problems. Adds exactly N evaluations.
void moead_generation(Population &pop, const std::vector<std::vector<std::size_t>> &neighborhoods,
                      const MopDefinition &problem, const MoeadConfig &config, Rng &rng);

using GenerationObserver = std::function<void(const Population &, std::size_t generation)>;

/// Baseline MOEA/D-DE. With `eval_budget` set, keeps running whole
/// generations after `generations` until eval_count reaches the budget.
Population run_moead_de(const MopDefinition &problem, const PreferenceSet &prefs,
                        std::size_t generations, const MoeadConfig &config, Rng &rng,
                        std::optional<std::size_t> eval_budget = std::nullopt,
                        const GenerationObserver &observer = {});

}  // namespace lla
