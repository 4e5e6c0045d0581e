#include "lla/moead.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lla/errors.hpp"

namespace lla {

double Population::subproblem_value(std::size_t i) const {
    return chebyshev(members[i].f, prefs.members[i], z);
}

double Population::mean_subproblem_value() const {
    double s = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        s += subproblem_value(i);
    }
    return s / static_cast<double>(members.size());
}

void MoeadConfig::validate(std::size_t population_size) const {
    if (neighborhood_size < 2 || neighborhood_size > population_size) {
        throw ConfigError("neighborhood_size must lie in [2, N], got " +
                          std::to_string(neighborhood_size));
    }
    if (!(mating_locality >= 0.0 && mating_locality <= 1.0)) {
        throw ConfigError("mating_locality must lie in [0, 1]");
    }
    if (max_replacements < 1) {
        throw ConfigError("max_replacements must be at least 1");
    }
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
        throw ConfigError("crossover_rate must lie in [0, 1]");
    }
    if (mutation_prob > 1.0) {
        throw ConfigError("mutation_prob must not exceed 1");
    }
    if (!(mutation_eta >= 0.0)) {
        throw ConfigError("mutation_eta must be nonnegative");
    }
}

double MoeadConfig::effective_mutation_prob(std::size_t n) const {
    return mutation_prob < 0.0 ? 1.0 / static_cast<double>(n) : mutation_prob;
}

Population init_population(const MopDefinition &problem, const PreferenceSet &prefs, Rng &rng) {
    Population pop;
    pop.prefs = prefs;
    pop.z = ReferencePoint::unset(problem.m());
    pop.members.reserve(prefs.size());
    for (std::size_t i = 0; i < prefs.size(); ++i) {
        Individual ind;
        ind.x.resize(problem.n());
        for (std::size_t j = 0; j < problem.n(); ++j) {
            std::uniform_real_distribution<double> u(problem.lower()[j], problem.upper()[j]);
            ind.x[j] = u(rng);
        }
        ind.f = problem.evaluate(ind.x);
        ++pop.eval_count;
        update_reference_inplace(pop.z, ind.f);
        pop.members.push_back(std::move(ind));
    }
    return pop;
}

std::vector<std::vector<std::size_t>> build_neighborhoods(const PreferenceSet &prefs, std::size_t t) {
    const std::size_t n = prefs.size();
    if (t > n) {
        throw std::invalid_argument("build_neighborhoods: T exceeds population size");
    }
    std::vector<std::vector<std::size_t>> out(n);
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double d = 0.0;
            for (std::size_t k = 0; k < prefs.anchor.size(); ++k) {
                const double diff = prefs.members[i][k] - prefs.members[j][k];
                d += diff * diff;
            }
            dist[j] = {d, j};
        }
        // Pairs compare by distance, then index.
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(t), dist.end());
        out[i].reserve(t);
        for (std::size_t k = 0; k < t; ++k) {
            out[i].push_back(dist[k].second);
        }
    }
    return out;
}

void polynomial_mutation(DecisionVector &x, const MopDefinition &problem, double prob, double eta,
                         Rng &rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double power = 1.0 / (eta + 1.0);
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (unit(rng) >= prob) continue;
        const double u = unit(rng);
        const double delta = u < 0.5 ? std::pow(2.0 * u, power) - 1.0
                                     : 1.0 - std::pow(2.0 * (1.0 - u), power);
        x[j] += delta * (problem.upper()[j] - problem.lower()[j]);
    }
}

namespace {

std::vector<std::size_t> whole_population(std::size_t n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
}

// Three mutually distinct parents from the pool (with replacement only when
// fewer than three candidates exist).
std::array<std::size_t, 3> pick_parents(const std::vector<std::size_t> &pool, Rng &rng) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::array<std::size_t, 3> r{};
    for (std::size_t k = 0; k < 3; ++k) {
        for (;;) {
            r[k] = pool[pick(rng)];
            bool clash = false;
            for (std::size_t q = 0; q < k; ++q) clash = clash || r[q] == r[k];
            if (!clash || pool.size() < 3) break;
        }
    }
    return r;
}

DecisionVector offspring_from_pool(const Population &pop, std::size_t i,
                                   const std::vector<std::size_t> &pool, const MopDefinition &problem,
                                   const MoeadConfig &config, Rng &rng) {
    const auto r = pick_parents(pool, rng);
    const auto &x1 = pop.members[r[0]].x;
    const auto &x2 = pop.members[r[1]].x;
    const auto &x3 = pop.members[r[2]].x;
    const auto &xi = pop.members[i].x;
    const std::size_t n = problem.n();

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_gene(0, n - 1);
    const std::size_t forced = pick_gene(rng);
    DecisionVector child(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == forced || unit(rng) < config.crossover_rate) {
            child[j] = x1[j] + config.de_scale * (x2[j] - x3[j]);
        } else {
            child[j] = xi[j];
        }
    }
    polynomial_mutation(child, problem, config.effective_mutation_prob(n), config.mutation_eta, rng);
    return problem.clamp(child);
}

}  // namespace

DecisionVector de_offspring(const Population &pop, std::size_t i,
                            const std::vector<std::vector<std::size_t>> &neighborhoods,
                            const MopDefinition &problem, const MoeadConfig &config, Rng &rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const bool local = unit(rng) < config.mating_locality;
    const auto pool = local ? neighborhoods[i] : whole_population(pop.size());
    return offspring_from_pool(pop, i, pool, problem, config, rng);
}

void moead_generation(Population &pop, const std::vector<std::vector<std::size_t>> &neighborhoods,
                      const MopDefinition &problem, const MoeadConfig &config, Rng &rng) {
    const std::size_t n = pop.size();
    std::vector<std::size_t> order = whole_population(n);
    if (config.permute_order) {
        std::shuffle(order.begin(), order.end(), rng);
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i : order) {
        const bool local = unit(rng) < config.mating_locality;
        auto pool = local ? neighborhoods[i] : whole_population(n);
        DecisionVector child = offspring_from_pool(pop, i, pool, problem, config, rng);
        ObjectiveVector fc = problem.evaluate(child);
        ++pop.eval_count;
        if (!config.freeze_reference) {
            update_reference_inplace(pop.z, fc);
        }

        std::shuffle(pool.begin(), pool.end(), rng);
        std::size_t replaced = 0;
        for (std::size_t j : pool) {
            if (replaced >= config.max_replacements) break;
            const auto &lambda = pop.prefs.members[j];
            if (chebyshev(fc, lambda, pop.z) < chebyshev(pop.members[j].f, lambda, pop.z)) {
                pop.members[j].x = child;
                pop.members[j].f = fc;
                ++replaced;
            }
        }
    }
}

Population run_moead_de(const MopDefinition &problem, const PreferenceSet &prefs,
                        std::size_t generations, const MoeadConfig &config, Rng &rng,
                        std::optional<std::size_t> eval_budget, const GenerationObserver &observer) {
    if (generations < 1) {
        throw ConfigError("generations must be at least 1");
    }
    config.validate(prefs.size());
    Population pop = init_population(problem, prefs, rng);
    const auto neighborhoods = build_neighborhoods(prefs, config.neighborhood_size);
    std::size_t gen = 0;
    auto step = [&] {
        moead_generation(pop, neighborhoods, problem, config, rng);
        ++gen;
        if (observer) observer(pop, gen);
    };
    while (gen < generations) step();
    if (eval_budget) {
        while (pop.eval_count + pop.size() <= *eval_budget) step();
    }
    return pop;
}

}  // namespace lla
