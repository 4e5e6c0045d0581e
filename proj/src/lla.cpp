#include "lla/lla.hpp"

#include <cmath>
#include <limits>

#include "lla/errors.hpp"
#include "lla/metrics.hpp"

namespace lla {

void LlaConfig::validate() const {
    if (population < 3) throw ConfigError("population must be at least 3");
    if (generations < 1) throw ConfigError("generations must be at least 1");
    if (!(gamma >= 0.0)) throw ConfigError("gamma must be nonnegative");
    if (!(sigma2 > 0.0)) throw ConfigError("sigma2 must be positive");
    if (!(sigma2_noise > 0.0)) throw ConfigError("sigma2_noise must be positive");
    if (regression.max_iters < 1) throw ConfigError("regression max_iters must be at least 1");
    if (!(regression.tol > 0.0)) throw ConfigError("regression tol must be positive");
    moead.validate(population);
}

RegressionDataset population_dataset(const Population &pop) {
    RegressionDataset data;
    data.anchor = pop.prefs.anchor;
    data.prefs = pop.prefs.members;
    data.solutions.reserve(pop.size());
    for (const auto &ind : pop.members) data.solutions.push_back(ind.x);
    return data;
}

void update_population_with_model(Population &pop, const LinearModel &model, double sigma2_noise,
                                  const MopDefinition &problem, Rng &rng, bool freeze_reference) {
    const auto candidates = sample_from_model(model, pop.prefs, sigma2_noise, problem, rng);
    std::vector<ObjectiveVector> values;
    values.reserve(candidates.size());
    for (const auto &x : candidates) {
        values.push_back(problem.evaluate(x));
        ++pop.eval_count;
        if (!freeze_reference) update_reference_inplace(pop.z, values.back());
    }
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const auto &lambda = pop.prefs.members[i];
        if (chebyshev(values[i], lambda, pop.z) < chebyshev(pop.members[i].f, lambda, pop.z)) {
            pop.members[i].x = candidates[i];
            pop.members[i].f = values[i];
        }
    }
}

namespace {

// Initial model: A = 0, b = the member whose preference is nearest the anchor.
LinearModel initial_model(const Population &pop) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pop.size(); ++i) {
        double d = 0.0;
        for (std::size_t k = 0; k < pop.prefs.anchor.size(); ++k) {
            const double diff = pop.prefs.members[i][k] - pop.prefs.anchor[k];
            d += diff * diff;
        }
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return LinearModel::constant(pop.members[best].x, pop.prefs.anchor);
}

}  // namespace

LlaResult run_lla(const MopDefinition &problem, const PreferenceSet &prefs, const LlaConfig &config,
                  Rng &rng) {
    LlaConfig checked = config;
    checked.population = prefs.size();
    checked.validate();
    if (prefs.anchor.size() != problem.m()) {
        throw ConfigError("anchor preference has " + std::to_string(prefs.anchor.size()) +
                          " weights, problem has " + std::to_string(problem.m()) + " objectives");
    }

    FitOptions fit_options = config.regression;
    fit_options.gamma = config.gamma;
    const bool track_mse = config.track_mse && has_subproblem_oracle(problem);

    LlaResult result;
    result.population = init_population(problem, prefs, rng);
    Population &pop = result.population;
    result.model = initial_model(pop);
    const auto neighborhoods = build_neighborhoods(prefs, config.moead.neighborhood_size);

    result.history.records.reserve(config.generations);
    for (std::size_t gen = 1; gen <= config.generations; ++gen) {
        moead_generation(pop, neighborhoods, problem, config.moead, rng);
        result.model = fit(population_dataset(pop), fit_options).model;
        update_population_with_model(pop, result.model, config.sigma2_noise, problem, rng,
                                     config.moead.freeze_reference);

        LlaGenerationRecord rec;
        rec.generation = gen;
        rec.mean_chebyshev = pop.mean_subproblem_value();
        rec.vsd = vsd(result.model);
        rec.eval_count = pop.eval_count;
        if (track_mse) rec.mse = mse_to_true_ps(result.model, prefs, problem, pop.z);
        result.history.records.push_back(rec);
    }
    return result;
}

LlaResult run_lla(const MopDefinition &problem, const PreferenceVector &anchor,
                  const LlaConfig &config, Rng &rng) {
    const PreferenceSet prefs = sample_preference_set(anchor, config.sigma2, config.population, rng);
    return run_lla(problem, prefs, config, rng);
}

MetricEstimate metric_estimate(const LinearModel &model, const MopDefinition &problem,
                               const PreferenceVector &anchor, double sigma2, double gamma,
                               std::size_t samples, const ReferencePoint &z, Rng &rng) {
    if (samples < 1) throw ConfigError("metric_estimate needs at least one sample");
    const PreferenceSet draws = sample_preference_set(anchor, sigma2, samples, rng);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto &lambda : draws.members) {
        const auto f = problem.evaluate(problem.clamp(predict(model, lambda)));
        const double g = chebyshev(f, lambda, z);
        sum += g;
        sum_sq += g * g;
    }
    const double k = static_cast<double>(samples);
    MetricEstimate est;
    est.chebyshev_mean = sum / k;
    const double var = samples > 1 ? std::max(sum_sq / k - est.chebyshev_mean * est.chebyshev_mean, 0.0) *
                                         k / (k - 1.0)
                                   : 0.0;
    est.standard_error = std::sqrt(var / k);
    est.value = est.chebyshev_mean + gamma * vsd(model);
    return est;
}

}  // namespace lla
