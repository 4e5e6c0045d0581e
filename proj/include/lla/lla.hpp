#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lla/linmodel.hpp"
#include "lla/moead.hpp"
#include "lla/preference.hpp"
#include "lla/problems.hpp"
#include "lla/types.hpp"

namespace lla {

struct LlaConfig {
    std::size_t population = 100;
    std::size_t generations = 300;
    double gamma = 1e-3;
    double sigma2 = 0.02;
    double sigma2_noise = 0.05;
    /// Regression solver controls; `regression.gamma` is ignored in favour of `gamma`.
    FitOptions regression{};
    MoeadConfig moead{};
    /// Record the model's mean squared error to the analytic optima each generation.
    bool track_mse = true;

    void validate() const;
};

struct LlaGenerationRecord {
    std::size_t generation = 0;
    double mean_chebyshev = 0.0;
    std::optional<double> mse;
    double vsd = 0.0;
    std::size_t eval_count = 0;
};

struct LlaHistory {
    std::vector<LlaGenerationRecord> records;
};

struct LlaResult {
    LinearModel model;
    Population population;
    LlaHistory history;
};

/// Runs the optimize / regress / model-update loop on a given preference set.
LlaResult run_lla(const MopDefinition &problem, const PreferenceSet &prefs, const LlaConfig &config,
                  Rng &rng);

/// Samples the preference set around `anchor` from `rng`, then runs the loop.
LlaResult run_lla(const MopDefinition &problem, const PreferenceVector &anchor,
                  const LlaConfig &config, Rng &rng);

/// Draws one model candidate per sub-problem from perturbed preferences and
/// lets candidate i replace member i when it improves g(., lambda^i).
/// Adds exactly N evaluations.
void update_population_with_model(Population &pop, const LinearModel &model, double sigma2_noise,
                                  const MopDefinition &problem, Rng &rng,
                                  bool freeze_reference = false);

/// Dataset of (lambda^i, x^i) pairs from the current population.
RegressionDataset population_dataset(const Population &pop);

struct MetricEstimate {
    /// Expected Chebyshev value of the model's (clamped) outputs plus gamma * vsd.
    double value = 0.0;
    double chebyshev_mean = 0.0;
    double standard_error = 0.0;
};

/// Monte Carlo estimate over K fresh preferences sampled around `anchor`.
MetricEstimate metric_estimate(const LinearModel &model, const MopDefinition &problem,
                               const PreferenceVector &anchor, double sigma2, double gamma,
                               std::size_t samples, const ReferencePoint &z, Rng &rng);

}  // namespace lla
