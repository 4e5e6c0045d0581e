#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lla/lla.hpp"
#include "lla/metrics.hpp"
#include "lla/moead.hpp"
#include "lla/problems.hpp"

namespace lla {

/// Everything a harness command needs. Loaded from a flat `key = value` file
/// and then overridden from the command line.
struct ExperimentConfig {
    std::string problem = "ZDT1";
    std::optional<std::size_t> n;      // problem default when unset
    std::vector<double> lambda0;       // uniform anchor when empty
    LlaConfig lla{};
    std::vector<double> gammas{1e-3};
    std::size_t replicates = 10;
    std::uint64_t seed_base = 1;
    std::filesystem::path out_dir;
    bool baseline = true;
    bool compensation = true;
    std::size_t jobs = 1;
    DeltaMode delta_mode = DeltaMode::StdDev;
    std::size_t front_points = 0;      // problem default when 0
    std::vector<std::string> problems{"ZDT1", "ZDT2", "ZDT4", "ZDT6",
                                      "DTLZ1", "DTLZ2", "DTLZ3", "DTLZ4"};

    /// Applies one key; throws ConfigError naming the key on bad input.
    void set(const std::string &key, const std::string &value);
    /// Checks cross-field invariants; throws ConfigError.
    void validate() const;

    MopDefinition make_problem_definition() const;
    PreferenceVector anchor_for(const MopDefinition &problem) const;
};

/// Parses `key = value` lines; `#` starts a comment.
ExperimentConfig parse_config(std::istream &in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path &path, ExperimentConfig base = {});

/// Writes the effective configuration in the same format parse_config reads.
void write_config(std::ostream &out, const ExperimentConfig &config);

/// Result of one seeded replicate: LLA run plus, optionally, the budget-matched baseline.
struct ReplicateOutcome {
    std::string problem;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    PreferenceSet prefs;
    LlaResult lla;
    std::vector<DecisionVector> predictions;
    std::vector<ObjectiveVector> prediction_objectives;
    std::optional<Population> baseline;
    /// Baseline population MSE at the LLA-equivalent evaluation budget of each LLA generation.
    std::vector<std::optional<double>> baseline_mse_curve;
    std::vector<MetricReport> reports;
};

struct ReplicateOptions {
    bool baseline = true;
    bool compensation = true;
    bool track_curves = false;
};

ReplicateOutcome run_replicate(const MopDefinition &problem, const PreferenceVector &anchor,
                               const ExperimentConfig &config, double gamma, std::uint64_t seed,
                               const RMetricContext &ctx, const ReplicateOptions &options);

/// Runs fn(0..count-1) on up to `jobs` threads. fn must only touch its own slot.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)> &fn);

/// Summary returned by the commands for callers that want numbers without re-reading files.
struct SweepRow {
    double gamma = 0.0;
    std::string source;
    double r_igd_mean = 0.0, r_igd_std = 0.0;
    double r_hv_mean = 0.0, r_hv_std = 0.0;
    double vsd_mean = 0.0;
    std::size_t defined = 0;  // replicates with a defined R-metric
};

struct Table1Row {
    std::string problem;
    // baseline, LLA population, LLA predictions
    double r_igd[3] = {0.0, 0.0, 0.0};
    double r_hv[3] = {0.0, 0.0, 0.0};
    ObjectiveVector hv_ref;
};

struct ErrorCurveRow {
    std::size_t generation = 0;
    std::size_t lla_evals = 0;
    double prediction_mse = 0.0;
    std::size_t baseline_generation = 0;
    double baseline_mse = 0.0;
};

struct RunSummary {
    std::vector<ReplicateOutcome> outcomes;
};

RunSummary cmd_run(const ExperimentConfig &config);
std::vector<SweepRow> cmd_sweep(const ExperimentConfig &config);
std::vector<Table1Row> cmd_table1(const ExperimentConfig &config);
std::vector<ErrorCurveRow> cmd_error_curve(const ExperimentConfig &config);
/// Recomputes MetricReport rows from the model, preference and population
/// files that cmd_run wrote into `config.out_dir`.
std::vector<MetricReport> cmd_metrics(const ExperimentConfig &config);

/// Output root used when no --out is given: $LLA_OUTPUT_ROOT or "lla_out".
std::filesystem::path default_output_root();

/// Numeric table with optional leading comment lines (schema tag).
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_numeric_csv(std::istream &in);
void write_numeric_csv(std::ostream &out, const CsvTable &table);

}  // namespace lla
