#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lla/linmodel.hpp"
#include "lla/preference.hpp"
#include "lla/problems.hpp"
#include "lla/scalarize.hpp"
#include "lla/types.hpp"

namespace lla {

/// True when a is no worse in every objective and better in at least one.
bool dominates(const ObjectiveVector &a, const ObjectiveVector &b);

/// Members not strictly dominated by any other member; duplicates are kept.
std::vector<ObjectiveVector> nondominated(const std::vector<ObjectiveVector> &set);

/// Mean over reference points of the distance to the nearest set member.
double igd(const std::vector<ObjectiveVector> &set, const std::vector<ObjectiveVector> &reference);

/// Exact hypervolume for m = 2 (sweep) and m = 3 (slicing along f_3).
/// Points that do not strictly dominate `ref_point` contribute nothing.
double hypervolume(const std::vector<ObjectiveVector> &set, const ObjectiveVector &ref_point);

/// How the R-metric region width is derived from the sampling variance.
enum class DeltaMode {
    StdDev,    ///< delta = 6 sqrt(sigma2)
    Variance,  ///< delta = 6 sigma2
};

std::string to_string(DeltaMode mode);
DeltaMode parse_delta_mode(const std::string &text);
double region_width(double sigma2, DeltaMode mode);

struct RMetricParams {
    PreferenceVector anchor;
    double delta = 0.0;
    ObjectiveVector z_utopian;
    ObjectiveVector z_worst;
};

/// Achievement scalarizing value max_i (f_i - z_i) / max(w_i, 1e-6).
double achievement(const ObjectiveVector &f, const PreferenceVector &w, const ObjectiveVector &z);

/// Index of the member with the smallest achievement value (first on ties).
std::size_t pivot_index(const std::vector<ObjectiveVector> &set, const RMetricParams &params);

/// Point on the line z_utopian -> z_worst with the same worst normalized
/// deviation as `pivot`.
ObjectiveVector iso_point(const ObjectiveVector &pivot, const RMetricParams &params);

/// Preference-region transfer: nondominated filter, pivot selection, trimming
/// to the delta-box around the pivot, translation of survivors by iso - pivot.
std::vector<ObjectiveVector> r_metric_transfer(const std::vector<ObjectiveVector> &set,
                                               const RMetricParams &params);

/// Front samples inside the delta-box around the front's own pivot.
std::vector<ObjectiveVector> trim_front(const std::vector<ObjectiveVector> &front,
                                        const RMetricParams &params);

/// Empty optional marks the metric as undefined (nothing survived the transfer).
std::optional<double> r_igd(const std::vector<ObjectiveVector> &set,
                            const std::vector<ObjectiveVector> &front_samples,
                            const RMetricParams &params);
std::optional<double> r_hv(const std::vector<ObjectiveVector> &set, const RMetricParams &params,
                           const ObjectiveVector &ref_point);

/// Everything needed to score solution sets of one problem around one anchor.
struct RMetricContext {
    RMetricParams params;
    DeltaMode delta_mode = DeltaMode::StdDev;
    std::vector<ObjectiveVector> front;          // analytic samples
    std::vector<ObjectiveVector> trimmed_front;  // R-IGD reference set
    ObjectiveVector hv_ref;                      // z_worst + 0.1 (z_worst - z_utopian)

    static RMetricContext build(const MopDefinition &problem, const PreferenceVector &anchor,
                                double sigma2, DeltaMode mode, std::size_t front_points);

    std::optional<double> r_igd(const std::vector<ObjectiveVector> &set) const;
    std::optional<double> r_hv(const std::vector<ObjectiveVector> &set) const;
};

/// Default density of analytic front samples used for R-metric scoring.
std::size_t default_front_points(const MopDefinition &problem);

/// Mean over the preference set of ||predict(lambda^i) - x*(lambda^i)||^2.
double mse_to_true_ps(const LinearModel &model, const PreferenceSet &prefs,
                      const MopDefinition &problem, const ReferencePoint &z);

/// Mean over i of ||x^i - x*(lambda^i)||^2 for an explicit solution set.
double solutions_mse(const std::vector<DecisionVector> &solutions, const PreferenceSet &prefs,
                     const MopDefinition &problem, const ReferencePoint &z);

/// Per-coordinate population variance (divide by count). Needs at least 2 solutions.
std::vector<double> variable_variances(const std::vector<DecisionVector> &solutions);

/// Quality summary of one solution set from one run.
struct MetricReport {
    std::string problem;
    std::string source;  // population | predictions | baseline
    double gamma = 0.0;
    std::uint64_t seed = 0;
    std::optional<double> r_igd;
    std::optional<double> r_hv;
    std::optional<double> mse;
    double vsd = 0.0;
    std::vector<double> variances;

    friend bool operator==(const MetricReport &, const MetricReport &) = default;
};

/// Scores `solutions` (with their objective vectors) drawn for `prefs`.
MetricReport make_report(const MopDefinition &problem, const std::string &source, double gamma,
                         std::uint64_t seed, const std::vector<DecisionVector> &solutions,
                         const std::vector<ObjectiveVector> &objectives, const PreferenceSet &prefs,
                         const ReferencePoint &z, double model_vsd, const RMetricContext &ctx);

/// CSV layout: problem,source,gamma,seed,r_igd,r_hv,mse,vsd,var_1..var_n.
/// Undefined metrics are written as empty fields.
void write_report_header(std::ostream &out, std::size_t n);
void write_report_row(std::ostream &out, const MetricReport &report);
/// Reads rows written by write_report_row, skipping comment and header lines.
std::vector<MetricReport> read_reports(std::istream &in);

inline constexpr const char *kReportSchema = "# schema: lla-report v1";

}  // namespace lla
