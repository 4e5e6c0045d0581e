#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lla/preference.hpp"
#include "lla/scalarize.hpp"
#include "lla/types.hpp"

namespace lla {

enum class ProblemKind { ZDT1, ZDT2, ZDT4, ZDT6, DTLZ1, DTLZ2, DTLZ3, DTLZ4, MOZDT1 };

/// A box-constrained continuous multiobjective problem.
///
/// `evaluate` is deterministic and documented for in-bounds inputs only;
/// callers clamp first.
class MopDefinition {
public:
    MopDefinition(ProblemKind kind, std::size_t n);

    ProblemKind kind() const noexcept { return kind_; }
    const std::string &name() const noexcept { return name_; }
    std::size_t n() const noexcept { return lower_.size(); }
    std::size_t m() const noexcept { return m_; }
    const std::vector<double> &lower() const noexcept { return lower_; }
    const std::vector<double> &upper() const noexcept { return upper_; }

    ObjectiveVector evaluate(std::span<const double> x) const;

    DecisionVector clamp(std::span<const double> x) const;
    bool in_bounds(std::span<const double> x) const;

private:
    ProblemKind kind_;
    std::string name_;
    std::size_t m_;
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// Case-insensitive lookup; throws ConfigError on unknown names.
ProblemKind parse_problem_kind(std::string_view name);
std::string problem_name(ProblemKind kind);

/// Default decision dimension: ZDT 30, DTLZ1 7, DTLZ2-4 12, MOZDT1 10.
std::size_t default_dimension(ProblemKind kind);

/// Throws ConfigError for unknown names or n < m+1 (n < 4 for MOZDT1).
MopDefinition make_problem(std::string_view name, std::size_t n);
MopDefinition make_problem(std::string_view name);

/// ZDT1 front with the tail term replaced by sum |x_i - x_1| plus a curved
/// coupling of x_2, x_3 to x_1, so that no variable is shared on the Pareto set.
MopDefinition mozdt1(std::size_t n);

/// Decision vector on the MOZDT1 Pareto set for a given x_1.
DecisionVector mozdt1_pareto_point(std::size_t n, double x1);

/// Points along the analytic Pareto front. For m = 2 exactly k points uniform
/// in f_1; for m = 3 the smallest simplex lattice with at least k points,
/// mapped onto the plane (DTLZ1) or the unit sphere (DTLZ2-4).
std::vector<ObjectiveVector> true_front_samples(const MopDefinition &problem, std::size_t k);

/// Whether true_subproblem_optimum is available.
bool has_subproblem_oracle(const MopDefinition &problem) noexcept;

/// Decision vector minimizing the Chebyshev aggregation for (lambda, z) over
/// the analytic Pareto set. Throws UnsupportedProblemError for DTLZ4.
DecisionVector true_subproblem_optimum(const MopDefinition &problem, const PreferenceVector &lambda,
                                       const ReferencePoint &z);

/// Smallest attainable f_1 on the ZDT6 front (first lobe of its x_1 map).
double zdt6_min_f1();

}  // namespace lla
