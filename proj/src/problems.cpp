#include "lla/problems.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lla/errors.hpp"

namespace lla {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDtlz4Alpha = 100.0;

bool is_zdt_like(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::ZDT1:
    case ProblemKind::ZDT2:
    case ProblemKind::ZDT4:
    case ProblemKind::ZDT6:
    case ProblemKind::MOZDT1:
        return true;
    default:
        return false;
    }
}

double zdt6_f1(double x1) {
    return 1.0 - std::exp(-4.0 * x1) * std::pow(std::sin(6.0 * kPi * x1), 6);
}

// Argmin of zdt6_f1 on its first lobe, where the map is unimodal.
double zdt6_argmin_x1() {
    double lo = 1.0 / 24.0;
    double hi = 1.0 / 8.0;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double a = hi - ratio * (hi - lo);
        const double b = lo + ratio * (hi - lo);
        if (zdt6_f1(a) < zdt6_f1(b)) {
            hi = b;
        } else {
            lo = a;
        }
    }
    return 0.5 * (lo + hi);
}

double dtlz_g_multimodal(std::span<const double> tail) {
    double s = 0.0;
    for (double x : tail) {
        const double d = x - 0.5;
        s += d * d - std::cos(20.0 * kPi * d);
    }
    return 100.0 * (static_cast<double>(tail.size()) + s);
}

double dtlz_g_sphere(std::span<const double> tail) {
    double s = 0.0;
    for (double x : tail) {
        s += (x - 0.5) * (x - 0.5);
    }
    return s;
}

ObjectiveVector dtlz_sphere_objectives(double x1, double x2, double g) {
    const double c1 = std::cos(x1 * kPi / 2.0);
    return {(1.0 + g) * c1 * std::cos(x2 * kPi / 2.0), (1.0 + g) * c1 * std::sin(x2 * kPi / 2.0),
            (1.0 + g) * std::sin(x1 * kPi / 2.0)};
}

// Pareto front f2 as a function of f1 for the two-objective family.
double front_f2(ProblemKind kind, double f1) {
    switch (kind) {
    case ProblemKind::ZDT2:
    case ProblemKind::ZDT6:
        return 1.0 - f1 * f1;
    default:
        return 1.0 - std::sqrt(std::max(f1, 0.0));
    }
}

double front_f1_min(ProblemKind kind) {
    return kind == ProblemKind::ZDT6 ? zdt6_min_f1() : 0.0;
}

// Root of a monotone function on [lo, hi] given opposite-signed endpoints.
template <typename F>
double bisect(F &&fn, double lo, double hi, bool increasing) {
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double v = fn(mid);
        if ((v < 0.0) == increasing) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Chebyshev-optimal f1 on a two-objective front.
double optimal_front_f1(ProblemKind kind, const PreferenceVector &lambda, const ReferencePoint &z) {
    const double fmin = front_f1_min(kind);
    const double fmax = 1.0;
    auto pf = [kind](double f1) { return front_f2(kind, f1); };

    // Inside [lo, hi] both f1 >= z1 and f2 >= z2, so the balance residual is increasing.
    const double lo = std::clamp(z[0], fmin, fmax);
    double hi = fmax;
    if (z[1] >= pf(fmin)) {
        hi = fmin;
    } else if (z[1] > pf(fmax)) {
        hi = bisect([&](double f1) { return pf(f1) - z[1]; }, fmin, fmax, false);
    }
    auto phi = [&](double f1) {
        return std::max(lambda[0] * std::abs(f1 - z[0]), lambda[1] * std::abs(pf(f1) - z[1]));
    };
    if (lo > hi) {
        // z lies above the front; fall back to golden-section on the unimodal max.
        double a = fmin;
        double b = fmax;
        const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int it = 0; it < 300 && b - a > 1e-15; ++it) {
            const double c = b - ratio * (b - a);
            const double d = a + ratio * (b - a);
            if (phi(c) <= phi(d)) {
                b = d;
            } else {
                a = c;
            }
        }
        return 0.5 * (a + b);
    }
    auto residual = [&](double f1) {
        return lambda[0] * (f1 - z[0]) - lambda[1] * (pf(f1) - z[1]);
    };
    if (residual(lo) >= 0.0) {
        return lo;
    }
    if (residual(hi) <= 0.0) {
        return hi;
    }
    return bisect(residual, lo, hi, true);
}

DecisionVector lift_two_objective(const MopDefinition &problem, double f1) {
    const std::size_t n = problem.n();
    switch (problem.kind()) {
    case ProblemKind::MOZDT1:
        return mozdt1_pareto_point(n, f1);
    case ProblemKind::ZDT6: {
        // First-lobe branch: f1 decreases from 1 at x1 = 0 to its minimum.
        DecisionVector x(n, 0.0);
        const double xmin = zdt6_argmin_x1();
        if (f1 >= 1.0) {
            x[0] = 0.0;
        } else if (f1 <= zdt6_min_f1()) {
            x[0] = xmin;
        } else {
            x[0] = bisect([f1](double t) { return zdt6_f1(t) - f1; }, 0.0, xmin, false);
        }
        return x;
    }
    default: {
        DecisionVector x(n, 0.0);
        x[0] = f1;
        return x;
    }
    }
}

DecisionVector dtlz_optimum(const MopDefinition &problem, const PreferenceVector &lambda,
                            const ReferencePoint &z) {
    const bool plane = problem.kind() == ProblemKind::DTLZ1;
    std::array<double, 3> w{};
    for (std::size_t i = 0; i < 3; ++i) {
        w[i] = 1.0 / std::max(lambda[i], 1e-12);
    }
    auto point = [&](double t) {
        std::array<double, 3> p{};
        for (std::size_t i = 0; i < 3; ++i) {
            p[i] = z[i] + t * w[i];
        }
        return p;
    };
    auto membership = [&](double t) {
        const auto p = point(t);
        double s = 0.0;
        for (double v : p) {
            s += plane ? v : std::max(v, 0.0) * std::max(v, 0.0);
        }
        return plane ? s - 0.5 : s - 1.0;
    };
    if (membership(0.0) >= 0.0) {
        throw NumericError("true_subproblem_optimum: reference point is not below the Pareto front");
    }
    double hi = 1e-12;
    while (membership(hi) <= 0.0) {
        hi *= 2.0;
        if (!std::isfinite(hi)) {
            throw NumericError("true_subproblem_optimum: balance search diverged");
        }
    }
    const double t = bisect(membership, 0.0, hi, true);
    auto p = point(t);
    double s = 0.0;
    for (double &v : p) {
        v = std::max(v, 0.0);
        s += plane ? v : v * v;
    }
    for (double &v : p) {
        v = plane ? v * 0.5 / s : v / std::sqrt(s);
    }

    DecisionVector x(problem.n(), 0.5);
    if (plane) {
        x[0] = std::clamp(1.0 - 2.0 * p[2], 0.0, 1.0);
        const double denom = p[0] + p[1];
        x[1] = denom > 0.0 ? std::clamp(p[0] / denom, 0.0, 1.0) : 0.5;
    } else {
        x[0] = std::clamp(std::atan2(p[2], std::hypot(p[0], p[1])) * 2.0 / kPi, 0.0, 1.0);
        x[1] = std::clamp(std::atan2(p[1], p[0]) * 2.0 / kPi, 0.0, 1.0);
    }
    return x;
}

}  // namespace

double zdt6_min_f1() {
    static const double value = zdt6_f1(zdt6_argmin_x1());
    return value;
}

MopDefinition::MopDefinition(ProblemKind kind, std::size_t n)
    : kind_(kind), name_(problem_name(kind)), m_(is_zdt_like(kind) ? 2 : 3), lower_(n, 0.0),
      upper_(n, 1.0) {
    const std::size_t min_n = kind == ProblemKind::MOZDT1 ? 4 : m_ + 1;
    if (n < min_n) {
        throw ConfigError(name_ + " requires n >= " + std::to_string(min_n) + ", got " +
                          std::to_string(n));
    }
    if (kind == ProblemKind::ZDT4) {
        for (std::size_t i = 1; i < n; ++i) {
            lower_[i] = -5.0;
            upper_[i] = 5.0;
        }
    }
}

ObjectiveVector MopDefinition::evaluate(std::span<const double> x) const {
    const std::size_t n = this->n();
    if (x.size() != n) {
        throw std::invalid_argument("evaluate: decision vector dimension mismatch");
    }
    const auto tail = x.subspan(1);
    const double nm1 = static_cast<double>(n - 1);
    switch (kind_) {
    case ProblemKind::ZDT1: {
        double s = 0.0;
        for (double v : tail) s += v;
        const double g = 1.0 + 9.0 * s / nm1;
        return {x[0], g * (1.0 - std::sqrt(x[0] / g))};
    }
    case ProblemKind::ZDT2: {
        double s = 0.0;
        for (double v : tail) s += v;
        const double g = 1.0 + 9.0 * s / nm1;
        const double r = x[0] / g;
        return {x[0], g * (1.0 - r * r)};
    }
    case ProblemKind::ZDT4: {
        double s = 0.0;
        for (double v : tail) s += v * v - 10.0 * std::cos(4.0 * kPi * v);
        const double g = 1.0 + 10.0 * nm1 + s;
        return {x[0], g * (1.0 - std::sqrt(x[0] / g))};
    }
    case ProblemKind::ZDT6: {
        const double f1 = zdt6_f1(x[0]);
        double s = 0.0;
        for (double v : tail) s += v;
        const double g = 1.0 + 9.0 * std::pow(s / nm1, 0.25);
        const double r = f1 / g;
        return {f1, g * (1.0 - r * r)};
    }
    case ProblemKind::MOZDT1: {
        const double a = (1.0 - 2.0 * x[0]) * (1.0 - 2.0 * x[0]) - x[1];
        const double b = x[2] + x[1] - 1.0;
        const double l = a * a + b * b;
        double s = 0.0;
        for (std::size_t i = 3; i < n; ++i) s += std::abs(x[i] - x[0]);
        const double g = 1.0 + 9.0 / static_cast<double>(n - 3) * s + l;
        return {x[0], g * (1.0 - std::sqrt(x[0] / g))};
    }
    case ProblemKind::DTLZ1: {
        const double g = dtlz_g_multimodal(x.subspan(2));
        const double h = 0.5 * (1.0 + g);
        return {h * x[0] * x[1], h * x[0] * (1.0 - x[1]), h * (1.0 - x[0])};
    }
    case ProblemKind::DTLZ2:
        return dtlz_sphere_objectives(x[0], x[1], dtlz_g_sphere(x.subspan(2)));
    case ProblemKind::DTLZ3:
        return dtlz_sphere_objectives(x[0], x[1], dtlz_g_multimodal(x.subspan(2)));
    case ProblemKind::DTLZ4:
        return dtlz_sphere_objectives(std::pow(x[0], kDtlz4Alpha), std::pow(x[1], kDtlz4Alpha),
                                      dtlz_g_sphere(x.subspan(2)));
    }
    throw std::logic_error("evaluate: unknown problem kind");
}

DecisionVector MopDefinition::clamp(std::span<const double> x) const {
    DecisionVector out(x.begin(), x.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::clamp(out[i], lower_[i], upper_[i]);
    }
    return out;
}

bool MopDefinition::in_bounds(std::span<const double> x) const {
    if (x.size() != n()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
    }
    return true;
}

ProblemKind parse_problem_kind(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    static constexpr std::pair<const char *, ProblemKind> table[] = {
        {"ZDT1", ProblemKind::ZDT1},   {"ZDT2", ProblemKind::ZDT2},   {"ZDT4", ProblemKind::ZDT4},
        {"ZDT6", ProblemKind::ZDT6},   {"DTLZ1", ProblemKind::DTLZ1}, {"DTLZ2", ProblemKind::DTLZ2},
        {"DTLZ3", ProblemKind::DTLZ3}, {"DTLZ4", ProblemKind::DTLZ4}, {"MOZDT1", ProblemKind::MOZDT1},
    };
    for (const auto &[label, kind] : table) {
        if (upper == label) return kind;
    }
    throw ConfigError("unknown problem '" + std::string(name) + "'");
}

std::string problem_name(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::ZDT1: return "ZDT1";
    case ProblemKind::ZDT2: return "ZDT2";
    case ProblemKind::ZDT4: return "ZDT4";
    case ProblemKind::ZDT6: return "ZDT6";
    case ProblemKind::DTLZ1: return "DTLZ1";
    case ProblemKind::DTLZ2: return "DTLZ2";
    case ProblemKind::DTLZ3: return "DTLZ3";
    case ProblemKind::DTLZ4: return "DTLZ4";
    case ProblemKind::MOZDT1: return "MOZDT1";
    }
    return "unknown";
}

std::size_t default_dimension(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::DTLZ1: return 7;
    case ProblemKind::DTLZ2:
    case ProblemKind::DTLZ3:
    case ProblemKind::DTLZ4: return 12;
    case ProblemKind::MOZDT1: return 10;
    default: return 30;
    }
}

MopDefinition make_problem(std::string_view name, std::size_t n) {
    return MopDefinition(parse_problem_kind(name), n);
}

MopDefinition make_problem(std::string_view name) {
    const auto kind = parse_problem_kind(name);
    return MopDefinition(kind, default_dimension(kind));
}

MopDefinition mozdt1(std::size_t n) { return MopDefinition(ProblemKind::MOZDT1, n); }

DecisionVector mozdt1_pareto_point(std::size_t n, double x1) {
    DecisionVector x(n, x1);
    const double c = (1.0 - 2.0 * x1) * (1.0 - 2.0 * x1);
    x[1] = c;
    x[2] = 1.0 - c;
    return x;
}

std::vector<ObjectiveVector> true_front_samples(const MopDefinition &problem, std::size_t k) {
    if (k < 2) {
        throw std::invalid_argument("true_front_samples: k must be at least 2");
    }
    std::vector<ObjectiveVector> out;
    if (problem.m() == 2) {
        const double fmin = front_f1_min(problem.kind());
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double f1 = fmin + (1.0 - fmin) * static_cast<double>(i) / static_cast<double>(k - 1);
            out.push_back({f1, front_f2(problem.kind(), f1)});
        }
        return out;
    }
    std::size_t h = 1;
    while ((h + 1) * (h + 2) / 2 < k) ++h;
    const bool plane = problem.kind() == ProblemKind::DTLZ1;
    for (std::size_t i = 0; i <= h; ++i) {
        for (std::size_t j = 0; i + j <= h; ++j) {
            ObjectiveVector p{static_cast<double>(i) / static_cast<double>(h),
                              static_cast<double>(j) / static_cast<double>(h),
                              static_cast<double>(h - i - j) / static_cast<double>(h)};
            if (plane) {
                for (double &v : p) v *= 0.5;
            } else {
                const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
                for (double &v : p) v /= norm;
            }
            out.push_back(std::move(p));
        }
    }
    return out;
}

bool has_subproblem_oracle(const MopDefinition &problem) noexcept {
    return problem.kind() != ProblemKind::DTLZ4;
}

DecisionVector true_subproblem_optimum(const MopDefinition &problem, const PreferenceVector &lambda,
                                       const ReferencePoint &z) {
    if (!has_subproblem_oracle(problem)) {
        throw UnsupportedProblemError("no analytic Pareto set oracle for " + problem.name());
    }
    if (lambda.size() != problem.m() || z.size() != problem.m()) {
        throw std::invalid_argument("true_subproblem_optimum: dimension mismatch");
    }
    if (problem.m() == 2) {
        return lift_two_objective(problem, optimal_front_f1(problem.kind(), lambda, z));
    }
    return dtlz_optimum(problem, lambda, z);
}

}  // namespace lla
