#include "lla/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lla/errors.hpp"
#include "lla/textio.hpp"

namespace lla {

bool dominates(const ObjectiveVector &a, const ObjectiveVector &b) {
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly = true;
    }
    return strictly;
}

std::vector<ObjectiveVector> nondominated(const std::vector<ObjectiveVector> &set) {
    std::vector<ObjectiveVector> out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < set.size() && !dominated; ++j) {
            dominated = j != i && dominates(set[j], set[i]);
        }
        if (!dominated) out.push_back(set[i]);
    }
    return out;
}

double igd(const std::vector<ObjectiveVector> &set, const std::vector<ObjectiveVector> &reference) {
    if (set.empty() || reference.empty()) {
        throw std::invalid_argument("igd: empty input");
    }
    double total = 0.0;
    for (const auto &r : reference) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto &s : set) {
            double d = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) d += (s[i] - r[i]) * (s[i] - r[i]);
            best = std::min(best, d);
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(reference.size());
}

namespace {

// Points strictly better than the reference in every objective.
std::vector<ObjectiveVector> inside(const std::vector<ObjectiveVector> &set, const ObjectiveVector &ref) {
    std::vector<ObjectiveVector> out;
    for (const auto &p : set) {
        bool ok = true;
        for (std::size_t i = 0; i < ref.size(); ++i) ok = ok && p[i] < ref[i];
        if (ok) out.push_back(p);
    }
    return out;
}

double area_2d(std::vector<std::pair<double, double>> pts, double ref1, double ref2) {
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double floor2 = ref2;
    for (const auto &[f1, f2] : pts) {
        if (f2 < floor2) {
            area += (ref1 - f1) * (floor2 - f2);
            floor2 = f2;
        }
    }
    return area;
}

}  // namespace

double hypervolume(const std::vector<ObjectiveVector> &set, const ObjectiveVector &ref_point) {
    const std::size_t m = ref_point.size();
    if (m != 2 && m != 3) {
        throw std::invalid_argument("hypervolume: only m = 2 or 3 supported");
    }
    auto pts = inside(set, ref_point);
    if (pts.empty()) return 0.0;
    if (m == 2) {
        std::vector<std::pair<double, double>> p2;
        p2.reserve(pts.size());
        for (const auto &p : pts) p2.emplace_back(p[0], p[1]);
        return area_2d(std::move(p2), ref_point[0], ref_point[1]);
    }
    std::sort(pts.begin(), pts.end(), [](const auto &a, const auto &b) { return a[2] < b[2]; });
    double volume = 0.0;
    std::vector<std::pair<double, double>> slice;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        slice.emplace_back(pts[i][0], pts[i][1]);
        const double top = i + 1 < pts.size() ? pts[i + 1][2] : ref_point[2];
        const double thickness = top - pts[i][2];
        if (thickness > 0.0) {
            volume += thickness * area_2d(slice, ref_point[0], ref_point[1]);
        }
    }
    return volume;
}

std::string to_string(DeltaMode mode) {
    return mode == DeltaMode::StdDev ? "stddev" : "variance";
}

DeltaMode parse_delta_mode(const std::string &text) {
    if (text == "stddev" || text == "sigma") return DeltaMode::StdDev;
    if (text == "variance" || text == "sigma2") return DeltaMode::Variance;
    throw ConfigError("delta_mode must be 'stddev' or 'variance', got '" + text + "'");
}

double region_width(double sigma2, DeltaMode mode) {
    return mode == DeltaMode::StdDev ? 6.0 * std::sqrt(sigma2) : 6.0 * sigma2;
}

double achievement(const ObjectiveVector &f, const PreferenceVector &w, const ObjectiveVector &z) {
    double value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) {
        value = std::max(value, (f[i] - z[i]) / std::max(w[i], 1e-6));
    }
    return value;
}

std::size_t pivot_index(const std::vector<ObjectiveVector> &set, const RMetricParams &params) {
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.size(); ++i) {
        const double v = achievement(set[i], params.anchor, params.z_utopian);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    return best;
}

ObjectiveVector iso_point(const ObjectiveVector &pivot, const RMetricParams &params) {
    const std::size_t m = pivot.size();
    double t = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const double span = std::max(params.z_worst[i] - params.z_utopian[i], 1e-12);
        t = std::max(t, (pivot[i] - params.z_utopian[i]) / span);
    }
    ObjectiveVector out(m);
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = params.z_utopian[i] + t * (params.z_worst[i] - params.z_utopian[i]);
    }
    return out;
}

namespace {

std::vector<ObjectiveVector> within_box(const std::vector<ObjectiveVector> &set,
                                        const ObjectiveVector &center, double delta) {
    std::vector<ObjectiveVector> out;
    for (const auto &p : set) {
        bool ok = true;
        for (std::size_t i = 0; i < p.size(); ++i) ok = ok && std::abs(p[i] - center[i]) <= delta / 2.0;
        if (ok) out.push_back(p);
    }
    return out;
}

}  // namespace

std::vector<ObjectiveVector> r_metric_transfer(const std::vector<ObjectiveVector> &set,
                                               const RMetricParams &params) {
    if (!(params.delta > 0.0)) {
        throw std::invalid_argument("r_metric_transfer: delta must be positive");
    }
    if (set.empty()) return {};
    const auto front = nondominated(set);
    const ObjectiveVector pivot = front[pivot_index(front, params)];
    auto survivors = within_box(front, pivot, params.delta);
    const ObjectiveVector iso = iso_point(pivot, params);
    for (auto &p : survivors) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += iso[i] - pivot[i];
    }
    return survivors;
}

std::vector<ObjectiveVector> trim_front(const std::vector<ObjectiveVector> &front,
                                        const RMetricParams &params) {
    if (front.empty()) return {};
    return within_box(front, front[pivot_index(front, params)], params.delta);
}

std::optional<double> r_igd(const std::vector<ObjectiveVector> &set,
                            const std::vector<ObjectiveVector> &front_samples,
                            const RMetricParams &params) {
    const auto transferred = r_metric_transfer(set, params);
    const auto reference = trim_front(front_samples, params);
    if (transferred.empty() || reference.empty()) return std::nullopt;
    return igd(transferred, reference);
}

std::optional<double> r_hv(const std::vector<ObjectiveVector> &set, const RMetricParams &params,
                           const ObjectiveVector &ref_point) {
    const auto transferred = r_metric_transfer(set, params);
    if (transferred.empty()) return std::nullopt;
    return hypervolume(transferred, ref_point);
}

std::size_t default_front_points(const MopDefinition &problem) {
    return problem.m() == 2 ? 1000 : 5050;
}

RMetricContext RMetricContext::build(const MopDefinition &problem, const PreferenceVector &anchor,
                                     double sigma2, DeltaMode mode, std::size_t front_points) {
    if (anchor.size() != problem.m()) {
        throw ConfigError("anchor dimension does not match the problem's objective count");
    }
    RMetricContext ctx;
    ctx.delta_mode = mode;
    ctx.front = true_front_samples(problem, front_points);
    const std::size_t m = problem.m();
    ctx.params.anchor = anchor;
    ctx.params.delta = region_width(sigma2, mode);
    ctx.params.z_utopian.assign(m, std::numeric_limits<double>::infinity());
    ctx.params.z_worst.assign(m, -std::numeric_limits<double>::infinity());
    for (const auto &p : ctx.front) {
        for (std::size_t i = 0; i < m; ++i) {
            ctx.params.z_utopian[i] = std::min(ctx.params.z_utopian[i], p[i]);
            ctx.params.z_worst[i] = std::max(ctx.params.z_worst[i], p[i]);
        }
    }
    ctx.hv_ref.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        ctx.hv_ref[i] = ctx.params.z_worst[i] + 0.1 * (ctx.params.z_worst[i] - ctx.params.z_utopian[i]);
    }
    ctx.trimmed_front = trim_front(ctx.front, ctx.params);
    return ctx;
}

std::optional<double> RMetricContext::r_igd(const std::vector<ObjectiveVector> &set) const {
    const auto transferred = r_metric_transfer(set, params);
    if (transferred.empty() || trimmed_front.empty()) return std::nullopt;
    return igd(transferred, trimmed_front);
}

std::optional<double> RMetricContext::r_hv(const std::vector<ObjectiveVector> &set) const {
    return lla::r_hv(set, params, hv_ref);
}

double solutions_mse(const std::vector<DecisionVector> &solutions, const PreferenceSet &prefs,
                     const MopDefinition &problem, const ReferencePoint &z) {
    if (solutions.size() != prefs.size() || solutions.empty()) {
        throw std::invalid_argument("solutions_mse: one solution per preference required");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        const auto target = true_subproblem_optimum(problem, prefs.members[i], z);
        for (std::size_t j = 0; j < target.size(); ++j) {
            const double d = solutions[i][j] - target[j];
            total += d * d;
        }
    }
    return total / static_cast<double>(solutions.size());
}

double mse_to_true_ps(const LinearModel &model, const PreferenceSet &prefs,
                      const MopDefinition &problem, const ReferencePoint &z) {
    std::vector<DecisionVector> preds;
    preds.reserve(prefs.size());
    for (const auto &lambda : prefs.members) preds.push_back(predict(model, lambda));
    return solutions_mse(preds, prefs, problem, z);
}

std::vector<double> variable_variances(const std::vector<DecisionVector> &solutions) {
    if (solutions.size() < 2) {
        throw std::invalid_argument("variable_variances: need at least 2 solutions");
    }
    const std::size_t n = solutions.front().size();
    const double count = static_cast<double>(solutions.size());
    std::vector<double> mean(n, 0.0), var(n, 0.0);
    for (const auto &x : solutions) {
        for (std::size_t j = 0; j < n; ++j) mean[j] += x[j];
    }
    for (double &v : mean) v /= count;
    for (const auto &x : solutions) {
        for (std::size_t j = 0; j < n; ++j) var[j] += (x[j] - mean[j]) * (x[j] - mean[j]);
    }
    for (double &v : var) v /= count;
    return var;
}

MetricReport make_report(const MopDefinition &problem, const std::string &source, double gamma,
                         std::uint64_t seed, const std::vector<DecisionVector> &solutions,
                         const std::vector<ObjectiveVector> &objectives, const PreferenceSet &prefs,
                         const ReferencePoint &z, double model_vsd, const RMetricContext &ctx) {
    MetricReport report;
    report.problem = problem.name();
    report.source = source;
    report.gamma = gamma;
    report.seed = seed;
    report.r_igd = ctx.r_igd(objectives);
    report.r_hv = ctx.r_hv(objectives);
    if (has_subproblem_oracle(problem)) {
        report.mse = solutions_mse(solutions, prefs, problem, z);
    }
    report.vsd = model_vsd;
    report.variances = variable_variances(solutions);
    return report;
}

namespace {

std::string optional_field(const std::optional<double> &v) {
    return v ? format_double(*v) : std::string{};
}

std::optional<double> parse_optional(const std::string &field) {
    if (field.empty()) return std::nullopt;
    return parse_double(field);
}

}  // namespace

void write_report_header(std::ostream &out, std::size_t n) {
    out << "problem,source,gamma,seed,r_igd,r_hv,mse,vsd";
    for (std::size_t j = 1; j <= n; ++j) out << ",var_" << j;
    out << '\n';
}

void write_report_row(std::ostream &out, const MetricReport &r) {
    out << r.problem << ',' << r.source << ',' << format_double(r.gamma) << ',' << r.seed << ','
        << optional_field(r.r_igd) << ',' << optional_field(r.r_hv) << ',' << optional_field(r.mse)
        << ',' << format_double(r.vsd);
    for (double v : r.variances) out << ',' << format_double(v);
    out << '\n';
}

std::vector<MetricReport> read_reports(std::istream &in) {
    std::vector<MetricReport> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("problem,", 0) == 0) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ss(line);
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        if (fields.size() < 8) throw IoError("report row has too few columns: " + line);
        MetricReport r;
        r.problem = fields[0];
        r.source = fields[1];
        r.gamma = parse_double(fields[2]);
        r.seed = std::stoull(fields[3]);
        r.r_igd = parse_optional(fields[4]);
        r.r_hv = parse_optional(fields[5]);
        r.mse = parse_optional(fields[6]);
        r.vsd = parse_double(fields[7]);
        for (std::size_t k = 8; k < fields.size(); ++k) r.variances.push_back(parse_double(fields[k]));
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace lla
