#include "lla/linmodel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lla/errors.hpp"
#include "lla/textio.hpp"

namespace lla {

LinearModel::LinearModel(std::vector<double> a, std::vector<double> b, PreferenceVector anchor)
    : a_(std::move(a)), b_(std::move(b)), anchor_(std::move(anchor)) {
    if (anchor_.size() < 2 || a_.size() != b_.size() * (anchor_.size() - 1)) {
        throw std::invalid_argument("LinearModel: inconsistent dimensions");
    }
    for (double v : a_) {
        if (!std::isfinite(v)) throw NumericError("LinearModel: non-finite entry in A");
    }
    for (double v : b_) {
        if (!std::isfinite(v)) throw NumericError("LinearModel: non-finite entry in b");
    }
}

LinearModel LinearModel::constant(std::vector<double> b, PreferenceVector anchor) {
    std::vector<double> a(b.size() * (anchor.size() - 1), 0.0);
    return LinearModel(std::move(a), std::move(b), std::move(anchor));
}

DecisionVector predict(const LinearModel &model, const PreferenceVector &lambda) {
    if (lambda.size() != model.anchor().size()) {
        throw std::invalid_argument("predict: preference dimension mismatch");
    }
    const std::size_t k = model.cols();
    DecisionVector x(model.b());
    for (std::size_t j = 0; j < x.size(); ++j) {
        for (std::size_t c = 0; c < k; ++c) {
            x[j] += model.a(j, c) * (lambda[c] - model.anchor()[c]);
        }
    }
    return x;
}

std::vector<double> row_norms(const LinearModel &model) {
    std::vector<double> out(model.n());
    for (std::size_t j = 0; j < model.n(); ++j) {
        double s = 0.0;
        for (double v : model.row(j)) s += v * v;
        out[j] = std::sqrt(s);
    }
    return out;
}

std::vector<bool> shared_rows(const LinearModel &model, double threshold) {
    const auto norms = row_norms(model);
    std::vector<bool> out(norms.size());
    for (std::size_t j = 0; j < norms.size(); ++j) out[j] = norms[j] <= threshold;
    return out;
}

double vsd(const LinearModel &model) {
    double s = 0.0;
    for (double r : row_norms(model)) s += r;
    return s;
}

namespace {

struct CenteredDesign {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> dc;    // rows x cols, centered offsets
    std::vector<double> dbar;  // column means of the offsets
    std::vector<double> gram;  // cols x cols, Dc' Dc
    bool degenerate = false;
};

CenteredDesign center_design(const RegressionDataset &data) {
    CenteredDesign d;
    d.rows = data.prefs.size();
    d.cols = data.anchor.size() - 1;
    std::vector<double> raw(d.rows * d.cols);
    for (std::size_t i = 0; i < d.rows; ++i) {
        if (data.prefs[i].size() != data.anchor.size()) {
            throw std::invalid_argument("fit: preference dimension mismatch");
        }
        for (std::size_t c = 0; c < d.cols; ++c) {
            raw[i * d.cols + c] = data.prefs[i][c] - data.anchor[c];
        }
    }
    d.degenerate = true;
    for (std::size_t i = 1; i < d.rows && d.degenerate; ++i) {
        for (std::size_t c = 0; c < d.cols; ++c) {
            if (raw[i * d.cols + c] != raw[c]) {
                d.degenerate = false;
                break;
            }
        }
    }
    d.dbar.assign(d.cols, 0.0);
    for (std::size_t i = 0; i < d.rows; ++i) {
        for (std::size_t c = 0; c < d.cols; ++c) d.dbar[c] += raw[i * d.cols + c];
    }
    for (double &v : d.dbar) v /= static_cast<double>(d.rows);
    d.dc.resize(raw.size());
    for (std::size_t i = 0; i < d.rows; ++i) {
        for (std::size_t c = 0; c < d.cols; ++c) {
            d.dc[i * d.cols + c] = raw[i * d.cols + c] - d.dbar[c];
        }
    }
    d.gram.assign(d.cols * d.cols, 0.0);
    for (std::size_t i = 0; i < d.rows; ++i) {
        for (std::size_t p = 0; p < d.cols; ++p) {
            for (std::size_t q = 0; q < d.cols; ++q) {
                d.gram[p * d.cols + q] += d.dc[i * d.cols + p] * d.dc[i * d.cols + q];
            }
        }
    }
    return d;
}

double largest_eigenvalue(const std::vector<double> &gram, std::size_t k) {
    if (k == 1) return gram[0];
    if (k == 2) {
        const double tr = gram[0] + gram[3];
        const double det = gram[0] * gram[3] - gram[1] * gram[2];
        return 0.5 * tr + std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
    }
    // Power iteration; the Gram matrix is symmetric positive semidefinite.
    std::vector<double> v(k, 1.0), w(k);
    double lambda = 0.0;
    for (int it = 0; it < 1000; ++it) {
        double norm = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
            w[p] = 0.0;
            for (std::size_t q = 0; q < k; ++q) w[p] += gram[p * k + q] * v[q];
            norm += w[p] * w[p];
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (std::size_t p = 0; p < k; ++p) v[p] = w[p] / norm;
        if (std::abs(norm - lambda) <= 1e-15 * norm) return norm;
        lambda = norm;
    }
    return lambda;
}

}  // namespace

namespace detail {

double block_objective(std::span<const double> gram, std::span<const double> c, double sxx,
                       std::size_t n_samples, double gamma, std::span<const double> a) {
    const std::size_t k = a.size();
    double quad = 0.0;
    double lin = 0.0;
    double norm2 = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
        lin += a[p] * c[p];
        norm2 += a[p] * a[p];
        for (std::size_t q = 0; q < k; ++q) quad += a[p] * gram[p * k + q] * a[q];
    }
    return (sxx - 2.0 * lin + quad) / static_cast<double>(n_samples) + gamma * std::sqrt(norm2);
}

std::size_t solve_block(std::span<const double> gram, std::span<const double> c, double lmax,
                        std::size_t n_samples, double gamma, const FitOptions &options,
                        std::span<double> a, std::vector<double> *trace, double sxx) {
    const std::size_t k = a.size();
    const double scale = 2.0 / static_cast<double>(n_samples);
    std::fill(a.begin(), a.end(), 0.0);

    double cnorm = 0.0;
    for (double v : c) cnorm += v * v;
    cnorm = std::sqrt(cnorm);
    if (scale * cnorm <= gamma || lmax <= 0.0) {
        return 0;
    }
    if (k == 1) {
        a[0] = std::copysign(std::max(std::abs(c[0]) - 0.5 * gamma * static_cast<double>(n_samples), 0.0),
                             c[0]) /
               gram[0];
        return 0;
    }

    const double lipschitz = scale * lmax;
    std::vector<double> v(k), next(k);
    std::size_t it = 0;
    while (it < options.max_iters) {
        ++it;
        double vnorm = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
            double ga = 0.0;
            for (std::size_t q = 0; q < k; ++q) ga += gram[p * k + q] * a[q];
            v[p] = a[p] - scale * (ga - c[p]) / lipschitz;
            vnorm += v[p] * v[p];
        }
        vnorm = std::sqrt(vnorm);
        const double shrink = vnorm > 0.0 ? std::max(0.0, 1.0 - (gamma / lipschitz) / vnorm) : 0.0;
        double change = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
            next[p] = shrink * v[p];
            change += (next[p] - a[p]) * (next[p] - a[p]);
        }
        std::copy(next.begin(), next.end(), a.begin());
        if (trace) trace->push_back(block_objective(gram, c, sxx, n_samples, gamma, a));
        if (std::sqrt(change) < options.tol) break;
    }
    return it;
}

}  // namespace detail

FitResult fit(const RegressionDataset &data, const FitOptions &options) {
    if (!(options.gamma >= 0.0)) {
        throw ConfigError("gamma must be nonnegative");
    }
    if (data.prefs.empty() || data.prefs.size() != data.solutions.size()) {
        throw std::invalid_argument("fit: dataset must be nonempty with one solution per preference");
    }
    const std::size_t rows = data.prefs.size();
    const std::size_t n = data.solutions.front().size();
    for (const auto &x : data.solutions) {
        if (x.size() != n) throw std::invalid_argument("fit: ragged decision vectors");
    }
    const CenteredDesign design = center_design(data);
    const std::size_t k = design.cols;
    const double lmax = largest_eigenvalue(design.gram, k);

    std::vector<double> a(n * k, 0.0);
    std::vector<double> b(n, 0.0);
    FitResult result;
    result.degenerate = design.degenerate;
    std::vector<double> xc(rows), c(k);
    for (std::size_t j = 0; j < n; ++j) {
        double xbar = 0.0;
        for (std::size_t i = 0; i < rows; ++i) xbar += data.solutions[i][j];
        xbar /= static_cast<double>(rows);
        double sxx = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            xc[i] = data.solutions[i][j] - xbar;
            sxx += xc[i] * xc[i];
        }
        std::span<double> aj(a.data() + j * k, k);
        if (!design.degenerate) {
            std::fill(c.begin(), c.end(), 0.0);
            for (std::size_t i = 0; i < rows; ++i) {
                for (std::size_t p = 0; p < k; ++p) c[p] += design.dc[i * k + p] * xc[i];
            }
            const std::size_t iters =
                detail::solve_block(design.gram, c, lmax, rows, options.gamma, options, aj, nullptr, sxx);
            result.iterations = std::max(result.iterations, iters);
        }
        double shift = 0.0;
        for (std::size_t p = 0; p < k; ++p) shift += aj[p] * design.dbar[p];
        b[j] = xbar - shift;
    }
    result.model = LinearModel(std::move(a), std::move(b), data.anchor);
    result.objective = fit_objective(result.model, data, options.gamma);
    return result;
}

double fit_objective(const LinearModel &model, const RegressionDataset &data, double gamma) {
    double loss = 0.0;
    for (std::size_t i = 0; i < data.prefs.size(); ++i) {
        const auto pred = predict(model, data.prefs[i]);
        for (std::size_t j = 0; j < pred.size(); ++j) {
            const double r = data.solutions[i][j] - pred[j];
            loss += r * r;
        }
    }
    return loss / static_cast<double>(data.prefs.size()) + gamma * vsd(model);
}

std::vector<double> zero_thresholds(const RegressionDataset &data) {
    const CenteredDesign design = center_design(data);
    const std::size_t rows = design.rows;
    const std::size_t k = design.cols;
    const std::size_t n = data.solutions.front().size();
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double xbar = 0.0;
        for (std::size_t i = 0; i < rows; ++i) xbar += data.solutions[i][j];
        xbar /= static_cast<double>(rows);
        double norm2 = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
            double cp = 0.0;
            for (std::size_t i = 0; i < rows; ++i) cp += design.dc[i * k + p] * (data.solutions[i][j] - xbar);
            cp *= 2.0 / static_cast<double>(rows);
            norm2 += cp * cp;
        }
        out[j] = std::sqrt(norm2);
    }
    return out;
}

std::vector<DecisionVector> predict_clamped(const LinearModel &model,
                                            const std::vector<PreferenceVector> &prefs,
                                            const MopDefinition &problem) {
    std::vector<DecisionVector> out;
    out.reserve(prefs.size());
    for (const auto &lambda : prefs) {
        out.push_back(problem.clamp(predict(model, lambda)));
    }
    return out;
}

std::vector<DecisionVector> sample_from_model(const LinearModel &model, const PreferenceSet &prefs,
                                              double sigma2_noise, const MopDefinition &problem,
                                              Rng &rng) {
    return predict_clamped(model, perturb_preferences(prefs, sigma2_noise, rng), problem);
}

namespace {

void write_values(std::ostream &out, std::span<const double> values) {
    for (double v : values) out << ' ' << format_double(v);
    out << '\n';
}

std::vector<double> parse_values(std::istringstream &line) {
    std::vector<double> out;
    std::string token;
    while (line >> token) out.push_back(parse_double(token));
    return out;
}

}  // namespace

void write_model(std::ostream &out, const ModelDocument &doc) {
    const LinearModel &model = doc.model;
    out << "# lla-model v1\n";
    out << "problem " << doc.problem << '\n';
    out << "n " << model.n() << '\n';
    out << "m " << model.anchor().size() << '\n';
    out << "seed " << doc.seed << '\n';
    out << "gamma " << format_double(doc.gamma) << '\n';
    out << "anchor";
    write_values(out, model.anchor().weights());
    if (!doc.reference.empty()) {
        out << "reference";
        write_values(out, doc.reference);
    }
    out << "b";
    write_values(out, model.b());
    for (std::size_t j = 0; j < model.n(); ++j) {
        out << "A";
        write_values(out, model.row(j));
    }
}

ModelDocument read_model(std::istream &in) {
    ModelDocument doc;
    std::string raw;
    std::vector<double> anchor, b, a;
    std::size_t m = 0;
    std::size_t rows = 0;
    while (std::getline(in, raw)) {
        if (raw.empty() || raw[0] == '#') continue;
        std::istringstream line(raw);
        std::string key;
        line >> key;
        if (key == "problem") {
            line >> doc.problem;
        } else if (key == "n") {
            line >> doc.n;
        } else if (key == "m") {
            line >> m;
        } else if (key == "seed") {
            line >> doc.seed;
        } else if (key == "gamma") {
            std::string token;
            line >> token;
            doc.gamma = parse_double(token);
        } else if (key == "anchor") {
            anchor = parse_values(line);
        } else if (key == "reference") {
            doc.reference = parse_values(line);
        } else if (key == "b") {
            b = parse_values(line);
        } else if (key == "A") {
            const auto row = parse_values(line);
            a.insert(a.end(), row.begin(), row.end());
            ++rows;
        } else {
            throw IoError("model file: unknown key '" + key + "'");
        }
    }
    if (anchor.size() != m || b.size() != doc.n || rows != doc.n || m < 2 ||
        a.size() != doc.n * (m - 1)) {
        throw IoError("model file: inconsistent dimensions");
    }
    doc.model = LinearModel(std::move(a), std::move(b), PreferenceVector::from_stored(std::move(anchor)));
    return doc;
}

}  // namespace lla
