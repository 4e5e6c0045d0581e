#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's solvers; each routine is a deliberately naive rewrite.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

// Projection onto the simplex by enumerating every support set and keeping
// the closest feasible candidate of the equality-constrained problem.
inline Vec simplex_projection(const Vec &v) {
    const std::size_t m = v.size();
    Vec best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        double sum = 0.0;
        std::size_t k = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask >> i & 1) {
                sum += v[i];
                ++k;
            }
        }
        const double shift = (sum - 1.0) / static_cast<double>(k);
        Vec x(m, 0.0);
        bool feasible = true;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask >> i & 1) {
                x[i] = v[i] - shift;
                if (x[i] < -1e-15) feasible = false;
            }
        }
        if (!feasible) continue;
        double d = 0.0;
        for (std::size_t i = 0; i < m; ++i) d += (x[i] - v[i]) * (x[i] - v[i]);
        if (d < best_dist) {
            best_dist = d;
            best = x;
        }
    }
    return best;
}

// Hypervolume by inclusion-exclusion over all subsets.
inline double hv_inclusion_exclusion(const std::vector<Vec> &set, const Vec &ref) {
    const std::size_t k = set.size();
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        Vec corner(ref.size(), -std::numeric_limits<double>::infinity());
        int bits = 0;
        for (std::size_t p = 0; p < k; ++p) {
            if (!(mask >> p & 1)) continue;
            ++bits;
            for (std::size_t i = 0; i < ref.size(); ++i) corner[i] = std::max(corner[i], set[p][i]);
        }
        double vol = 1.0;
        for (std::size_t i = 0; i < ref.size(); ++i) vol *= std::max(0.0, ref[i] - corner[i]);
        total += (bits % 2 ? 1.0 : -1.0) * vol;
    }
    return total;
}

struct MonteCarlo {
    double value;
    double standard_error;
};

inline MonteCarlo hv_monte_carlo(const std::vector<Vec> &set, const Vec &ref, std::size_t samples,
                                 std::mt19937_64 &rng) {
    const std::size_t m = ref.size();
    Vec lo(ref);
    for (const auto &p : set) {
        for (std::size_t i = 0; i < m; ++i) lo[i] = std::min(lo[i], p[i]);
    }
    double box = 1.0;
    for (std::size_t i = 0; i < m; ++i) box *= ref[i] - lo[i];
    std::vector<std::uniform_real_distribution<double>> axes;
    for (std::size_t i = 0; i < m; ++i) axes.emplace_back(lo[i], ref[i]);
    std::size_t hits = 0;
    Vec s(m);
    for (std::size_t t = 0; t < samples; ++t) {
        for (std::size_t i = 0; i < m; ++i) s[i] = axes[i](rng);
        for (const auto &p : set) {
            bool covered = true;
            for (std::size_t i = 0; i < m && covered; ++i) covered = p[i] <= s[i];
            if (covered) {
                ++hits;
                break;
            }
        }
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(samples);
    return {box * frac, box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

template <class F>
double golden_min(F f, double lo, double hi, int iters = 200) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters && b - a > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return std::min(fc, fd);
}

// Raw per-dimension regression loss with the bias solved exactly for the
// given slope: (1/N) sum (x_i - a.d_i - b)^2 + gamma ||a||.
inline double raw_loss(const std::vector<Vec> &d, const Vec &x, double gamma, const Vec &a) {
    const std::size_t n = x.size();
    Vec r(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double p = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) p += a[k] * d[i][k];
        r[i] = x[i] - p;
        mean += r[i];
    }
    mean /= static_cast<double>(n);
    double loss = 0.0;
    for (double v : r) loss += (v - mean) * (v - mean);
    double norm = 0.0;
    for (double v : a) norm += v * v;
    return loss / static_cast<double>(n) + gamma * std::sqrt(norm);
}

// Minimum of the per-dimension loss over a in [-R, R]^k (k = 1 or 2) by
// (nested) golden-section search; the loss is convex in a.
inline double group_lasso_min(const std::vector<Vec> &d, const Vec &x, double gamma, double radius) {
    const std::size_t k = d.front().size();
    if (k == 1) {
        return golden_min([&](double a) { return raw_loss(d, x, gamma, {a}); }, -radius, radius);
    }
    auto inner = [&](double a1) {
        return golden_min([&](double a2) { return raw_loss(d, x, gamma, {a1, a2}); }, -radius, radius, 160);
    };
    return golden_min(inner, -radius, radius, 160);
}

// m = 2 closed form: a = soft(<d_c, x_c>, gamma N / 2) / ||d_c||^2.
inline double soft_threshold_slope(const Vec &d, const Vec &x, double gamma) {
    const std::size_t n = x.size();
    double md = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        md += d[i];
        mx += x[i];
    }
    md /= static_cast<double>(n);
    mx /= static_cast<double>(n);
    double c = 0.0, s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        c += (d[i] - md) * (x[i] - mx);
        s += (d[i] - md) * (d[i] - md);
    }
    const double t = gamma * static_cast<double>(n) / 2.0;
    const double shrunk = c > t ? c - t : (c < -t ? c + t : 0.0);
    return s > 0.0 ? shrunk / s : 0.0;
}

}  // namespace oracle
