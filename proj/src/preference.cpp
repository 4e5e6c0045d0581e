#include "lla/preference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lla/errors.hpp"

namespace lla {

PreferenceVector PreferenceVector::from_weights(std::vector<double> weights, double tol) {
    if (weights.size() < 2) {
        throw ConfigError("preference vector needs at least 2 weights");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < -tol) {
            throw ConfigError("preference weight " + std::to_string(w) + " is not on the simplex");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > tol) {
        throw ConfigError("preference weights sum to " + std::to_string(sum) + ", expected 1");
    }
    sum = 0.0;
    for (double &w : weights) {
        w = std::max(w, 0.0);
        sum += w;
    }
    for (double &w : weights) {
        w /= sum;
    }
    return PreferenceVector(std::move(weights));
}

PreferenceVector PreferenceVector::from_stored(std::vector<double> weights, double tol) {
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ConfigError("stored preference has a negative or non-finite weight");
        }
        sum += w;
    }
    if (weights.size() < 2 || std::abs(sum - 1.0) > tol) {
        throw ConfigError("stored preference is not on the simplex");
    }
    return PreferenceVector(std::move(weights));
}

PreferenceVector PreferenceVector::uniform(std::size_t m) {
    if (m < 2) {
        throw ConfigError("preference vector needs at least 2 weights");
    }
    return PreferenceVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

PreferenceVector project_to_simplex(std::span<const double> v) {
    const std::size_t m = v.size();
    if (m < 2) {
        throw std::invalid_argument("project_to_simplex: need at least 2 coordinates");
    }
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw NumericError("project_to_simplex: non-finite input");
        }
    }
    std::vector<double> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<>());

    // Largest k with u_k - (sum_{j<=k} u_j - 1) / k > 0; k = 1 always qualifies.
    double prefix = 0.0;
    double theta = u[0] - 1.0;
    for (std::size_t k = 1; k <= m; ++k) {
        prefix += u[k - 1];
        const double candidate = (prefix - 1.0) / static_cast<double>(k);
        if (u[k - 1] - candidate > 0.0) {
            theta = candidate;
        }
    }
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) {
        w[i] = std::max(v[i] - theta, 0.0);
    }
    return PreferenceVector(std::move(w));
}

namespace {

std::vector<double> add_noise(const PreferenceVector &base, double sigma2, Rng &rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(sigma2));
    std::vector<double> v(base.weights());
    for (double &x : v) {
        x += normal(rng);
    }
    return v;
}

}  // namespace

PreferenceSet sample_preference_set(const PreferenceVector &anchor, double sigma2, std::size_t n,
                                    Rng &rng) {
    if (!(sigma2 > 0.0)) {
        throw ConfigError("sigma2 must be positive");
    }
    if (n == 0) {
        throw ConfigError("preference set size must be at least 1");
    }
    PreferenceSet set;
    set.anchor = anchor;
    set.sigma2 = sigma2;
    set.members.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        set.members.push_back(project_to_simplex(add_noise(anchor, sigma2, rng)));
    }
    return set;
}

std::vector<PreferenceVector> perturb_preferences(const PreferenceSet &set, double sigma2_noise,
                                                  Rng &rng) {
    if (!(sigma2_noise > 0.0)) {
        throw ConfigError("sigma2_noise must be positive");
    }
    std::vector<PreferenceVector> out;
    out.reserve(set.size());
    for (const auto &member : set.members) {
        out.push_back(project_to_simplex(add_noise(member, sigma2_noise, rng)));
    }
    return out;
}

}  // namespace lla
