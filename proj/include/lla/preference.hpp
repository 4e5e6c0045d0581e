#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lla/types.hpp"

namespace lla {

/// A point on the probability simplex: nonnegative weights summing to one.
class PreferenceVector {
public:
    PreferenceVector() = default;

    /// Validates `weights` against the simplex within `tol` and renormalizes.
    /// Throws ConfigError when the weights are negative beyond `tol`, do not
    /// sum to one within `tol`, or have fewer than two entries.
    static PreferenceVector from_weights(std::vector<double> weights, double tol = 1e-9);

    /// Checks the simplex invariant within `tol` but keeps the weights bit-for-bit.
    /// Used when reloading vectors that were produced by this library.
    static PreferenceVector from_stored(std::vector<double> weights, double tol = 1e-12);

    /// Centered default anchor (1/m, ..., 1/m).
    static PreferenceVector uniform(std::size_t m);

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    const std::vector<double> &weights() const noexcept { return weights_; }

    friend bool operator==(const PreferenceVector &, const PreferenceVector &) = default;

private:
    explicit PreferenceVector(std::vector<double> w) : weights_(std::move(w)) {}
    std::vector<double> weights_;

    friend PreferenceVector project_to_simplex(std::span<const double> v);
};

/// The sampled neighborhood of an anchor preference.
struct PreferenceSet {
    PreferenceVector anchor;
    std::vector<PreferenceVector> members;
    double sigma2 = 0.0;

    std::size_t size() const noexcept { return members.size(); }
};

/// Exact Euclidean projection onto the probability simplex (sort-based).
/// Throws NumericError on non-finite input and std::invalid_argument when
/// fewer than two coordinates are given.
PreferenceVector project_to_simplex(std::span<const double> v);

/// Draws N members project(anchor + eps), eps ~ N(0, sigma2 I) in m dimensions.
PreferenceSet sample_preference_set(const PreferenceVector &anchor, double sigma2, std::size_t n,
                                    Rng &rng);

/// One perturbed copy project(member + eps) per member, eps ~ N(0, sigma2_noise I).
std::vector<PreferenceVector> perturb_preferences(const PreferenceSet &set, double sigma2_noise,
                                                  Rng &rng);

}  // namespace lla
