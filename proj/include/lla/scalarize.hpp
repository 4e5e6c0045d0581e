#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "lla/preference.hpp"
#include "lla/types.hpp"

namespace lla {

/// Offset kept between the reference point and every observed objective value.
inline constexpr double kUtopianOffset = 1e-6;

/// Running utopian point z. Starts at +inf in every coordinate.
struct ReferencePoint {
    std::vector<double> z;

    static ReferencePoint unset(std::size_t m) {
        return ReferencePoint{std::vector<double>(m, std::numeric_limits<double>::infinity())};
    }
    std::size_t size() const noexcept { return z.size(); }
    double operator[](std::size_t i) const { return z[i]; }
};

/// max_i lambda_i * |f_i - z_i|.
double chebyshev(std::span<const double> f, const PreferenceVector &lambda, const ReferencePoint &z);

/// z'_i = min(z_i, f_i - kUtopianOffset).
ReferencePoint update_reference(const ReferencePoint &z, std::span<const double> f);

/// In-place variant used inside optimizer loops.
void update_reference_inplace(ReferencePoint &z, std::span<const double> f);

}  // namespace lla
