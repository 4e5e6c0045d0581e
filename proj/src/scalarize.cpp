#include "lla/scalarize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lla {

double chebyshev(std::span<const double> f, const PreferenceVector &lambda, const ReferencePoint &z) {
    if (f.size() != lambda.size() || f.size() != z.size()) {
        throw std::invalid_argument("chebyshev: dimension mismatch");
    }
    double value = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        value = std::max(value, lambda[i] * std::abs(f[i] - z[i]));
    }
    return value;
}

void update_reference_inplace(ReferencePoint &z, std::span<const double> f) {
    if (f.size() != z.size()) {
        throw std::invalid_argument("update_reference: dimension mismatch");
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        z.z[i] = std::min(z.z[i], f[i] - kUtopianOffset);
    }
}

ReferencePoint update_reference(const ReferencePoint &z, std::span<const double> f) {
    ReferencePoint out = z;
    update_reference_inplace(out, f);
    return out;
}

}  // namespace lla
