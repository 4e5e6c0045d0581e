#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lla/scalarize.hpp"

using namespace lla;

TEST_CASE("chebyshev examples") {
    const auto half = PreferenceVector::from_weights({0.5, 0.5});
    const ReferencePoint origin{{0.0, 0.0}};
    CHECK(chebyshev(std::vector<double>{1.0, 2.0}, half, origin) == 1.0);
    CHECK(chebyshev(std::vector<double>{0.0, 0.0}, half, origin) == 0.0);
    const auto skew = PreferenceVector::from_weights({0.2, 0.8});
    CHECK(chebyshev(std::vector<double>{1.0, 1.0}, skew, origin) == doctest::Approx(0.8));
    CHECK_THROWS_AS(chebyshev(std::vector<double>{1.0}, half, origin), std::invalid_argument);
}

TEST_CASE("chebyshev scales with the weights") {
    const ReferencePoint z{{0.1, -0.3, 0.2}};
    const auto w = PreferenceVector::from_weights({0.2, 0.3, 0.5});
    const std::vector<std::vector<double>> candidates{{1.0, 0.2, 0.4}, {0.3, 0.9, 0.5}, {0.6, 0.6, 0.6}};
    // Scaling every weight by c scales the value by c, so the arg min is unchanged.
    for (const auto &f : candidates) {
        double scaled = 0.0;
        for (std::size_t i = 0; i < 3; ++i) scaled = std::max(scaled, 3.0 * w[i] * std::abs(f[i] - z.z[i]));
        CHECK(scaled == doctest::Approx(3.0 * chebyshev(f, w, z)));
    }
}

TEST_CASE("reference point updates") {
    const ReferencePoint origin{{0.0, 0.0}};
    CHECK(update_reference(origin, std::vector<double>{1.0, 1.0}).z == origin.z);

    const auto first = update_reference(ReferencePoint::unset(2), std::vector<double>{1.0, 2.0});
    CHECK(first.z[0] == 1.0 - kUtopianOffset);
    CHECK(first.z[1] == 2.0 - kUtopianOffset);

    const auto twice = update_reference(first, std::vector<double>{1.0, 2.0});
    CHECK(twice.z == first.z);

    ReferencePoint z = ReferencePoint::unset(2);
    const std::vector<std::vector<double>> stream{{3.0, 1.0}, {2.0, 4.0}, {5.0, 0.5}};
    for (const auto &f : stream) {
        const auto before = z;
        update_reference_inplace(z, f);
        for (std::size_t i = 0; i < 2; ++i) CHECK(z.z[i] <= before.z[i]);
    }
    CHECK(z.z[0] == 2.0 - kUtopianOffset);
    CHECK(z.z[1] == 0.5 - kUtopianOffset);
}

TEST_CASE("chebyshev is zero only at the reference point") {
    const auto w = PreferenceVector::from_weights({0.4, 0.6});
    const ReferencePoint z{{0.25, 0.5}};
    CHECK(chebyshev(std::vector<double>{0.25, 0.5}, w, z) == 0.0);
    CHECK(chebyshev(std::vector<double>{0.25, 0.5 + 1e-9}, w, z) > 0.0);
    const auto corner = PreferenceVector::from_weights({1.0, 0.0});
    CHECK(chebyshev(std::vector<double>{0.25, 9.0}, corner, z) == 0.0);
}
