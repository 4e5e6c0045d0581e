#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace lla {

using DecisionVector = std::vector<double>;
using ObjectiveVector = std::vector<double>;

/// Random source shared by every stochastic operation. Callers own it.
using Rng = std::mt19937_64;

/// Seeds an independent stream for (seed, stream) so that runs can split
/// their randomness without sharing state.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

}  // namespace lla
