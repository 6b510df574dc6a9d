#pragma once

#include <cstdint>
#include <random>

namespace cbggm {

// All randomness flows through one engine type so that runs are reproducible
// from a single seed. Distributions are taken from Boost.Random, which
// produces identical streams across standard library implementations
// (the <random> distributions do not).
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

}  // namespace cbggm
