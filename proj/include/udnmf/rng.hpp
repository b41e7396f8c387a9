#pragma once

#include <cstdint>
#include <random>

#include "udnmf/math_util.hpp"

namespace udnmf {

using rng_t = std::mt19937_64;

// Independent generator for one trial. Derived seeds are decorrelated through
// splitmix64 so trial streams stay disjoint regardless of worker scheduling.
inline rng_t make_trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
    std::uint64_t s = splitmix64(master_seed + 0x9E3779B97F4A7C15ull * (trial_index + 1));
    return rng_t(s);
}

}  // namespace udnmf
