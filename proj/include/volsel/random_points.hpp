// Seeded random instance generation shared by the CLI and the test suites.
#pragma once

#include <cstdint>
#include <random>

#include "volsel/geometry.hpp"

namespace volsel {

// One uniform double in [0, 1) from the top 53 bits of the generator, so the
// draw sequence is identical across platforms.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// n points with coordinates log-uniform in [1, spread). Log-uniform rather
// than uniform: a uniform cloud collapses into a handful of exponential-grid
// regions, which makes grid-based runs trivial and benchmarks meaningless.
PointSet<double> gen_log_uniform(std::size_t n, int d, double spread, std::uint64_t seed);

// n points with integer coordinates uniform in [1, hi]; exact-mode instances.
PointSet<std::int64_t> gen_uniform_ints(std::size_t n, int d, std::int64_t hi,
                                        std::uint64_t seed);

}  // namespace volsel
