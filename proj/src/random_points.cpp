#include "volsel/random_points.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace volsel {

PointSet<double> gen_log_uniform(std::size_t n, int d, double spread, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("point count must be positive");
  if (!(spread >= 1.0)) throw std::invalid_argument("spread must be at least 1");
  std::mt19937_64 rng(seed);
  const double log_spread = std::log(spread);
  PointSet<double> pts(d);
  std::vector<double> coords(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) {
      coords[static_cast<std::size_t>(c)] = std::exp(unit_uniform(rng) * log_spread);
    }
    pts.add(std::span<const double>(coords.data(), coords.size()));
  }
  return pts;
}

PointSet<std::int64_t> gen_uniform_ints(std::size_t n, int d, std::int64_t hi,
                                        std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("point count must be positive");
  if (hi < 1) throw std::invalid_argument("upper bound must be at least 1");
  std::mt19937_64 rng(seed);
  PointSet<std::int64_t> pts(d);
  std::vector<std::int64_t> coords(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) {
      coords[static_cast<std::size_t>(c)] =
          1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi));
    }
    pts.add(std::span<const std::int64_t>(coords.data(), coords.size()));
  }
  return pts;
}

}  // namespace volsel
