// Volume of a union of anchored boxes (Klee's measure problem restricted to
// boxes [0,p_1] x ... x [0,p_d]), via four interchangeable engines:
//
//   hv_inclusion_exclusion  exponential-time oracle, capped input size
//   hv_sweep                exact; staircase sweeps for d <= 3, recursive
//                           dimension sweep above (non-optimal but simple)
//   hv_estimate             randomized (1 +- eps) coverage sampler, float only
//   hv_contribution         mu(S u {p}) - mu(S) via boxes clipped to box(p)
//
// Float accumulation orders are fixed so results are run-to-run identical.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "volsel/geometry.hpp"
#include "volsel/types.hpp"

namespace volsel {

template <class T>
inline Volume<T> box_volume(std::span<const T> p) {
  Volume<T> v = 1;
  for (const T& c : p) v = vol_mul<T>(v, Volume<T>(c));
  return v;
}

template <class T>
Volume<T> hv_inclusion_exclusion(const PointSet<T>& s, std::size_t size_limit = 25) {
  const std::size_t n = s.size();
  if (n > size_limit) {
    throw BudgetError("inclusion-exclusion limited to " + std::to_string(size_limit) +
                      " points, got " + std::to_string(n));
  }
  const int d = s.dim();
  std::vector<T> mins(static_cast<std::size_t>(d) * (n + 1));
  Volume<T> total = 0;

  auto dfs = [&](auto&& self, std::size_t start, std::size_t depth, bool positive) -> void {
    std::span<const T> parent(mins.data() + depth * d, static_cast<std::size_t>(d));
    std::span<T> child(mins.data() + (depth + 1) * d, static_cast<std::size_t>(d));
    for (std::size_t i = start; i < n; ++i) {
      auto p = s[i];
      for (int c = 0; c < d; ++c) {
        child[c] = depth == 0 ? p[c] : std::min(parent[c], p[c]);
      }
      const Volume<T> term = box_volume<T>(child);
      if (positive) {
        total += term;
      } else {
        total -= term;
      }
      self(self, i + 1, depth + 1, !positive);
    }
  };
  dfs(dfs, 0, 0, true);
  return total;
}

namespace detail {

template <class T>
std::vector<std::size_t> sweep_order(const PointSet<T>& s, int key_dim) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto pa = s[a], pb = s[b];
    if (pa[key_dim] != pb[key_dim]) return pa[key_dim] > pb[key_dim];
    for (int i = 0; i < s.dim(); ++i) {
      if (pa[i] != pb[i]) return pa[i] > pb[i];
    }
    return a < b;
  });
  return order;
}

template <class T>
Volume<T> hv_sweep_2d(const PointSet<T>& s) {
  auto front = pareto_filter(s);
  const std::size_t n = front.points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return front.points[a][0] < front.points[b][0];
  });
  Volume<T> area = 0;
  T prev_x = 0;
  for (std::size_t i : order) {
    auto p = front.points[i];
    area += vol_mul<T>(Volume<T>(p[1]), Volume<T>(p[0] - prev_x));
    prev_x = p[0];
  }
  return area;
}

// 2D staircase with incremental area, keyed x -> y (x ascending, y descending).
template <class T>
class Staircase {
 public:
  // Inserts (x, y); no-op when the staircase already dominates it.
  void insert(T x, T y) {
    auto it = stairs_.lower_bound(x);
    if (it != stairs_.end() && it->second >= y) return;
    if (it != stairs_.end() && it->first == x) it = erase(it);
    while (it != stairs_.begin()) {
      auto prev = std::prev(it);
      if (prev->second <= y) {
        erase(prev);
      } else {
        break;
      }
    }
    const T left = it == stairs_.begin() ? T(0) : std::prev(it)->first;
    const Volume<T> below = it == stairs_.end() ? Volume<T>(0) : Volume<T>(it->second);
    area_ += vol_mul<T>(Volume<T>(x - left), Volume<T>(y) - below);
    stairs_.emplace(x, y);
  }

  Volume<T> area() const { return area_; }

 private:
  typename std::map<T, T>::iterator erase(typename std::map<T, T>::iterator it) {
    const T left = it == stairs_.begin() ? T(0) : std::prev(it)->first;
    auto next = std::next(it);
    const Volume<T> next_y = next == stairs_.end() ? Volume<T>(0) : Volume<T>(next->second);
    area_ -= vol_mul<T>(Volume<T>(it->first - left), Volume<T>(it->second) - next_y);
    return stairs_.erase(it);
  }

  std::map<T, T> stairs_;
  Volume<T> area_ = 0;
};

template <class T>
Volume<T> hv_sweep_3d(const PointSet<T>& s) {
  const auto order = sweep_order(s, 2);
  Staircase<T> stairs;
  Volume<T> vol = 0;
  T z_prev{};
  bool first = true;
  for (std::size_t idx : order) {
    auto p = s[idx];
    if (!first) vol += vol_mul<T>(stairs.area(), Volume<T>(z_prev - p[2]));
    stairs.insert(p[0], p[1]);
    z_prev = p[2];
    first = false;
  }
  if (!first) vol += vol_mul<T>(stairs.area(), Volume<T>(z_prev));
  return vol;
}

// d >= 4: sweep the last dimension, recomputing the (d-1)-dimensional volume
// of the projected prefix at every distinct sweep value.
template <class T>
Volume<T> hv_sweep_nd(const PointSet<T>& s);

template <class T>
Volume<T> hv_sweep_any(const PointSet<T>& s) {
  if (s.empty()) return 0;
  switch (s.dim()) {
    case 1: {
      T best = s[0][0];
      for (std::size_t i = 1; i < s.size(); ++i) best = std::max(best, s[i][0]);
      return Volume<T>(best);
    }
    case 2:
      return hv_sweep_2d(s);
    case 3:
      return hv_sweep_3d(s);
    default:
      return hv_sweep_nd(s);
  }
}

template <class T>
Volume<T> hv_sweep_nd(const PointSet<T>& s) {
  const int d = s.dim();
  const int key = d - 1;
  const auto order = sweep_order(s, key);
  PointSet<T> prefix(d - 1);
  std::vector<T> proj(static_cast<std::size_t>(d - 1));
  Volume<T> vol = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const T z = s[order[i]][key];
    while (i < order.size() && s[order[i]][key] == z) {
      auto p = s[order[i]];
      for (int c = 0; c + 1 < d; ++c) proj[static_cast<std::size_t>(c)] = p[c];
      prefix.add(std::span<const T>(proj.data(), proj.size()));
      ++i;
    }
    const T next_z = i < order.size() ? s[order[i]][key] : T(0);
    const auto front = pareto_filter(prefix);
    vol += vol_mul<T>(hv_sweep_any(front.points), Volume<T>(z - next_z));
  }
  return vol;
}

}  // namespace detail

template <class T>
Volume<T> hv_sweep(const PointSet<T>& s) {
  return detail::hv_sweep_any(s);
}

// mu(S u {p}) - mu(S): the volume of box(p) not covered by the boxes of S,
// computed from the boxes of S clipped to box(p).
template <class T>
Volume<T> hv_contribution(const PointSet<T>& s, std::span<const T> p) {
  const Volume<T> own = box_volume<T>(p);
  if (s.empty()) return own;
  if (static_cast<std::size_t>(s.dim()) != p.size()) {
    throw std::invalid_argument("dimension mismatch");
  }
  PointSet<T> clipped(s.dim());
  std::vector<T> r(p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto q = s[i];
    for (std::size_t c = 0; c < p.size(); ++c) r[c] = std::min(q[c], p[c]);
    clipped.add(std::span<const T>(r.data(), r.size()));
  }
  Volume<T> gain = own - hv_sweep(clipped);
  if (gain < Volume<T>(0)) gain = 0;
  return gain;
}

struct EstimateParams {
  double eps = 0.1;
  double delta = 0.01;
  std::uint64_t seed = 0;
  double chernoff_c = 8.0;  // sample count ceil(c * n * ln(2/delta) / eps^2)
};

namespace detail {

inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Coverage sampler: draw a box with probability proportional to its volume,
// a uniform point inside it, and average reciprocals of coverage counts.
// Deterministic for a fixed seed.
inline double hv_estimate(const PointSet<double>& s, const EstimateParams& params) {
  if (!(params.eps > 0)) throw std::invalid_argument("eps must be positive");
  if (!(params.delta > 0 && params.delta < 1)) {
    throw std::invalid_argument("delta must be in (0, 1)");
  }
  const std::size_t n = s.size();
  if (n == 0) return 0.0;
  const int d = s.dim();

  std::vector<double> cumulative(n);
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += box_volume<double>(s[i]);
    cumulative[i] = total;
  }

  const double raw = params.chernoff_c * static_cast<double>(n) *
                     std::log(2.0 / params.delta) / (params.eps * params.eps);
  const std::uint64_t samples = static_cast<std::uint64_t>(std::ceil(raw));

  std::mt19937_64 rng(params.seed);
  std::vector<double> y(static_cast<std::size_t>(d));
  double sum_inverse = 0;
  for (std::uint64_t t = 0; t < samples; ++t) {
    const double r = detail::unit_uniform(rng) * total;
    const std::size_t box =
        static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), r) -
                                 cumulative.begin());
    auto p = s[std::min(box, n - 1)];
    for (int c = 0; c < d; ++c) y[static_cast<std::size_t>(c)] = detail::unit_uniform(rng) * p[c];
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto q = s[i];
      bool inside = true;
      for (int c = 0; c < d && inside; ++c) inside = y[static_cast<std::size_t>(c)] <= q[c];
      count += inside;
    }
    sum_inverse += 1.0 / static_cast<double>(count);
  }
  return total * sum_inverse / static_cast<double>(samples);
}

}  // namespace volsel
