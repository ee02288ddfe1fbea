// Volume-selection solvers: brute-force subset enumeration (any d), the
// polynomial staircase DP for d = 2, and the lazy greedy (1 - 1/e) baseline.
//
// All solvers are deterministic: value ties break toward the
// lexicographically smallest index set (brute) or the smallest index
// (greedy), and reported indices always refer to the input set.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "volsel/geometry.hpp"
#include "volsel/hypervolume.hpp"
#include "volsel/types.hpp"

namespace volsel {

enum class GuaranteeKind { none, exact, factor, eptas };

struct Guarantee {
  GuaranteeKind kind = GuaranteeKind::none;
  double param = 0.0;  // approximation factor or eps, depending on kind

  static Guarantee none() { return {GuaranteeKind::none, 0.0}; }
  static Guarantee exact() { return {GuaranteeKind::exact, 0.0}; }
  static Guarantee factor(double gamma) { return {GuaranteeKind::factor, gamma}; }
  static Guarantee eptas(double eps) { return {GuaranteeKind::eptas, eps}; }
};

inline const char* guarantee_name(GuaranteeKind k) {
  switch (k) {
    case GuaranteeKind::none: return "none";
    case GuaranteeKind::exact: return "exact";
    case GuaranteeKind::factor: return "factor";
    case GuaranteeKind::eptas: return "eptas";
  }
  return "none";
}

template <class T>
struct Solution {
  std::vector<std::size_t> indices;  // ascending positions in the queried set
  Volume<T> value = 0;
  std::string algorithm;
  Guarantee guarantee;
};

namespace detail {

inline bool lex_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Sum of C(n, s) for s <= k, clamped to cap + 1.
inline std::uint64_t subsets_up_to(std::size_t n, std::size_t k, std::uint64_t cap) {
  std::uint64_t total = 1;  // empty set
  std::uint64_t binom = 1;
  for (std::size_t s = 1; s <= k; ++s) {
    const std::uint64_t mult = n - s + 1;
    if (mult != 0 && binom > std::numeric_limits<std::uint64_t>::max() / mult) return cap + 1;
    binom = binom * mult / s;  // exact: C(n,s-1)*(n-s+1) is divisible by s
    if (binom > cap || total > cap - binom) return cap + 1;
    total += binom;
  }
  return total;
}

}  // namespace detail

// Best volume and lexicographically smallest witness per subset size
// 0..kmax, where entry k' covers all subsets of size <= k'.
template <class T>
struct SubsetBests {
  std::vector<Volume<T>> value;
  std::vector<std::vector<std::size_t>> witness;
};

template <class T>
SubsetBests<T> subset_bests(const PointSet<T>& points, std::size_t kmax,
                            std::uint64_t subset_budget) {
  const std::size_t n = points.size();
  kmax = std::min(kmax, n);
  if (detail::subsets_up_to(n, kmax, subset_budget) > subset_budget) {
    throw BudgetError("subset enumeration budget of " + std::to_string(subset_budget) +
                      " subsets exceeded");
  }

  std::vector<Volume<T>> best(kmax + 1, Volume<T>(-1));
  std::vector<std::vector<std::size_t>> best_wit(kmax + 1);
  best[0] = 0;

  PointSet<T> current(points.dim());
  std::vector<std::size_t> chosen;
  std::vector<Volume<T>> value_stack{Volume<T>(0)};

  // Depth-first over index-ascending subsets: preorder coincides with
  // lexicographic order on index sequences, so strict improvements keep the
  // lexicographically smallest witness per size.
  auto dfs = [&](auto&& self, std::size_t start) -> void {
    for (std::size_t i = start; i < n; ++i) {
      const Volume<T> gain = hv_contribution(current, points[i]);
      const Volume<T> value = value_stack.back() + gain;
      current.add(points[i]);
      chosen.push_back(i);
      value_stack.push_back(value);
      const std::size_t size = chosen.size();
      if (value > best[size]) {
        best[size] = value;
        best_wit[size] = chosen;
      }
      if (size < kmax) self(self, i + 1);
      value_stack.pop_back();
      chosen.pop_back();
      current.pop_back();
    }
  };
  if (kmax > 0) dfs(dfs, 0);

  // Fold "size exactly s" into "size at most k'", breaking value ties toward
  // the lexicographically smaller witness (sizes are incomparable a priori).
  SubsetBests<T> out;
  out.value.assign(kmax + 1, 0);
  out.witness.assign(kmax + 1, {});
  for (std::size_t k = 1; k <= kmax; ++k) {
    out.value[k] = out.value[k - 1];
    out.witness[k] = out.witness[k - 1];
    if (best[k] > out.value[k] ||
        (best[k] == out.value[k] && detail::lex_less(best_wit[k], out.witness[k]))) {
      out.value[k] = best[k];
      out.witness[k] = best_wit[k];
    }
  }
  return out;
}

struct BruteOptions {
  std::uint64_t subset_budget = 10'000'000;
};

// Exhaustive optimum over all subsets of size <= k.
template <class T>
Solution<T> volsel_brute(const PointSet<T>& points, std::size_t k,
                         const BruteOptions& options = {}) {
  if (k > points.size()) throw std::invalid_argument("k exceeds point count");
  auto bests = subset_bests(points, k, options.subset_budget);
  return Solution<T>{bests.witness[std::min(k, points.size())],
                     bests.value[std::min(k, points.size())], "brute", Guarantee::exact()};
}

// Exact planar solver: Pareto-filter, sort by x, then a "last chosen point"
// staircase DP with f[i][t] = max_j f[j][t-1] + y_i * (x_i - x_j).
template <class T>
Solution<T> volsel_exact_2d(const PointSet<T>& points, std::size_t k) {
  if (points.dim() != 2) throw std::invalid_argument("volsel_exact_2d requires dimension 2");
  if (k > points.size()) throw std::invalid_argument("k exceeds point count");

  auto front = pareto_filter(points);
  const std::size_t n = front.points.size();
  const std::size_t kk = std::min(k, n);
  if (kk == 0) return Solution<T>{{}, 0, "exact2d", Guarantee::exact()};

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return front.points[a][0] < front.points[b][0];
  });

  const auto x = [&](std::size_t i) { return i == 0 ? T(0) : front.points[order[i - 1]][0]; };
  const auto y = [&](std::size_t i) { return front.points[order[i - 1]][1]; };

  constexpr Volume<T> unset = Volume<T>(-1);
  std::vector<std::vector<Volume<T>>> f(n + 1, std::vector<Volume<T>>(kk + 1, unset));
  std::vector<std::vector<std::size_t>> parent(n + 1, std::vector<std::size_t>(kk + 1, 0));
  f[0][0] = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t t = 1; t <= std::min(i, kk); ++t) {
      for (std::size_t j = 0; j < i; ++j) {
        if (f[j][t - 1] == unset) continue;
        const Volume<T> cand =
            f[j][t - 1] + vol_mul<T>(Volume<T>(y(i)), Volume<T>(x(i) - x(j)));
        if (cand > f[i][t]) {
          f[i][t] = cand;
          parent[i][t] = j;
        }
      }
    }
  }

  Volume<T> best = 0;
  std::size_t best_i = 0, best_t = 0;
  for (std::size_t t = 1; t <= kk; ++t) {
    for (std::size_t i = t; i <= n; ++i) {
      if (f[i][t] > best) {
        best = f[i][t];
        best_i = i;
        best_t = t;
      }
    }
  }

  std::vector<std::size_t> indices;
  for (std::size_t i = best_i, t = best_t; t > 0; --t) {
    indices.push_back(front.original[order[i - 1]]);
    i = parent[i][t];
  }
  std::sort(indices.begin(), indices.end());
  return Solution<T>{std::move(indices), best, "exact2d", Guarantee::exact()};
}

// Lazy greedy: a max-heap of stale marginal gains, re-evaluating only the
// top entry. Under the (gain desc, index asc) tie-break this selects exactly
// the naive greedy sequence, since gains never increase as the set grows.
template <class T>
Solution<T> volsel_greedy(const PointSet<T>& points, std::size_t k) {
  if (k > points.size()) throw std::invalid_argument("k exceeds point count");
  const std::size_t n = points.size();

  struct Entry {
    Volume<T> gain;
    std::size_t index;
    std::size_t round;
    bool operator<(const Entry& other) const {
      if (gain != other.gain) return gain < other.gain;
      return index > other.index;
    }
  };
  std::priority_queue<Entry> heap;
  for (std::size_t i = 0; i < n; ++i) heap.push({box_volume<T>(points[i]), i, 0});

  PointSet<T> current(points.dim());
  std::vector<std::size_t> selected;
  std::size_t round = 0;
  while (selected.size() < k && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.round != round) {
      top.gain = hv_contribution(current, points[top.index]);
      top.round = round;
      heap.push(top);
      continue;
    }
    if (top.gain <= Volume<T>(0)) break;  // nothing left to gain
    current.add(points[top.index]);
    selected.push_back(top.index);
    ++round;
  }

  const Volume<T> value = hv_sweep(current);
  std::sort(selected.begin(), selected.end());
  return Solution<T>{std::move(selected), value, "greedy",
                     Guarantee::factor(1.0 - 1.0 / std::exp(1.0))};
}

}  // namespace volsel
