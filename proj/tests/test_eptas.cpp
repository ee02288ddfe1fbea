#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "volsel/eptas.hpp"
#include "volsel/hypervolume.hpp"
#include "volsel/solvers.hpp"

using namespace volsel;

namespace {

// All offsets in [1, tau]^d, lexicographic.
std::vector<Offset> all_offsets(const GridParams& params) {
  std::vector<Offset> out;
  Offset offset(static_cast<std::size_t>(params.d), 1);
  while (true) {
    out.push_back(offset);
    int pos = params.d - 1;
    while (pos >= 0) {
      if (++offset[static_cast<std::size_t>(pos)] <= params.tau) break;
      offset[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

PointSet<double> rounded_copy(const PointSet<double>& pts, const GridParams& params) {
  PointSet<double> out(pts.dim());
  std::vector<double> row(static_cast<std::size_t>(pts.dim()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int c = 0; c < pts.dim(); ++c) {
      row[static_cast<std::size_t>(c)] = params.pow_beta(round_exponent(pts[i][c], params));
    }
    out.add(std::span<const double>(row.data(), row.size()));
  }
  return out;
}

// Points drawn uniformly on the exponent lattice inside given cells, so cell
// membership is exact by construction.
PointSet<double> points_in_cells(std::mt19937_64& rng, const GridParams& params,
                                 const Offset& offset, const std::vector<CellKey>& cells,
                                 std::size_t per_cell,
                                 std::vector<std::size_t>* cell_of = nullptr) {
  PointSet<double> pts(params.d);
  std::vector<double> row(static_cast<std::size_t>(params.d));
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t t = 0; t < per_cell; ++t) {
      for (int i = 0; i < params.d; ++i) {
        const long long x_lo = params.tau * cells[c][static_cast<std::size_t>(i)] +
                               offset[static_cast<std::size_t>(i)] + 1;
        const long long region =
            x_lo +
            static_cast<long long>(rng() % static_cast<unsigned long long>(params.tau - 1));
        const long long s =
            region * params.lambda_exp +
            static_cast<long long>(rng() % static_cast<unsigned long long>(params.lambda_exp));
        row[static_cast<std::size_t>(i)] = params.pow_beta(s);
      }
      pts.add(std::span<const double>(row.data(), row.size()));
      if (cell_of) cell_of->push_back(c);
    }
  }
  return pts;
}

}  // namespace

TEST_CASE("grid parameters on the worked examples") {
  const auto p3 = grid_params(3, 0.5);
  CHECK(p3.tau == 7);         // smallest integer > 6
  CHECK(p3.lambda_exp == 8);  // beta = 2^{1/3}: 2^{7/3} <= 6 < 2^{8/3}

  const auto p2 = grid_params(2, 0.5);
  CHECK(p2.tau == 5);
  CHECK(p2.lambda_exp == 5);  // beta^4 = 4 is not > 4; beta^5 is

  CHECK_THROWS_AS(grid_params(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(grid_params(3, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(grid_params(0, 0.3), std::invalid_argument);
}

TEST_CASE("round_exponent: unit, exact powers, and the bracketing invariant") {
  const auto params = grid_params(3, 0.4);
  CHECK(round_exponent(1.0, params) == 0);
  for (long long s : {-23LL, -1LL, 0LL, 5LL, 17LL, 120LL}) {
    CHECK(round_exponent(params.pow_beta(s), params) == s);
  }

  std::mt19937_64 rng(21);
  const long double beta = powl(1.0L / (1.0L - 0.4L), 1.0L / 3.0L);
  for (int trial = 0; trial < 300; ++trial) {
    const double coord = std::exp((unit_uniform(rng) - 0.5) * 40.0);
    const long long s = round_exponent(coord, params);
    // High-precision logarithm oracle, with a band for boundary ties.
    const long double log_ratio = logl((long double)coord) / logl(beta);
    CHECK(s >= llroundl(floorl(log_ratio)) - 1);
    CHECK(s <= llroundl(floorl(log_ratio)) + 1);
    // The defining bracket under the comparator itself.
    CHECK(params.compare_pow(s, coord) <= 0);
    CHECK(params.compare_pow(s + 1, coord) > 0);
  }
}

TEST_CASE("region_index floors toward minus infinity") {
  GridParams params = grid_params(3, 0.5);
  REQUIRE(params.lambda_exp == 8);
  CHECK(region_index(0, params) == 0);
  CHECK(region_index(-1, params) == -1);
  CHECK(region_index(23, params) == 2);  // 16 <= 23 < 24
  CHECK(region_index(-8, params) == -1);
  CHECK(region_index(-9, params) == -2);
}

TEST_CASE("classify on the worked examples") {
  GridParams params = grid_params(3, 0.5);
  REQUIRE(params.tau == 7);
  const Offset zero{0, 0, 0};
  CHECK_FALSE(classify(std::vector<long long>{7, 3, 5}, zero, params).has_value());
  auto inner = classify(std::vector<long long>{1, 2, 3}, zero, params);
  REQUIRE(inner.has_value());
  CHECK(*inner == CellKey{0, 0, 0});
  auto far = classify(std::vector<long long>{8, 9, 13}, zero, params);
  REQUIRE(far.has_value());
  CHECK(*far == CellKey{1, 1, 1});  // spans regions tau*1+1 = 8 .. tau*2-1 = 13
}

TEST_CASE("cells and regions agree with direct lattice comparisons") {
  const auto params = grid_params(2, 0.5);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const double coord = std::exp((unit_uniform(rng) - 0.5) * 30.0);
    const long long s = round_exponent(coord, params);
    const long long x = region_index(s, params);
    // lambda^x <= coord < lambda^{x+1} via the exact comparator.
    CHECK(params.compare_pow(x * params.lambda_exp, coord) <= 0);
    CHECK(params.compare_pow((x + 1) * params.lambda_exp, coord) > 0);
    // The rounded point lands in the same region.
    CHECK(region_index(round_exponent(params.pow_beta(s), params), params) == x);
  }
}

TEST_CASE("boundary offsets per point match the counting identity") {
  const auto params = grid_params(2, 0.5);
  std::mt19937_64 rng(32);
  auto pts = oracles::random_float_set(rng, 6, 2, 1e6);
  const auto offsets = all_offsets(params);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    PointSet<double> single(2);
    single.add(pts[i]);
    long long boundary = 0;
    for (const auto& offset : offsets) {
      boundary += interior_points(single, offset, params).empty() ? 1 : 0;
    }
    const long long tau = params.tau;
    CHECK(boundary == tau * tau - (tau - 1) * (tau - 1));
  }
}

TEST_CASE("partition groups, deduplicates, and prunes") {
  const auto params = grid_params(2, 0.5);

  // Two points rounding to identical exponents collapse into one; a third
  // with dominated rounded exponents is pruned.
  PointSet<double> pts(2);
  const double a = params.pow_beta(30);
  pts.add({a * 1.0001, 5000.0});
  pts.add({a * 1.0002, 5000.0});
  pts.add({a * 1.0001, 4000.0});
  for (const auto& offset : all_offsets(params)) {
    const auto cells = partition_points(pts, offset, params);
    std::size_t total = 0;
    for (const auto& [key, cell] : cells) total += cell.size();
    if (!cells.empty()) {
      REQUIRE(cells.size() == 1);
      CHECK(total == 1);
      CHECK(cells.begin()->second.front().origin == 0);
    }
  }
}

TEST_CASE("per-cell distinct exponents respect the (tau-1)*j bound") {
  const auto params = grid_params(2, 0.5);
  std::mt19937_64 rng(33);
  auto pts = oracles::random_float_set(rng, 60, 2, 1e9);
  for (int t = 0; t < 5; ++t) {
    Offset offset{1 + static_cast<long long>(rng() % params.tau),
                  1 + static_cast<long long>(rng() % params.tau)};
    for (const auto& [key, cell] : partition_points(pts, offset, params)) {
      for (int c = 0; c < 2; ++c) {
        std::set<long long> distinct;
        for (const auto& ep : cell) distinct.insert(ep.exps[static_cast<std::size_t>(c)]);
        CHECK(distinct.size() <=
              static_cast<std::size_t>((params.tau - 1) * params.lambda_exp));
      }
    }
  }
}

TEST_CASE("pruning dominated rounded points preserves the cell tables") {
  const auto params = grid_params(2, 0.5);
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 25; ++trial) {
    auto pts = oracles::random_float_set(rng, 10, 2, 1e8);
    Offset offset{1 + static_cast<long long>(rng() % params.tau),
                  1 + static_cast<long long>(rng() % params.tau)};
    const auto pruned = partition_points(pts, offset, params, true);
    const auto raw = partition_points(pts, offset, params, false);
    REQUIRE(pruned.size() == raw.size());
    for (const auto& [key, cell] : pruned) {
      const auto& unpruned = raw.at(key);
      const auto row_a = solve_cell_exact(cell, 4, params, 25, CellPolicy::error);
      const auto row_b = solve_cell_exact(unpruned, 4, params, 25, CellPolicy::error);
      const std::size_t common = std::min(row_a.value.size(), row_b.value.size());
      for (std::size_t kp = 0; kp < common; ++kp) {
        CHECK(row_a.value[kp] == doctest::Approx(row_b.value[kp]).epsilon(1e-12));
      }
      // Beyond the pruned size the unpruned row must stay flat.
      for (std::size_t kp = common; kp < row_b.value.size(); ++kp) {
        CHECK(row_b.value[kp] == doctest::Approx(row_a.value.back()).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("solve_cell_exact: single point, nested chain, brute-force cross-check") {
  const auto params = grid_params(3, 0.5);
  {
    std::vector<ExponentPoint> cell{{{2, 3, 4}, 7}};
    const auto row = solve_cell_exact(cell, 5, params, 20, CellPolicy::error);
    REQUIRE(row.value.size() == 2);
    CHECK(row.value[0] == 0.0);
    const double expect = params.pow_beta(2) * params.pow_beta(3) * params.pow_beta(4);
    CHECK(row.value[1] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(row.witness[1] == std::vector<std::size_t>{0});
  }
  {
    // A dominance chain: every budget beyond one point adds nothing.
    std::vector<ExponentPoint> cell{{{1, 1, 1}, 0}, {{2, 2, 2}, 1}, {{3, 3, 3}, 2}};
    const auto row = solve_cell_exact(cell, 3, params, 20, CellPolicy::error);
    const double top = std::pow(params.pow_beta(3), 3);
    for (std::size_t kp = 1; kp <= 3; ++kp) {
      CHECK(row.value[kp] == doctest::Approx(top).epsilon(1e-12));
    }
  }
  {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<ExponentPoint> cell;
      const std::size_t n = 1 + rng() % 12;
      for (std::size_t i = 0; i < n; ++i) {
        cell.push_back(
            {{(long long)(rng() % 10), (long long)(rng() % 10), (long long)(rng() % 10)}, i});
      }
      // Deduplicate exponent vectors the way partition would.
      std::sort(cell.begin(), cell.end(), [](const auto& a, const auto& b) {
        return a.exps < b.exps || (a.exps == b.exps && a.origin < b.origin);
      });
      cell.erase(std::unique(cell.begin(), cell.end(),
                             [](const auto& a, const auto& b) { return a.exps == b.exps; }),
                 cell.end());
      const auto row = solve_cell_exact(cell, cell.size(), params, 20, CellPolicy::error);
      PointSet<double> pts(3);
      for (const auto& ep : cell) {
        pts.add({params.pow_beta(ep.exps[0]), params.pow_beta(ep.exps[1]),
                 params.pow_beta(ep.exps[2])});
      }
      for (std::size_t kp = 0; kp <= cell.size(); ++kp) {
        const auto ref = volsel_brute(pts, kp);
        CHECK(row.value[kp] == doctest::Approx(ref.value).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("solve_cell_exact cap policies") {
  const auto params = grid_params(2, 0.5);
  std::vector<ExponentPoint> cell;
  for (long long i = 0; i < 6; ++i) cell.push_back({{i, 20 - i}, static_cast<std::size_t>(i)});
  CHECK_THROWS_AS(solve_cell_exact(cell, 3, params, 4, CellPolicy::error), CellCapError);
  const auto row = solve_cell_exact(cell, 3, params, 4, CellPolicy::greedy_fallback);
  CHECK(row.fallback);
  REQUIRE(row.value.size() == 4);
  for (std::size_t kp = 1; kp < row.value.size(); ++kp) {
    CHECK(row.value[kp] >= row.value[kp - 1]);  // still monotone
  }
}

TEST_CASE("combine_dp against the exhaustive allocation oracle") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + rng() % 4;
    const std::size_t k = 1 + rng() % 6;
    std::vector<CellRow> rows(m);
    for (auto& row : rows) {
      const std::size_t len = 1 + rng() % 5;
      row.value.resize(len + 1, 0.0);
      row.witness.resize(len + 1);
      for (std::size_t i = 1; i <= len; ++i) {
        row.value[i] = row.value[i - 1] + unit_uniform(rng);
      }
    }
    std::vector<const CellRow*> ptrs;
    for (auto& row : rows) ptrs.push_back(&row);
    const auto alloc = combine_dp(ptrs, k);

    // Exhaustive allocations.
    double best = 0;
    std::vector<std::size_t> counter(m, 0);
    while (true) {
      std::size_t used = 0;
      double value = 0;
      for (std::size_t i = 0; i < m; ++i) {
        used += counter[i];
        value += rows[i].value[counter[i]];
      }
      if (used <= k) best = std::max(best, value);
      std::size_t pos = 0;
      while (pos < m) {
        if (++counter[pos] < rows[pos].value.size()) break;
        counter[pos] = 0;
        ++pos;
      }
      if (pos == m) break;
    }
    CHECK(alloc.value == doctest::Approx(best).epsilon(1e-12));
    std::size_t total = 0;
    for (std::size_t i = 0; i < m; ++i) {
      total += alloc.per_cell[i];
      REQUIRE(alloc.per_cell[i] < rows[i].value.size());
    }
    CHECK(total <= k);
  }
}

TEST_CASE("combine_dp trivial shapes") {
  CellRow row;
  row.value = {0.0, 2.0, 3.0};
  row.witness.resize(3);
  const auto single = combine_dp({&row}, 5);
  CHECK(single.value == 3.0);  // min(k, |cell|) caps the take

  CellRow other;
  other.value = {0.0, 4.0};
  other.witness.resize(2);
  const auto both = combine_dp({&row, &other}, 5);
  CHECK(both.value == 7.0);  // budget not binding: both maxima
  CHECK(combine_dp({}, 3).value == 0.0);
}

TEST_CASE("lemma suite: removing grid boundaries (both claims, eps = 0.5)") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 2 + (trial % 2);
    const auto params = grid_params(d, 0.5);
    const std::size_t n = 5 + rng() % 8;  // n <= 12
    auto pts = oracles::random_float_set(rng, n, d, 1e9);
    const std::size_t k = 1 + rng() % 4;
    const double opt = volsel_brute(pts, k).value;
    double best_offset_value = 0;
    for (const auto& offset : all_offsets(params)) {
      const auto kept = interior_points(pts, offset, params);
      const auto sub = pts.subset(kept);
      const double value = volsel_brute(sub, std::min(k, sub.size())).value;
      CHECK(value <= opt * (1 + 1e-9));  // removing points cannot help
      best_offset_value = std::max(best_offset_value, value);
    }
    CHECK(best_offset_value >= 0.5 * opt * (1 - 1e-9));  // some offset is good
  }
}

TEST_CASE("lemma suite: rounding down coordinates (eps = 0.5)") {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const auto params = grid_params(d, 0.5);
    const std::size_t n = 3 + rng() % 10;
    auto pts = oracles::random_float_set(rng, n, d, 1e6);
    const std::size_t k = 1 + rng() % std::min<std::size_t>(n, 4);
    const auto rounded = rounded_copy(pts, params);
    const double opt = volsel_brute(pts, k).value;
    const double rounded_opt = volsel_brute(rounded, k).value;
    CHECK(rounded_opt <= opt * (1 + 1e-9));
    CHECK(rounded_opt >= 0.5 * opt * (1 - 1e-9));
  }
}

TEST_CASE("lemma suite: treating subproblems as independent I (eps = 0.5)") {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const auto params = grid_params(d, 0.5);
    Offset offset(static_cast<std::size_t>(d));
    for (auto& l : offset) l = 1 + static_cast<long long>(rng() % params.tau);
    const std::size_t m = 2 + rng() % 3;
    std::vector<CellKey> keys;
    std::set<CellKey> seen;
    while (keys.size() < m) {
      CellKey key(static_cast<std::size_t>(d));
      for (auto& y : key) y = static_cast<long long>(rng() % 5) - 2;
      if (seen.insert(key).second) keys.push_back(key);
    }
    std::vector<std::size_t> cell_of;
    const auto pts = points_in_cells(rng, params, offset, keys, 1 + rng() % 3, &cell_of);

    double sum = 0;
    for (std::size_t c = 0; c < keys.size(); ++c) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < cell_of.size(); ++i) {
        if (cell_of[i] == c) members.push_back(i);
      }
      sum += hv_sweep(pts.subset(members));
    }
    const double whole = hv_sweep(pts);
    CHECK(whole <= sum * (1 + 1e-9));
    CHECK(whole >= 0.5 * sum * (1 - 1e-9));
  }
}

TEST_CASE("lemma suite: treating subproblems as independent II (eps = 0.5)") {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 2;
    const auto params = grid_params(d, 0.5);
    Offset offset{1 + static_cast<long long>(rng() % params.tau),
                  1 + static_cast<long long>(rng() % params.tau)};
    const std::size_t m = 2 + rng() % 2;
    std::vector<CellKey> keys;
    std::set<CellKey> seen;
    while (keys.size() < m) {
      CellKey key{static_cast<long long>(rng() % 5) - 2,
                  static_cast<long long>(rng() % 5) - 2};
      if (seen.insert(key).second) keys.push_back(key);
    }
    std::vector<std::size_t> cell_of;
    const auto pts = points_in_cells(rng, params, offset, keys, 2 + rng() % 2, &cell_of);
    const std::size_t k = 1 + rng() % 4;

    // max over k_1 + ... + k_m <= k of sum VolSel(P_i, k_i), exhaustively.
    std::vector<std::vector<std::size_t>> members(m);
    for (std::size_t i = 0; i < cell_of.size(); ++i) members[cell_of[i]].push_back(i);
    std::vector<std::vector<double>> table(m);
    for (std::size_t c = 0; c < m; ++c) {
      const auto sub = pts.subset(members[c]);
      for (std::size_t kp = 0; kp <= std::min(k, sub.size()); ++kp) {
        table[c].push_back(volsel_brute(sub, kp).value);
      }
    }
    double best_alloc = 0;
    std::vector<std::size_t> counter(m, 0);
    while (true) {
      std::size_t used = 0;
      double value = 0;
      for (std::size_t c = 0; c < m; ++c) {
        used += counter[c];
        value += table[c][counter[c]];
      }
      if (used <= k) best_alloc = std::max(best_alloc, value);
      std::size_t pos = 0;
      while (pos < m) {
        if (++counter[pos] < table[pos].size()) break;
        counter[pos] = 0;
        ++pos;
      }
      if (pos == m) break;
    }

    const double volsel = volsel_brute(pts, k).value;
    CHECK(volsel <= best_alloc * (1 + 1e-9));
    CHECK(volsel >= 0.5 * best_alloc * (1 - 1e-9));
  }
}

TEST_CASE("eptas end-to-end on small instances against brute force") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 2 + (trial % 2);
    const std::size_t n = 4 + rng() % 11;
    auto pts = oracles::random_float_set(rng, n, d, 1e7);
    const std::size_t k = 1 + rng() % 4;
    const double opt = volsel_brute(pts, k).value;
    const auto result = eptas_solve(pts, k, 0.5);
    CHECK(result.fallback_events == 0);
    CHECK(result.solution.indices.size() <= k);
    CHECK(result.solution.value ==
          doctest::Approx(hv_sweep(pts.subset(result.solution.indices))).epsilon(1e-12));
    CHECK(result.solution.value >= 0.5 * opt * (1 - 1e-9));
    CHECK(result.reported_value <= 1.5 * opt * (1 + 1e-9));
    // Reconstruction bound from the winning offset.
    CHECK(result.solution.value >=
          (1 - result.internal_eps) * result.reported_value * (1 - 1e-9));
    CHECK(result.solution.guarantee.kind == GuaranteeKind::eptas);
  }
}

TEST_CASE("eptas trivial cases and validation") {
  PointSet<double> pts(2);
  pts.add({2.0, 3.0});
  pts.add({3.0, 2.0});

  const auto zero = eptas_solve(pts, 0, 0.5);
  CHECK(zero.solution.indices.empty());
  CHECK(zero.solution.value == 0.0);
  CHECK(zero.reported_value == 0.0);

  // k >= |P|: everything lies in some cell for the winning offset.
  const auto all = eptas_solve(pts, 5, 0.5);
  CHECK(all.solution.value >= 0.5 * hv_sweep(pts));

  CHECK_THROWS_AS(eptas_solve(pts, 1, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(eptas_solve(pts, 1, 0.0), std::invalid_argument);
}

TEST_CASE("eptas is deterministic and reports the offset it chose") {
  std::mt19937_64 rng(72);
  auto pts = oracles::random_float_set(rng, 14, 2, 1e8);
  const auto a = eptas_solve(pts, 3, 0.4);
  const auto b = eptas_solve(pts, 3, 0.4);
  CHECK(a.solution.indices == b.solution.indices);
  CHECK(a.reported_value == b.reported_value);
  CHECK(a.chosen_offset == b.chosen_offset);
  REQUIRE(a.chosen_offset.size() == 2);
  const auto params = grid_params(2, a.internal_eps);
  for (long long l : a.chosen_offset) {
    CHECK(l >= 1);
    CHECK(l <= params.tau);
  }
  CHECK(a.internal_eps == doctest::Approx(0.4 / 5.0));
}

TEST_CASE("eptas cap policies surface in the result") {
  // Many points forced into one cell: a small spread keeps all exponents
  // close together.
  std::mt19937_64 rng(73);
  PointSet<double> pts(2);
  for (int i = 0; i < 30; ++i) {
    const double x = 1.0 + unit_uniform(rng) * 3.0;
    pts.add({x, 5.0 / x});
  }
  EptasConfig tight;
  tight.cell_cap = 4;
  tight.policy = CellPolicy::error;
  CHECK_THROWS_AS(eptas_solve(pts, 3, 0.5, tight), CellCapError);

  tight.policy = CellPolicy::greedy_fallback;
  const auto result = eptas_solve(pts, 3, 0.5, tight);
  CHECK(result.fallback_events > 0);
  CHECK(result.solution.guarantee.kind == GuaranteeKind::none);
  CHECK(result.solution.indices.size() <= 3);
}
