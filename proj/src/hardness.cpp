#include "volsel/hardness.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <string>

#include "volsel/hypervolume.hpp"

namespace volsel {

namespace {

constexpr int kMaxM = 50;  // 128-bit volume accumulation is ample up to here

void check_m(int m, int lower) {
  if (m < lower) {
    throw std::invalid_argument("m must be at least " + std::to_string(lower));
  }
  if (m > kMaxM) {
    throw std::invalid_argument("m must be at most " + std::to_string(kMaxM));
  }
}

constexpr std::array<GammaVertex, 6> kGammaMoves = {
    GammaVertex{1, 0},  GammaVertex{-1, 0}, GammaVertex{0, 1},
    GammaVertex{0, -1}, GammaVertex{1, -1}, GammaVertex{-1, 1}};

}  // namespace

bool gamma_adjacent(const GammaVertex& a, const GammaVertex& b) {
  const GammaVertex diff{a.first - b.first, a.second - b.second};
  return std::find(kGammaMoves.begin(), kGammaMoves.end(), diff) != kGammaMoves.end();
}

PointSet<std::int64_t> gen_pm(int m) {
  check_m(m, 3);
  const std::int64_t sigma = hardness_scale(m);
  PointSet<std::int64_t> pts(3);
  for (std::int64_t x = 1; x <= m - 2; ++x) {
    for (std::int64_t y = 1; y <= m - 1 - x; ++y) {
      const std::int64_t z = m - x - y;
      pts.add({x * sigma, y * sigma, z * sigma});
    }
  }
  return pts;
}

PointSet<std::int64_t> gen_qm(int m) {
  check_m(m, 4);
  const std::int64_t sigma = hardness_scale(m);
  PointSet<std::int64_t> pts(3);
  for (std::int64_t x = 1; x <= m - 3; ++x) {
    for (std::int64_t y = 1; y <= m - 2 - x; ++y) {
      const std::int64_t z = (m - 1) - x - y;
      pts.add({x * sigma + 1, y * sigma + 1, z * sigma + 1});
    }
  }
  return pts;
}

Int128 pm_volume_formula(int m) {
  const Int128 sigma = hardness_scale(m);
  const Int128 tetra = Int128(m) * (m - 1) * (m - 2) / 6;
  return tetra * sigma * sigma * sigma;
}

namespace {

PointSet<std::int64_t> with_extra(const PointSet<std::int64_t>& base,
                                  std::span<const std::int64_t> q) {
  PointSet<std::int64_t> out = base;
  out.add(q);
  return out;
}

PointSet<std::int64_t> with_extra2(const PointSet<std::int64_t>& base,
                                   std::span<const std::int64_t> q1,
                                   std::span<const std::int64_t> q2) {
  PointSet<std::int64_t> out = base;
  out.add(q1);
  out.add(q2);
  return out;
}

// vol(diff(q) n diff(q')) = mu(P u q) + mu(P u q') - mu(P) - mu(P u {q, q'})
bool diffs_intersect(const PointSet<std::int64_t>& pm, Int128 mu_pm, Int128 mu_q1, Int128 mu_q2,
                     std::span<const std::int64_t> q1, std::span<const std::int64_t> q2) {
  const Int128 mu_both = hv_sweep(with_extra2(pm, q1, q2));
  return mu_q1 + mu_q2 - mu_pm - mu_both > 0;
}

GammaVertex lattice_coords(std::span<const std::int64_t> q, std::int64_t sigma) {
  return {(q[0] - 1) / sigma, (q[1] - 1) / sigma};
}

}  // namespace

TmGraph build_tm(int m) {
  check_m(m, 4);
  const std::int64_t sigma = hardness_scale(m);
  const PointSet<std::int64_t> pm = gen_pm(m);
  const PointSet<std::int64_t> qm = gen_qm(m);

  TmGraph graph;
  graph.vertex_count = qm.size();
  const Int128 mu_pm = hv_sweep(pm);
  std::vector<Int128> mu_single(qm.size());
  for (std::size_t i = 0; i < qm.size(); ++i) {
    mu_single[i] = hv_sweep(with_extra(pm, qm[i]));
    graph.lattice.push_back(lattice_coords(qm[i], sigma));
  }
  for (std::size_t i = 0; i < qm.size(); ++i) {
    for (std::size_t j = i + 1; j < qm.size(); ++j) {
      if (diffs_intersect(pm, mu_pm, mu_single[i], mu_single[j], qm[i], qm[j])) {
        graph.oracle_edges.insert({i, j});
      }
      if (gamma_adjacent(graph.lattice[i], graph.lattice[j])) {
        graph.lattice_edges.insert({i, j});
      }
    }
  }
  return graph;
}

HardnessInstance embed_instance(const TriGridVertexSet& a) {
  if (a.vertices.empty()) throw std::invalid_argument("vertex set must be nonempty");
  if (a.ell == 0 || a.ell > a.vertices.size()) {
    throw std::invalid_argument("ell must be in [1, |A|]");
  }
  {
    std::set<GammaVertex> dedup(a.vertices.begin(), a.vertices.end());
    if (dedup.size() != a.vertices.size()) {
      throw std::invalid_argument("vertex set contains duplicates");
    }
  }

  // Translate A so lattice coordinates start at 1, then size m so the
  // translated set fits strictly inside the Q_m lattice triangle.
  long long min_i = a.vertices.front().first, min_j = a.vertices.front().second;
  for (const auto& v : a.vertices) {
    min_i = std::min(min_i, v.first);
    min_j = std::min(min_j, v.second);
  }
  std::vector<GammaVertex> shifted;
  long long max_sum = 0, max_j = 0;
  for (const auto& v : a.vertices) {
    shifted.emplace_back(v.first - min_i + 1, v.second - min_j + 1);
    max_sum = std::max(max_sum, shifted.back().first + shifted.back().second);
    max_j = std::max(max_j, shifted.back().second);
  }
  const long long m_ll = max_sum + max_j + 5;
  if (m_ll > kMaxM) {
    throw std::invalid_argument("vertex set needs m = " + std::to_string(m_ll) +
                                ", beyond the supported m <= " + std::to_string(kMaxM));
  }
  const int m = static_cast<int>(m_ll);
  const std::int64_t sigma = hardness_scale(m);

  HardnessInstance inst;
  inst.m = m;
  inst.scale = sigma;
  inst.ell = a.ell;
  inst.points = gen_pm(m);
  inst.pm_count = inst.points.size();
  inst.k = inst.pm_count + a.ell;
  inst.v_scaled = pm_volume_formula(m) + Int128(a.ell) * (3 * Int128(sigma) + 1);

  // Deterministic Q-point order: sort the original vertices lexicographically.
  std::vector<std::size_t> order(a.vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a.vertices[x] < a.vertices[y];
  });
  for (std::size_t idx : order) {
    const auto [i, j] = shifted[idx];
    const std::int64_t z = (m - 1) - i - j;
    if (z < 1) throw std::logic_error("embedding left the lattice triangle");
    inst.points.add({i * sigma + 1, j * sigma + 1, z * sigma + 1});
    inst.gamma_vertices.push_back(a.vertices[idx]);
  }

  // Adjacency preservation: the geometric oracle on the embedded Q-points
  // must agree with gamma adjacency of the source vertices.
  const PointSet<std::int64_t> pm = gen_pm(m);
  const Int128 mu_pm = hv_sweep(pm);
  std::vector<Int128> mu_single(a.vertices.size());
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    mu_single[i] = hv_sweep(with_extra(pm, inst.points[inst.pm_count + i]));
  }
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < a.vertices.size(); ++j) {
      const bool geometric =
          diffs_intersect(pm, mu_pm, mu_single[i], mu_single[j],
                          inst.points[inst.pm_count + i], inst.points[inst.pm_count + j]);
      const bool grid = gamma_adjacent(inst.gamma_vertices[i], inst.gamma_vertices[j]);
      if (geometric != grid) {
        throw std::logic_error("embedding does not preserve adjacency");
      }
    }
  }
  return inst;
}

namespace {

// Enumerate size-ell subsets of [n], calling visit(subset); returns false if
// the count would exceed the budget.
template <class Visit>
bool for_each_subset(std::size_t n, std::size_t ell, std::uint64_t budget, Visit&& visit) {
  if (ell > n) return true;  // no subsets of that size
  std::uint64_t count = 1;
  for (std::size_t s = 0; s < ell; ++s) {
    count = count * (n - s) / (s + 1);
    if (count > budget) return false;
  }
  std::vector<std::size_t> subset(ell);
  for (std::size_t i = 0; i < ell; ++i) subset[i] = i;
  while (true) {
    visit(subset);
    std::size_t pos = ell;
    while (pos > 0 && subset[pos - 1] == n - ell + pos - 1) --pos;
    if (pos == 0) break;
    ++subset[pos - 1];
    for (std::size_t i = pos; i < ell; ++i) subset[i] = subset[i - 1] + 1;
  }
  return true;
}

}  // namespace

ReductionReport verify_reduction(const HardnessInstance& inst, std::uint64_t subset_budget) {
  ReductionReport report;
  report.ell = inst.ell;
  report.threshold = inst.v_scaled;
  const std::size_t n = inst.gamma_vertices.size();
  if (inst.ell > n) throw std::invalid_argument("instance ell exceeds vertex count");

  // Independent-set side, exhaustively on gamma adjacency.
  bool independent = false;
  const bool within_budget = for_each_subset(
      n, inst.ell, subset_budget, [&](const std::vector<std::size_t>& subset) {
        ++report.subsets_checked;
        if (independent) return;
        for (std::size_t x = 0; x < subset.size(); ++x) {
          for (std::size_t y = x + 1; y < subset.size(); ++y) {
            if (gamma_adjacent(inst.gamma_vertices[subset[x]],
                               inst.gamma_vertices[subset[y]])) {
              return;
            }
          }
        }
        independent = true;
      });
  if (!within_budget) throw BudgetError("reduction verification budget exceeded");
  report.independent_yes = independent;

  // Volume-selection side: any solution reaching V must contain all of P_m,
  // so maximize over the Q-point subsets only.
  PointSet<std::int64_t> base(3);
  for (std::size_t i = 0; i < inst.pm_count; ++i) base.add(inst.points[i]);
  Int128 best = -1;
  for_each_subset(n, inst.ell, subset_budget, [&](const std::vector<std::size_t>& subset) {
    PointSet<std::int64_t> candidate = base;
    for (std::size_t idx : subset) candidate.add(inst.points[inst.pm_count + idx]);
    best = std::max(best, hv_sweep(candidate));
  });
  report.best_volume = best;
  report.volsel_yes = best >= inst.v_scaled;
  report.agree = report.volsel_yes == report.independent_yes;
  return report;
}

}  // namespace volsel
