// NP-hardness instance generator and exact verifier.
//
// The gadget lives on two parallel planes: the lattice antichain
// P_m = { (x,y,z) integer, positive, x+y+z = m } and the shifted layer
// Q_m = { p + (eps,eps,eps) : p in P_{m-1} } with eps = 1/(4 m^2). Scaling
// every coordinate by sigma = 4 m^2 turns all coordinates and volumes into
// exact integers (sigma * eps = 1), so the strict inequalities of the
// reduction can be certified with integer arithmetic.
//
// Adding one q in Q_m on top of P_m gains exactly 3*sigma + 1 scaled volume;
// two gains overlap exactly when the corresponding vertices are adjacent in
// the triangular grid. An independent-set instance (A, ell) on the grid
// therefore maps to the volume-selection instance
//   P = P_m u Q_m(A),  k = |P_m| + ell,
//   V = mu(P_m) + ell * (3*sigma + 1).
#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "volsel/geometry.hpp"
#include "volsel/types.hpp"

namespace volsel {

using GammaVertex = std::pair<long long, long long>;  // (i, j) grid coordinates

// Adjacency in the infinite triangular grid: difference in
// {(+-1,0), (0,+-1), (1,-1), (-1,1)}.
bool gamma_adjacent(const GammaVertex& a, const GammaVertex& b);

struct TriGridVertexSet {
  std::vector<GammaVertex> vertices;
  std::size_t ell = 0;  // target independent-set size
};

inline long long hardness_scale(int m) { return 4LL * m * m; }

// Positive integer triples summing to m, scaled by sigma; (m-1)(m-2)/2 points.
PointSet<std::int64_t> gen_pm(int m);

// sigma * p + (1,1,1) for p in P_{m-1}; (m-2)(m-3)/2 points.
PointSet<std::int64_t> gen_qm(int m);

// Intersection graph of the marginal regions diff(q), q in Q_m, computed two
// ways: exactly from volumes, and from the conjectured lattice rule (two
// Q-points are adjacent when their (x, y) lattice coordinates are
// gamma-adjacent). The two edge sets are cross-checked in tests.
struct TmGraph {
  std::size_t vertex_count = 0;
  std::vector<GammaVertex> lattice;  // (x, y) lattice coordinates per Q-point
  std::set<std::pair<std::size_t, std::size_t>> oracle_edges;
  std::set<std::pair<std::size_t, std::size_t>> lattice_edges;
};

TmGraph build_tm(int m);

struct HardnessInstance {
  PointSet<std::int64_t> points{3};  // P_m followed by Q_m(A)
  std::size_t pm_count = 0;
  std::size_t k = 0;
  Int128 v_scaled = 0;
  int m = 0;
  long long scale = 0;
  std::size_t ell = 0;
  std::vector<GammaVertex> gamma_vertices;  // source vertex of each Q-point
};

// Embed an induced-grid vertex set: pick the smallest admissible m, translate
// A into the Q_m lattice triangle, and emit (P, k, V). Construction fails
// loudly if the geometric adjacency oracle disagrees with the grid adjacency
// of A (that would be a generator bug, not an input error).
HardnessInstance embed_instance(const TriGridVertexSet& a);

// mu(P_m) in scaled units: (m(m-1)(m-2)/6) * sigma^3.
Int128 pm_volume_formula(int m);

struct ReductionReport {
  std::size_t ell = 0;
  bool independent_yes = false;  // exhaustive search on gamma adjacency
  Int128 best_volume = 0;        // max over B subset A, |B| = ell
  Int128 threshold = 0;          // V_scaled
  bool volsel_yes = false;
  bool agree = false;
  std::uint64_t subsets_checked = 0;
};

// Two-sided exact check of the reduction, enumerating only Q-point subsets
// (any optimal solution must contain all of P_m).
ReductionReport verify_reduction(const HardnessInstance& inst,
                                 std::uint64_t subset_budget = 10'000'000);

}  // namespace volsel
