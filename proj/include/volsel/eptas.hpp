// Shifting-technique approximation scheme for volume selection.
//
// The positive orthant is split into multiplicative regions
// R(x) = prod [lambda^{x_i}, lambda^{x_i+1}) with lambda = beta^j and
// beta = (1 - eps)^{-1/d}. A grid cell is a (tau-1)^d block of regions and
// grid boundaries are one region thick. For every offset in [tau]^d the
// scheme drops boundary points, rounds coordinates down to powers of beta,
// solves each cell exhaustively, and splits the budget k across cells by
// dynamic programming; the best offset wins.
//
// All grid logic (rounding, region and cell membership, duplicate and
// domination pruning) runs on integer exponents of beta, so membership
// tests are exact; coordinates are materialized as beta^s only inside
// volume computations.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "volsel/geometry.hpp"
#include "volsel/solvers.hpp"
#include "volsel/types.hpp"

namespace volsel {

struct GridParams {
  int d = 0;
  double eps = 0.0;         // internal approximation parameter, in (0, 1/2]
  long long tau = 0;        // smallest integer > d/eps
  long long lambda_exp = 0; // smallest j with beta^j > d/eps

  // Sign of beta^s - x, with a tolerance band treating coordinates within
  // ~1e-14 relative of a lattice power as equal to it.
  int compare_pow(long long s, double x) const;

  // beta^s materialized as a double.
  double pow_beta(long long s) const;
};

GridParams grid_params(int d, double eps_internal);

// Largest s with beta^s <= coord (coordinates equal to a power map to it).
long long round_exponent(double coord, const GridParams& params);

// Region coordinate of an exponent: floor(s / j), floor toward -infinity.
long long region_index(long long s, const GridParams& params);

using Offset = std::vector<long long>;    // one entry per dimension, values in [1, tau]
using CellKey = std::vector<long long>;   // cell coordinates y

// Cell of a region vector under an offset, or nullopt when the region lies
// on a grid boundary (x_i congruent to l_i mod tau for some i).
std::optional<CellKey> classify(std::span<const long long> region, const Offset& offset,
                                const GridParams& params);

struct ExponentPoint {
  std::vector<long long> exps;  // rounded coordinate i is beta^{exps[i]}
  std::size_t origin = 0;       // index of one original point rounding here
};

using Partition = std::map<CellKey, std::vector<ExponentPoint>>;

// Indices of points that survive boundary removal for this offset.
std::vector<std::size_t> interior_points(const PointSet<double>& points, const Offset& offset,
                                         const GridParams& params);

// Drop boundary points, round the rest, group them by cell, collapse
// exponent duplicates (keeping the lowest origin), and optionally drop
// points whose rounded exponents are dominated within their cell.
Partition partition_points(const PointSet<double>& points, const Offset& offset,
                           const GridParams& params, bool prune_dominated = true);

enum class CellPolicy { error, greedy_fallback };

struct CellRow {
  std::vector<double> value;                      // value[k'] = VolSel(cell, k')
  std::vector<std::vector<std::size_t>> witness;  // positions into the cell list
  bool fallback = false;                          // row filled by greedy, not exactly
};

// Exact per-cell table via subset enumeration on materialized coordinates;
// above the cap either throws CellCapError or falls back to greedy.
CellRow solve_cell_exact(const std::vector<ExponentPoint>& cell, std::size_t k,
                         const GridParams& params, std::size_t cap, CellPolicy policy);

struct Allocation {
  double value = 0.0;                 // V(offset) = T[m][k]
  std::vector<std::size_t> per_cell;  // chosen k_i per cell, smallest-kappa ties
};

Allocation combine_dp(const std::vector<const CellRow*>& rows, std::size_t k);

struct EptasConfig {
  std::size_t cell_cap = 20;
  CellPolicy policy = CellPolicy::error;
};

struct EptasResult {
  Solution<double> solution;
  Offset chosen_offset;
  double reported_value = 0.0;  // max over offsets of V(offset)
  double user_eps = 0.0;
  double internal_eps = 0.0;
  std::size_t fallback_events = 0;
};

// Full pipeline. With no fallback events the output satisfies
//   mu(S) >= (1 - eps_user) * VolSel(P, k)  and
//   reported_value <= (1 + eps_user) * VolSel(P, k).
EptasResult eptas_solve(const PointSet<double>& points, std::size_t k, double eps_user,
                        const EptasConfig& config = {});

}  // namespace volsel
