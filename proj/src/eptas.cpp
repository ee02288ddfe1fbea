#include "volsel/eptas.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "volsel/hypervolume.hpp"

namespace volsel {

namespace {

// Integer power in extended precision by squaring; e may be negative.
long double pow_int(long double base, long long e) {
  const bool invert = e < 0;
  unsigned long long exp = invert ? static_cast<unsigned long long>(-e)
                                  : static_cast<unsigned long long>(e);
  long double result = 1.0L;
  long double acc = base;
  while (exp) {
    if (exp & 1ULL) result *= acc;
    acc *= acc;
    exp >>= 1;
  }
  return invert ? 1.0L / result : result;
}

constexpr long double kEqualBand = 1e-13L;

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long long mod_floor(long long a, long long b) { return a - floor_div(a, b) * b; }

}  // namespace

int GridParams::compare_pow(long long s, double x) const {
  // beta^s vs x  <=>  1 vs x^d * (1-eps)^s, both sides exact powers of
  // long doubles, evaluated by squaring.
  const long double t = pow_int(static_cast<long double>(x), d) *
                        pow_int(1.0L - static_cast<long double>(eps), s);
  if (t > 1.0L + kEqualBand) return -1;  // beta^s < x
  if (t < 1.0L - kEqualBand) return 1;   // beta^s > x
  return 0;
}

double GridParams::pow_beta(long long s) const {
  // beta^s = ((1-eps)^{-s})^{1/d}
  const long double a = 1.0L - static_cast<long double>(eps);
  return static_cast<double>(powl(pow_int(a, -s), 1.0L / d));
}

GridParams grid_params(int d, double eps_internal) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(eps_internal > 0.0 && eps_internal <= 0.5)) {
    throw std::invalid_argument("eps must be in (0, 1/2]");
  }
  GridParams params;
  params.d = d;
  params.eps = eps_internal;

  const double ratio = static_cast<double>(d) / eps_internal;
  params.tau = static_cast<long long>(std::floor(ratio)) + 1;

  const long double log_beta = -logl(1.0L - static_cast<long double>(eps_internal)) / d;
  long long j = std::max<long long>(1, llroundl(logl(static_cast<long double>(ratio)) / log_beta));
  while (j > 1 && params.compare_pow(j - 1, ratio) > 0) --j;
  while (params.compare_pow(j, ratio) <= 0) ++j;
  params.lambda_exp = j;
  return params;
}

long long round_exponent(double coord, const GridParams& params) {
  if (!(coord > 0)) throw std::invalid_argument("coordinates must be strictly positive");
  const long double log_beta = -logl(1.0L - static_cast<long double>(params.eps)) / params.d;
  long long s = llroundl(logl(static_cast<long double>(coord)) / log_beta);
  while (params.compare_pow(s, coord) > 0) --s;        // beta^s > coord: step down
  while (params.compare_pow(s + 1, coord) <= 0) ++s;   // beta^{s+1} <= coord: step up
  return s;
}

long long region_index(long long s, const GridParams& params) {
  return floor_div(s, params.lambda_exp);
}

std::optional<CellKey> classify(std::span<const long long> region, const Offset& offset,
                                const GridParams& params) {
  if (region.size() != offset.size()) throw std::invalid_argument("dimension mismatch");
  CellKey key(region.size());
  for (std::size_t i = 0; i < region.size(); ++i) {
    const long long rel = region[i] - offset[i];
    if (mod_floor(rel, params.tau) == 0) return std::nullopt;  // boundary region
    key[i] = floor_div(rel, params.tau);
  }
  return key;
}

namespace {

std::vector<std::vector<long long>> all_exponents(const PointSet<double>& points,
                                                  const GridParams& params) {
  std::vector<std::vector<long long>> exps(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto p = points[i];
    exps[i].resize(p.size());
    for (std::size_t c = 0; c < p.size(); ++c) exps[i][c] = round_exponent(p[c], params);
  }
  return exps;
}

std::vector<long long> region_of(std::span<const long long> exps, const GridParams& params) {
  std::vector<long long> region(exps.size());
  for (std::size_t c = 0; c < exps.size(); ++c) region[c] = region_index(exps[c], params);
  return region;
}

bool exp_dominates(const std::vector<long long>& a, const std::vector<long long>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
  }
  return true;
}

// Sort by exponent vector (then origin), collapse duplicates to the lowest
// origin, and optionally remove dominated exponent vectors.
std::vector<ExponentPoint> normalize_cell(std::vector<ExponentPoint> cell, bool prune) {
  std::sort(cell.begin(), cell.end(), [](const ExponentPoint& a, const ExponentPoint& b) {
    if (a.exps != b.exps) return a.exps < b.exps;
    return a.origin < b.origin;
  });
  cell.erase(std::unique(cell.begin(), cell.end(),
                         [](const ExponentPoint& a, const ExponentPoint& b) {
                           return a.exps == b.exps;
                         }),
             cell.end());
  if (!prune) return cell;
  std::vector<ExponentPoint> kept;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < cell.size() && !dominated; ++j) {
      dominated = j != i && exp_dominates(cell[j].exps, cell[i].exps);
    }
    if (!dominated) kept.push_back(cell[i]);
  }
  return kept;
}

}  // namespace

std::vector<std::size_t> interior_points(const PointSet<double>& points, const Offset& offset,
                                         const GridParams& params) {
  if (static_cast<int>(offset.size()) != points.dim()) {
    throw std::invalid_argument("offset dimension mismatch");
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto p = points[i];
    std::vector<long long> region(p.size());
    for (std::size_t c = 0; c < p.size(); ++c) {
      region[c] = region_index(round_exponent(p[c], params), params);
    }
    if (classify(region, offset, params)) kept.push_back(i);
  }
  return kept;
}

Partition partition_points(const PointSet<double>& points, const Offset& offset,
                           const GridParams& params, bool prune_dominated) {
  if (static_cast<int>(offset.size()) != points.dim()) {
    throw std::invalid_argument("offset dimension mismatch");
  }
  const auto exps = all_exponents(points, params);
  Partition cells;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto region = region_of(exps[i], params);
    if (auto key = classify(region, offset, params)) {
      cells[*key].push_back(ExponentPoint{exps[i], i});
    }
  }
  for (auto& [key, cell] : cells) cell = normalize_cell(std::move(cell), prune_dominated);
  return cells;
}

namespace {

PointSet<double> materialize(const std::vector<ExponentPoint>& cell, const GridParams& params) {
  if (cell.empty()) return PointSet<double>(params.d);
  PointSet<double> pts(params.d);
  std::vector<double> coords(static_cast<std::size_t>(params.d));
  for (const auto& ep : cell) {
    for (std::size_t c = 0; c < ep.exps.size(); ++c) coords[c] = params.pow_beta(ep.exps[c]);
    pts.add(std::span<const double>(coords.data(), coords.size()));
  }
  return pts;
}

// Greedy prefixes fill the whole row in one pass: the value after each pick
// is the row entry for that budget. Lazy evaluation as in volsel_greedy.
// Used only above the exhaustive cap.
CellRow greedy_row(const PointSet<double>& pts, std::size_t kmax) {
  CellRow row;
  row.fallback = true;
  row.value.assign(kmax + 1, 0.0);
  row.witness.assign(kmax + 1, {});

  struct Entry {
    double gain;
    std::size_t index;
    std::size_t round;
    bool operator<(const Entry& other) const {
      if (gain != other.gain) return gain < other.gain;
      return index > other.index;
    }
  };
  std::priority_queue<Entry> heap;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    heap.push({box_volume<double>(pts[i]), i, 0});
  }

  PointSet<double> prefix(pts.dim());
  std::vector<std::size_t> chosen;
  double value = 0.0;
  std::size_t step = 0;
  while (step < kmax && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.round != step) {
      top.gain = hv_contribution(prefix, pts[top.index]);
      top.round = step;
      heap.push(top);
      continue;
    }
    if (top.gain <= 0.0) break;
    prefix.add(pts[top.index]);
    chosen.push_back(top.index);
    value += top.gain;
    ++step;
    row.value[step] = value;
    row.witness[step] = chosen;
    std::sort(row.witness[step].begin(), row.witness[step].end());
  }
  for (std::size_t kp = step + 1; kp <= kmax; ++kp) {
    row.value[kp] = row.value[step];
    row.witness[kp] = row.witness[step];
  }
  return row;
}

}  // namespace

CellRow solve_cell_exact(const std::vector<ExponentPoint>& cell, std::size_t k,
                         const GridParams& params, std::size_t cap, CellPolicy policy) {
  const std::size_t kmax = std::min(k, cell.size());
  const PointSet<double> pts = materialize(cell, params);
  if (cell.size() > cap) {
    if (policy == CellPolicy::error) {
      throw CellCapError("cell of " + std::to_string(cell.size()) +
                         " points exceeds exhaustive-solve cap " + std::to_string(cap));
    }
    return greedy_row(pts, kmax);
  }
  auto bests = subset_bests(pts, kmax, std::uint64_t{1} << std::min<std::size_t>(cell.size(), 63));
  CellRow row;
  row.value = std::move(bests.value);
  row.witness = std::move(bests.witness);
  row.fallback = false;
  return row;
}

Allocation combine_dp(const std::vector<const CellRow*>& rows, std::size_t k) {
  const std::size_t m = rows.size();
  std::vector<std::vector<double>> table(m + 1, std::vector<double>(k + 1, 0.0));
  std::vector<std::vector<std::size_t>> choice(m + 1, std::vector<std::size_t>(k + 1, 0));
  for (std::size_t i = 1; i <= m; ++i) {
    const auto& row = *rows[i - 1];
    for (std::size_t kp = 0; kp <= k; ++kp) {
      double best = -1.0;
      std::size_t best_kappa = 0;
      const std::size_t kappa_max = std::min(kp, row.value.size() - 1);
      for (std::size_t kappa = 0; kappa <= kappa_max; ++kappa) {
        const double cand = row.value[kappa] + table[i - 1][kp - kappa];
        if (cand > best) {
          best = cand;
          best_kappa = kappa;
        }
      }
      table[i][kp] = best;
      choice[i][kp] = best_kappa;
    }
  }
  Allocation alloc;
  alloc.value = table[m][k];
  alloc.per_cell.assign(m, 0);
  std::size_t remaining = k;
  for (std::size_t i = m; i >= 1; --i) {
    alloc.per_cell[i - 1] = choice[i][remaining];
    remaining -= alloc.per_cell[i - 1];
  }
  return alloc;
}

namespace {

// One offset evaluation over precomputed per-point regions: group interior
// points by cell and hand back normalized cells in deterministic key order.
struct OffsetCells {
  std::vector<CellKey> keys;
  std::vector<std::vector<ExponentPoint>> cells;
};

OffsetCells collect_cells(const std::vector<std::vector<long long>>& exps,
                          const std::vector<std::vector<long long>>& regions,
                          const Offset& offset, const GridParams& params) {
  std::map<CellKey, std::vector<ExponentPoint>> grouped;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (auto key = classify(regions[i], offset, params)) {
      grouped[*key].push_back(ExponentPoint{exps[i], i});
    }
  }
  OffsetCells out;
  out.keys.reserve(grouped.size());
  out.cells.reserve(grouped.size());
  for (auto& [key, cell] : grouped) {
    out.keys.push_back(key);
    out.cells.push_back(normalize_cell(std::move(cell), true));
  }
  return out;
}

std::vector<long long> content_key(const std::vector<ExponentPoint>& cell) {
  std::vector<long long> key;
  key.reserve(cell.size() * (cell.empty() ? 0 : cell.front().exps.size()));
  for (const auto& ep : cell) key.insert(key.end(), ep.exps.begin(), ep.exps.end());
  return key;
}

}  // namespace

EptasResult eptas_solve(const PointSet<double>& points, std::size_t k, double eps_user,
                        const EptasConfig& config) {
  if (!(eps_user > 0.0 && eps_user <= 0.5)) {
    throw std::invalid_argument("eps must be in (0, 1/2]");
  }
  const int d = points.dim();
  const double eps_internal = eps_user / 5.0;
  const GridParams params = grid_params(d, eps_internal);

  EptasResult result;
  result.user_eps = eps_user;
  result.internal_eps = eps_internal;
  result.chosen_offset.assign(static_cast<std::size_t>(d), 1);

  // Dominated points never help any solver, and VolSel is invariant under
  // Pareto filtering, so the whole pipeline runs on the filtered front.
  const Filtered<double> front = pareto_filter(points);
  const std::size_t kk = std::min(k, front.points.size());

  const auto exps = all_exponents(front.points, params);
  std::vector<std::vector<long long>> regions(exps.size());
  for (std::size_t i = 0; i < exps.size(); ++i) regions[i] = region_of(exps[i], params);

  std::map<std::vector<long long>, CellRow> row_cache;
  auto row_for = [&](const std::vector<ExponentPoint>& cell) -> const CellRow& {
    auto key = content_key(cell);
    auto it = row_cache.find(key);
    if (it == row_cache.end()) {
      it = row_cache.emplace(std::move(key),
                             solve_cell_exact(cell, kk, params, config.cell_cap, config.policy))
               .first;
    }
    return it->second;
  };

  double best_value = -1.0;
  Offset best_offset;

  Offset offset(static_cast<std::size_t>(d), 1);
  bool done = false;
  while (!done) {
    const OffsetCells cells = collect_cells(exps, regions, offset, params);
    std::vector<const CellRow*> rows;
    rows.reserve(cells.cells.size());
    for (const auto& cell : cells.cells) {
      const CellRow& row = row_for(cell);
      if (row.fallback) ++result.fallback_events;
      rows.push_back(&row);
    }
    const Allocation alloc = combine_dp(rows, kk);
    if (alloc.value > best_value) {
      best_value = alloc.value;
      best_offset = offset;
    }

    // Odometer over [1, tau]^d in lexicographic order (last dim fastest), so
    // ties on the value keep the lexicographically smallest offset.
    int pos = d - 1;
    while (pos >= 0) {
      if (++offset[static_cast<std::size_t>(pos)] <= params.tau) break;
      offset[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    done = pos < 0;
  }

  // Reconstruct the output set for the winning offset from cached rows.
  const OffsetCells cells = collect_cells(exps, regions, best_offset, params);
  std::vector<const CellRow*> rows;
  rows.reserve(cells.cells.size());
  for (const auto& cell : cells.cells) rows.push_back(&row_for(cell));
  const Allocation alloc = combine_dp(rows, kk);

  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < cells.cells.size(); ++i) {
    for (std::size_t pos : rows[i]->witness[alloc.per_cell[i]]) {
      indices.push_back(front.original[cells.cells[i][pos].origin]);
    }
  }
  std::sort(indices.begin(), indices.end());

  result.reported_value = best_value < 0 ? 0.0 : best_value;
  result.chosen_offset = best_offset;
  result.solution.value = hv_sweep(points.subset(indices));
  result.solution.indices = std::move(indices);
  result.solution.algorithm = "eptas";
  result.solution.guarantee =
      result.fallback_events == 0 ? Guarantee::eptas(eps_user) : Guarantee::none();
  return result;
}

}  // namespace volsel
