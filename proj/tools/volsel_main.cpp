// volsel: command-line frontend for volume selection over anchored boxes.
//
// Subcommands: gen, hv, solve, bench, verify. Exit codes: 0 success,
// 2 usage error, 3 solver budget/cap exceeded, 4 input parse failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "volsel/eptas.hpp"
#include "volsel/geometry.hpp"
#include "volsel/hardness.hpp"
#include "volsel/hypervolume.hpp"
#include "volsel/random_points.hpp"
#include "volsel/solvers.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace volsel;

constexpr int kSchemaVersion = 1;

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string mode = "float";
  std::string output;
  bool stable_timing = false;  // report elapsed_ms as 0 for byte-stable records
};

void write_output(const GlobalOpts& global, const std::string& payload) {
  if (global.output.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(global.output, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file '" + global.output + "'");
  out << payload;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  std::int64_t elapsed_ms() const {
    const auto now = std::chrono::steady_clock::now();
    return std::chrono::duration_cast<std::chrono::milliseconds>(now - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json volume_to_json(double v) { return v; }
json volume_to_json(Int128 v) { return to_string(v); }

std::string volume_to_text(double v) { return format_double(v); }
std::string volume_to_text(Int128 v) { return to_string(v); }

json guarantee_to_json(const Guarantee& g) {
  json out;
  out["kind"] = guarantee_name(g.kind);
  out["param"] = g.param;
  return out;
}

std::vector<GammaVertex> read_gamma_vertices(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(0, "cannot open '" + path + "'");
  std::vector<GammaVertex> vertices;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (char& c : line) {
      if (c == ',' || c == '\t') c = ' ';
    }
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;  // blank line
    if (first[0] == '#' && line_no == 1) continue;
    long long i = 0, j = 0;
    try {
      i = std::stoll(first);
    } catch (const std::exception&) {
      throw CsvError(line_no, "expected an integer, got '" + first + "'");
    }
    if (!(fields >> j)) throw CsvError(line_no, "expected two integers per line");
    std::string rest;
    if (fields >> rest) throw CsvError(line_no, "trailing content '" + rest + "'");
    vertices.push_back({i, j});
  }
  if (vertices.empty()) throw CsvError(line_no, "no vertices in input");
  return vertices;
}

// ---------------------------------------------------------------- gen ----

struct GenRandomOpts {
  std::size_t n = 0;
  int d = 3;
  double spread = 1e6;
};

void cmd_gen_random(const GlobalOpts& global, const GenRandomOpts& opts) {
  if (global.mode != "float") {
    throw std::invalid_argument("gen random supports float mode only");
  }
  const auto pts = gen_log_uniform(opts.n, opts.d, opts.spread, global.seed);
  std::ostringstream out;
  write_points_csv(out, pts);
  write_output(global, out.str());
}

struct GenHardnessOpts {
  std::string gamma_file;
  std::size_t ell = 1;
};

void cmd_gen_hardness(const GlobalOpts& global, const GenHardnessOpts& opts) {
  if (global.output.empty()) {
    throw std::invalid_argument("gen hardness requires --output (sidecar goes to <output>.json)");
  }
  TriGridVertexSet a{read_gamma_vertices(opts.gamma_file), opts.ell};
  const HardnessInstance inst = embed_instance(a);

  std::ostringstream csv;
  write_points_csv(csv, inst.points);
  write_output(global, csv.str());

  json sidecar;
  sidecar["schema_version"] = kSchemaVersion;
  sidecar["m"] = inst.m;
  sidecar["k"] = inst.k;
  sidecar["v_scaled"] = to_string(inst.v_scaled);
  sidecar["scale"] = inst.scale;
  sidecar["ell"] = inst.ell;
  sidecar["pm_count"] = inst.pm_count;
  json mapping = json::array();
  for (std::size_t q = 0; q < inst.gamma_vertices.size(); ++q) {
    json entry;
    entry["point_index"] = inst.pm_count + q;
    entry["i"] = inst.gamma_vertices[q].first;
    entry["j"] = inst.gamma_vertices[q].second;
    mapping.push_back(entry);
  }
  sidecar["mapping"] = mapping;
  std::ofstream side(global.output + ".json", std::ios::binary);
  if (!side) throw std::invalid_argument("cannot open sidecar '" + global.output + ".json'");
  side << sidecar.dump(2) << '\n';
}

// ----------------------------------------------------------------- hv ----

struct HvOpts {
  std::string input;
  std::string engine = "sweep";
  std::string indices;
  double eps = 0.1;
  double delta = 0.01;
};

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> indices;
  std::istringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    try {
      indices.push_back(static_cast<std::size_t>(std::stoull(field)));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad index '" + field + "'");
    }
  }
  return indices;
}

template <class T>
json hv_payload(const GlobalOpts& global, const HvOpts& opts) {
  auto pts = read_points_csv_file<T>(opts.input);
  if (!opts.indices.empty()) {
    const auto list = parse_index_list(opts.indices);
    for (std::size_t i : list) {
      if (i >= pts.size()) throw std::invalid_argument("index out of range: " + std::to_string(i));
    }
    pts = pts.subset(list);
  }
  json out;
  out["schema_version"] = kSchemaVersion;
  out["engine"] = opts.engine;
  out["n"] = pts.size();
  out["d"] = pts.dim();
  if (opts.engine == "sweep") {
    out["volume"] = volume_to_json(hv_sweep(pts));
  } else if (opts.engine == "ie") {
    out["volume"] = volume_to_json(hv_inclusion_exclusion(pts));
  } else {
    if constexpr (VolumeTraits<T>::is_exact) {
      throw std::invalid_argument("the estimate engine requires float mode");
    } else {
      out["volume"] = hv_estimate(pts, {opts.eps, opts.delta, global.seed, 8.0});
      out["eps"] = opts.eps;
      out["delta"] = opts.delta;
      out["seed"] = global.seed;
    }
  }
  return out;
}

void cmd_hv(const GlobalOpts& global, const HvOpts& opts) {
  const json out = global.mode == "exact" ? hv_payload<std::int64_t>(global, opts)
                                          : hv_payload<double>(global, opts);
  write_output(global, out.dump(2) + "\n");
}

// -------------------------------------------------------------- solve ----

struct SolveOpts {
  std::string input;
  std::string algo;
  std::size_t k = 0;
  double eps = 0.5;
  std::size_t cell_cap = 20;
  std::string fallback = "error";
  std::uint64_t budget = 10'000'000;
};

template <class T>
json solve_payload(const GlobalOpts& global, const SolveOpts& opts, const PointSet<T>& pts) {
  json record;
  record["schema_version"] = kSchemaVersion;
  record["algorithm"] = opts.algo;
  record["n"] = pts.size();
  record["d"] = pts.dim();
  record["k"] = opts.k;

  Timer timer;
  Solution<T> solution;
  json extra;
  if (opts.algo == "brute") {
    solution = volsel_brute(pts, opts.k, {opts.budget});
  } else if (opts.algo == "exact2d") {
    solution = volsel_exact_2d(pts, opts.k);
  } else if (opts.algo == "greedy") {
    solution = volsel_greedy(pts, opts.k);
  } else {
    if constexpr (VolumeTraits<T>::is_exact) {
      throw std::invalid_argument("eptas requires float mode");
    } else {
      EptasConfig config;
      config.cell_cap = opts.cell_cap;
      config.policy =
          opts.fallback == "greedy" ? CellPolicy::greedy_fallback : CellPolicy::error;
      const EptasResult result = eptas_solve(pts, opts.k, opts.eps, config);
      solution = result.solution;
      record["eps"] = opts.eps;
      extra["chosen_offset"] = result.chosen_offset;
      extra["internal_eps"] = result.internal_eps;
      extra["reported_value"] = result.reported_value;
      extra["fallback_events"] = result.fallback_events;
    }
  }
  const std::int64_t elapsed = global.stable_timing ? 0 : timer.elapsed_ms();

  record["value"] = volume_to_json(solution.value);
  record["indices"] = solution.indices;
  record["elapsed_ms"] = elapsed;
  record["seed"] = global.seed;
  record["guarantee"] = guarantee_to_json(solution.guarantee);
  for (auto& [key, value] : extra.items()) record[key] = value;
  return record;
}

void cmd_solve(const GlobalOpts& global, const SolveOpts& opts) {
  json record;
  if (global.mode == "exact") {
    const auto pts = read_points_csv_file<std::int64_t>(opts.input);
    record = solve_payload(global, opts, pts);
  } else {
    const auto pts = read_points_csv_file<double>(opts.input);
    record = solve_payload(global, opts, pts);
  }
  write_output(global, record.dump(2) + "\n");
}

// -------------------------------------------------------------- bench ----

struct BenchOpts {
  std::vector<std::string> inputs;
  std::vector<std::string> algos;
  std::vector<std::size_t> ks;
  double eps = 0.5;
  std::size_t cell_cap = 20;
  std::uint64_t budget = 10'000'000;
};

template <class T>
void bench_file(const GlobalOpts& global, const BenchOpts& opts, const std::string& file,
                std::ostringstream& out) {
  const auto pts = read_points_csv_file<T>(file);
  for (std::size_t k : opts.ks) {
    struct Row {
      std::string algo;
      std::string value_text;
      double value_num = 0.0;
      std::int64_t elapsed = 0;
      Guarantee guarantee;
      std::size_t fallback_events = 0;
      bool has_eps = false;
    };
    std::vector<Row> rows;
    for (const std::string& algo : opts.algos) {
      Timer timer;
      Row row;
      row.algo = algo;
      try {
        if (algo == "brute") {
          const auto s = volsel_brute(pts, k, {opts.budget});
          row.value_num = static_cast<double>(s.value);
          row.value_text = volume_to_text(s.value);
          row.guarantee = s.guarantee;
        } else if (algo == "exact2d") {
          const auto s = volsel_exact_2d(pts, k);
          row.value_num = static_cast<double>(s.value);
          row.value_text = volume_to_text(s.value);
          row.guarantee = s.guarantee;
        } else if (algo == "greedy") {
          const auto s = volsel_greedy(pts, k);
          row.value_num = static_cast<double>(s.value);
          row.value_text = volume_to_text(s.value);
          row.guarantee = s.guarantee;
        } else if (algo == "eptas") {
          if constexpr (VolumeTraits<T>::is_exact) {
            throw std::invalid_argument("eptas requires float mode");
          } else {
            EptasConfig config;
            config.cell_cap = opts.cell_cap;
            const auto result = eptas_solve(pts, k, opts.eps, config);
            row.value_num = result.solution.value;
            row.value_text = volume_to_text(result.solution.value);
            row.guarantee = result.solution.guarantee;
            row.fallback_events = result.fallback_events;
            row.has_eps = true;
          }
        } else {
          throw std::invalid_argument("unknown algorithm '" + algo + "'");
        }
      } catch (const BudgetError&) {
        continue;  // skip rows whose solver exceeded its budget
      }
      row.elapsed = global.stable_timing ? 0 : timer.elapsed_ms();
      rows.push_back(std::move(row));
    }
    double best = 0;
    for (const auto& row : rows) best = std::max(best, row.value_num);
    for (const auto& row : rows) {
      out << kSchemaVersion << ',' << file << ',' << row.algo << ',' << pts.size() << ','
          << pts.dim() << ',' << k << ',';
      if (row.has_eps) out << format_double(opts.eps);
      out << ',' << global.seed << ',' << row.value_text << ',' << row.elapsed << ','
          << guarantee_name(row.guarantee.kind) << ',' << format_double(row.guarantee.param)
          << ',' << row.fallback_events << ','
          << (best > 0 ? format_double(row.value_num / best) : "1") << '\n';
    }
  }
}

void cmd_bench(const GlobalOpts& global, const BenchOpts& opts) {
  std::ostringstream out;
  out << "schema_version,file,algorithm,n,d,k,eps,seed,value,elapsed_ms,guarantee,"
         "guarantee_param,fallback_events,ratio_to_best\n";
  for (const std::string& file : opts.inputs) {
    if (global.mode == "exact") {
      bench_file<std::int64_t>(global, opts, file, out);
    } else {
      bench_file<double>(global, opts, file, out);
    }
  }
  write_output(global, out.str());
}

// ------------------------------------------------------------- verify ----

struct VerifyHardnessOpts {
  int m = 0;
  std::string gamma_file;
  std::size_t ell = 1;
  std::uint64_t budget = 10'000'000;
};

json verify_hardness_m(int m) {
  json checks = json::array();
  const auto pm = gen_pm(m);
  const Int128 mu = hv_sweep(pm);
  {
    json check;
    check["name"] = "pm_volume_formula";
    check["measured"] = to_string(mu);
    check["expected"] = to_string(pm_volume_formula(m));
    check["pass"] = mu == pm_volume_formula(m);
    checks.push_back(check);
  }
  {
    json check;
    check["name"] = "pm_count";
    check["measured"] = pm.size();
    check["expected"] = (m - 1) * (m - 2) / 2;
    check["pass"] = pm.size() == static_cast<std::size_t>((m - 1) * (m - 2) / 2);
    checks.push_back(check);
  }
  if (m >= 4) {
    const auto qm = gen_qm(m);
    json qcount;
    qcount["name"] = "qm_count";
    qcount["measured"] = qm.size();
    qcount["expected"] = (m - 2) * (m - 3) / 2;
    qcount["pass"] = qm.size() == static_cast<std::size_t>((m - 2) * (m - 3) / 2);
    checks.push_back(qcount);

    bool diff_ok = true;
    const Int128 want = 3 * Int128(hardness_scale(m)) + 1;
    for (std::size_t i = 0; i < qm.size(); ++i) {
      auto with_q = pm;
      with_q.add(qm[i]);
      diff_ok = diff_ok && (hv_sweep(with_q) - mu == want);
    }
    json diff;
    diff["name"] = "diff_volume_law";
    diff["expected"] = to_string(want);
    diff["pass"] = diff_ok;
    checks.push_back(diff);

    const auto graph = build_tm(m);
    json tm;
    tm["name"] = "tm_oracle_equals_lattice";
    tm["oracle_edges"] = graph.oracle_edges.size();
    tm["lattice_edges"] = graph.lattice_edges.size();
    tm["pass"] = graph.oracle_edges == graph.lattice_edges;
    checks.push_back(tm);
  }
  json out;
  out["schema_version"] = kSchemaVersion;
  out["kind"] = "hardness";
  out["m"] = m;
  out["checks"] = checks;
  bool all = true;
  for (const auto& check : checks) all = all && check["pass"].get<bool>();
  out["pass"] = all;
  return out;
}

void cmd_verify_hardness(const GlobalOpts& global, const VerifyHardnessOpts& opts) {
  json out;
  if (!opts.gamma_file.empty()) {
    TriGridVertexSet a{read_gamma_vertices(opts.gamma_file), opts.ell};
    const auto inst = embed_instance(a);
    const auto report = verify_reduction(inst, opts.budget);
    out["schema_version"] = kSchemaVersion;
    out["kind"] = "reduction";
    out["m"] = inst.m;
    out["k"] = inst.k;
    out["ell"] = report.ell;
    out["independent_yes"] = report.independent_yes;
    out["best_volume"] = to_string(report.best_volume);
    out["threshold"] = to_string(report.threshold);
    out["volsel_yes"] = report.volsel_yes;
    out["subsets_checked"] = report.subsets_checked;
    out["pass"] = report.agree;
  } else {
    if (opts.m < 3) throw std::invalid_argument("m must be at least 3");
    out = verify_hardness_m(opts.m);
  }
  write_output(global, out.dump(2) + "\n");
}

struct VerifyLemmasOpts {
  std::string which = "all";
  std::size_t trials = 20;
  double eps = 0.5;
};

bool lemma_boundary_trial(std::mt19937_64& rng, double eps) {
  const int d = 2 + static_cast<int>(rng() % 2);
  const auto params = grid_params(d, eps);
  const std::size_t n = 5 + rng() % 8;
  const auto pts = gen_log_uniform(n, d, 1e9, rng());
  const std::size_t k = 1 + rng() % 4;
  const double opt = volsel_brute(pts, k).value;
  double best = 0;
  Offset offset(static_cast<std::size_t>(d), 1);
  while (true) {
    const auto kept = interior_points(pts, offset, params);
    const auto sub = pts.subset(kept);
    const double value = volsel_brute(sub, std::min(k, sub.size())).value;
    if (value > opt * (1 + 1e-9)) return false;
    best = std::max(best, value);
    int pos = d - 1;
    while (pos >= 0) {
      if (++offset[static_cast<std::size_t>(pos)] <= params.tau) break;
      offset[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
  }
  return best >= (1 - eps) * opt * (1 - 1e-9);
}

bool lemma_rounding_trial(std::mt19937_64& rng, double eps) {
  const int d = 2 + static_cast<int>(rng() % 2);
  const auto params = grid_params(d, eps);
  const std::size_t n = 3 + rng() % 10;
  const auto pts = gen_log_uniform(n, d, 1e6, rng());
  const std::size_t k = 1 + rng() % std::min<std::size_t>(n, 4);
  PointSet<double> rounded(d);
  std::vector<double> row(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int c = 0; c < d; ++c) {
      row[static_cast<std::size_t>(c)] = params.pow_beta(round_exponent(pts[i][c], params));
    }
    rounded.add(std::span<const double>(row.data(), row.size()));
  }
  const double opt = volsel_brute(pts, k).value;
  const double rounded_opt = volsel_brute(rounded, k).value;
  return rounded_opt <= opt * (1 + 1e-9) && rounded_opt >= (1 - eps) * opt * (1 - 1e-9);
}

PointSet<double> cells_instance(std::mt19937_64& rng, const GridParams& params,
                                const Offset& offset, std::size_t m, std::size_t per_cell,
                                std::vector<std::size_t>& cell_of) {
  std::vector<CellKey> keys;
  std::set<CellKey> seen;
  while (keys.size() < m) {
    CellKey key(static_cast<std::size_t>(params.d));
    for (auto& y : key) y = static_cast<long long>(rng() % 5) - 2;
    if (seen.insert(key).second) keys.push_back(key);
  }
  PointSet<double> pts(params.d);
  std::vector<double> row(static_cast<std::size_t>(params.d));
  for (std::size_t c = 0; c < keys.size(); ++c) {
    for (std::size_t t = 0; t < per_cell; ++t) {
      for (int i = 0; i < params.d; ++i) {
        const long long x_lo = params.tau * keys[c][static_cast<std::size_t>(i)] +
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
      cell_of.push_back(c);
    }
  }
  return pts;
}

bool lemma_independence1_trial(std::mt19937_64& rng, double eps) {
  const int d = 2 + static_cast<int>(rng() % 2);
  const auto params = grid_params(d, eps);
  Offset offset(static_cast<std::size_t>(d));
  for (auto& l : offset) l = 1 + static_cast<long long>(rng() % params.tau);
  std::vector<std::size_t> cell_of;
  const auto pts = cells_instance(rng, params, offset, 2 + rng() % 3, 1 + rng() % 3, cell_of);
  double sum = 0;
  const std::size_t m = 1 + *std::max_element(cell_of.begin(), cell_of.end());
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < cell_of.size(); ++i) {
      if (cell_of[i] == c) members.push_back(i);
    }
    sum += hv_sweep(pts.subset(members));
  }
  const double whole = hv_sweep(pts);
  return whole <= sum * (1 + 1e-9) && whole >= (1 - eps) * sum * (1 - 1e-9);
}

bool lemma_independence2_trial(std::mt19937_64& rng, double eps) {
  const auto params = grid_params(2, eps);
  Offset offset{1 + static_cast<long long>(rng() % params.tau),
                1 + static_cast<long long>(rng() % params.tau)};
  std::vector<std::size_t> cell_of;
  const auto pts = cells_instance(rng, params, offset, 2 + rng() % 2, 2 + rng() % 2, cell_of);
  const std::size_t k = 1 + rng() % 4;
  const std::size_t m = 1 + *std::max_element(cell_of.begin(), cell_of.end());
  std::vector<std::vector<double>> table(m);
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < cell_of.size(); ++i) {
      if (cell_of[i] == c) members.push_back(i);
    }
    const auto sub = pts.subset(members);
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
  return volsel <= best_alloc * (1 + 1e-9) && volsel >= (1 - eps) * best_alloc * (1 - 1e-9);
}

void cmd_verify_lemmas(const GlobalOpts& global, const VerifyLemmasOpts& opts) {
  const std::vector<std::pair<std::string, bool (*)(std::mt19937_64&, double)>> suites = {
      {"boundary", lemma_boundary_trial},
      {"rounding", lemma_rounding_trial},
      {"independence1", lemma_independence1_trial},
      {"independence2", lemma_independence2_trial},
  };
  json results = json::array();
  bool all_pass = true;
  for (const auto& [name, trial] : suites) {
    if (opts.which != "all" && opts.which != name) continue;
    std::mt19937_64 rng(global.seed);
    std::size_t passes = 0;
    for (std::size_t t = 0; t < opts.trials; ++t) {
      passes += trial(rng, opts.eps) ? 1 : 0;
    }
    json suite;
    suite["name"] = name;
    suite["trials"] = opts.trials;
    suite["passes"] = passes;
    suite["pass"] = passes == opts.trials;
    all_pass = all_pass && passes == opts.trials;
    results.push_back(suite);
  }
  json out;
  out["schema_version"] = kSchemaVersion;
  out["kind"] = "lemmas";
  out["eps"] = opts.eps;
  out["seed"] = global.seed;
  out["suites"] = results;
  out["pass"] = all_pass;
  write_output(global, out.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"volume selection over anchored boxes: generators, solvers, verification"};
  app.require_subcommand(1);

  app.fallthrough();  // global flags may follow the subcommand

  GlobalOpts global;
  app.add_option("--seed", global.seed, "random seed (default 0)");
  app.add_option("--mode", global.mode, "coordinate mode")
      ->check(CLI::IsMember({"float", "exact"}));
  app.add_option("--output", global.output, "write output to this file instead of stdout");
  app.add_flag("--stable-timing", global.stable_timing,
               "report elapsed_ms as 0 so repeated runs are byte-identical");

  auto* gen = app.add_subcommand("gen", "generate point sets");
  gen->require_subcommand(1);
  GenRandomOpts gen_random;
  auto* gen_rand_cmd = gen->add_subcommand("random", "log-uniform random points");
  gen_rand_cmd->add_option("--n", gen_random.n, "number of points")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_rand_cmd->add_option("--d", gen_random.d, "dimension")->check(CLI::Range(1, 16));
  gen_rand_cmd->add_option("--spread", gen_random.spread, "coordinates in [1, spread)")
      ->check(CLI::Range(1.0, 1e300));
  GenHardnessOpts gen_hardness;
  auto* gen_hard_cmd = gen->add_subcommand("hardness", "reduction instance from grid vertices");
  gen_hard_cmd->add_option("--gamma-vertices", gen_hardness.gamma_file,
                           "file of (i, j) grid vertices, one pair per line")
      ->required();
  gen_hard_cmd->add_option("--ell", gen_hardness.ell, "independent-set target size")
      ->required()
      ->check(CLI::PositiveNumber);

  HvOpts hv_opts;
  auto* hv_cmd = app.add_subcommand("hv", "hypervolume of a point set");
  hv_cmd->add_option("--input", hv_opts.input, "point CSV file")->required();
  hv_cmd->add_option("--engine", hv_opts.engine, "sweep | ie | estimate")
      ->check(CLI::IsMember({"sweep", "ie", "estimate"}));
  hv_cmd->add_option("--indices", hv_opts.indices, "restrict to these point indices (csv)");
  hv_cmd->add_option("--eps", hv_opts.eps, "estimate accuracy");
  hv_cmd->add_option("--delta", hv_opts.delta, "estimate failure probability");

  SolveOpts solve_opts;
  auto* solve_cmd = app.add_subcommand("solve", "run a volume-selection solver");
  solve_cmd->add_option("--input", solve_opts.input, "point CSV file")->required();
  solve_cmd->add_option("--algo", solve_opts.algo, "brute | exact2d | greedy | eptas")
      ->required()
      ->check(CLI::IsMember({"brute", "exact2d", "greedy", "eptas"}));
  solve_cmd->add_option("--k", solve_opts.k, "selection size")->required();
  solve_cmd->add_option("--eps", solve_opts.eps, "eptas approximation parameter");
  solve_cmd->add_option("--cell-cap", solve_opts.cell_cap, "eptas per-cell exhaustive cap");
  solve_cmd->add_option("--fallback", solve_opts.fallback, "eptas cap policy")
      ->check(CLI::IsMember({"error", "greedy"}));
  solve_cmd->add_option("--budget", solve_opts.budget, "brute-force subset budget");

  BenchOpts bench_opts;
  auto* bench_cmd = app.add_subcommand("bench", "cross-product benchmark, CSV output");
  bench_cmd->add_option("--input", bench_opts.inputs, "point CSV files")->required();
  bench_cmd->add_option("--algo", bench_opts.algos, "algorithms to run")->required();
  bench_cmd->add_option("--k", bench_opts.ks, "selection sizes")->required();
  bench_cmd->add_option("--eps", bench_opts.eps, "eptas approximation parameter");
  bench_cmd->add_option("--cell-cap", bench_opts.cell_cap, "eptas per-cell exhaustive cap");
  bench_cmd->add_option("--budget", bench_opts.budget, "brute-force subset budget");

  auto* verify = app.add_subcommand("verify", "verify hardness instances and scheme lemmas");
  verify->require_subcommand(1);
  VerifyHardnessOpts verify_hardness;
  auto* verify_hard_cmd = verify->add_subcommand("hardness", "check the gadget identities");
  verify_hard_cmd->add_option("--m", verify_hardness.m, "gadget size parameter");
  verify_hard_cmd->add_option("--gamma-vertices", verify_hardness.gamma_file,
                              "verify the full reduction for this vertex file");
  verify_hard_cmd->add_option("--ell", verify_hardness.ell, "independent-set target size");
  verify_hard_cmd->add_option("--budget", verify_hardness.budget, "subset enumeration budget");
  VerifyLemmasOpts verify_lemmas;
  auto* verify_lemmas_cmd = verify->add_subcommand("lemmas", "randomized lemma suites");
  verify_lemmas_cmd->add_option("--which", verify_lemmas.which,
                                "boundary | rounding | independence1 | independence2 | all")
      ->check(CLI::IsMember({"boundary", "rounding", "independence1", "independence2", "all"}));
  verify_lemmas_cmd->add_option("--trials", verify_lemmas.trials, "trials per suite")
      ->check(CLI::PositiveNumber);
  verify_lemmas_cmd->add_option("--eps", verify_lemmas.eps, "lemma eps")
      ->check(CLI::Range(1e-9, 0.5));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen_rand_cmd->parsed()) {
      cmd_gen_random(global, gen_random);
    } else if (gen_hard_cmd->parsed()) {
      cmd_gen_hardness(global, gen_hardness);
    } else if (hv_cmd->parsed()) {
      cmd_hv(global, hv_opts);
    } else if (solve_cmd->parsed()) {
      cmd_solve(global, solve_opts);
    } else if (bench_cmd->parsed()) {
      cmd_bench(global, bench_opts);
    } else if (verify_hard_cmd->parsed()) {
      cmd_verify_hardness(global, verify_hardness);
    } else if (verify_lemmas_cmd->parsed()) {
      cmd_verify_lemmas(global, verify_lemmas);
    }
  } catch (const CsvError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 4;
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
