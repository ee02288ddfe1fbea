// Points, point sets, domination, Pareto filtering, and the CSV format.
//
// A point has d strictly positive coordinates; a point set fixes d and keeps
// points in a stable, indexed order. Solvers always report indices into the
// set they were handed, never positions in internal filtered copies.
#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "volsel/types.hpp"

namespace volsel {

template <class T>
class PointSet {
 public:
  explicit PointSet(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  }

  int dim() const { return dim_; }
  std::size_t size() const { return coords_.size() / static_cast<std::size_t>(dim_); }
  bool empty() const { return coords_.empty(); }

  std::span<const T> operator[](std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }

  void add(std::span<const T> p) {
    if (p.size() != static_cast<std::size_t>(dim_)) {
      throw std::invalid_argument("point dimension mismatch");
    }
    for (const T& c : p) {
      if (!(c > T(0))) throw std::invalid_argument("coordinates must be strictly positive");
    }
    coords_.insert(coords_.end(), p.begin(), p.end());
  }

  void add(std::initializer_list<T> p) { add(std::span<const T>(p.begin(), p.size())); }

  void pop_back() { coords_.resize(coords_.size() - static_cast<std::size_t>(dim_)); }

  PointSet subset(std::span<const std::size_t> indices) const {
    PointSet out(dim_);
    for (std::size_t i : indices) out.add((*this)[i]);
    return out;
  }
  PointSet subset(const std::vector<std::size_t>& indices) const {
    return subset(std::span<const std::size_t>(indices));
  }

  static PointSet from_rows(const std::vector<std::vector<T>>& rows) {
    if (rows.empty()) throw std::invalid_argument("from_rows needs at least one point");
    PointSet out(static_cast<int>(rows.front().size()));
    for (const auto& r : rows) out.add(std::span<const T>(r.data(), r.size()));
    return out;
  }

  bool operator==(const PointSet& other) const = default;

 private:
  int dim_;
  std::vector<T> coords_;
};

// p dominates q when every coordinate of p is at least the matching one of q.
template <class T>
inline bool dominates(std::span<const T> p, std::span<const T> q) {
  if (p.size() != q.size()) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < q[i]) return false;
  }
  return true;
}

template <class T>
struct Filtered {
  PointSet<T> points;
  std::vector<std::size_t> original;  // original index of each kept point
};

namespace detail {

// Quadratic filter, any dimension. A point is dropped when some other point
// dominates it; among exact duplicates only the lowest index survives.
template <class T>
std::vector<bool> pareto_keep_quadratic(const PointSet<T>& ps) {
  const std::size_t n = ps.size();
  std::vector<bool> keep(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n && keep[i]; ++j) {
      if (j == i) continue;
      if (!dominates(ps[j], ps[i])) continue;
      const bool duplicate = std::ranges::equal(ps[j], ps[i]);
      if (!duplicate || j < i) keep[i] = false;
    }
  }
  return keep;
}

// Sort-based maxima for d <= 3. Every dominator of a point precedes it in
// (x desc, y desc, z desc, index asc) order, so a prefix staircase decides.
template <class T>
std::vector<bool> pareto_keep_sorted(const PointSet<T>& ps) {
  const std::size_t n = ps.size();
  const int d = ps.dim();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto pa = ps[a], pb = ps[b];
    for (int i = 0; i < d; ++i) {
      if (pa[i] != pb[i]) return pa[i] > pb[i];
    }
    return a < b;
  });

  std::vector<bool> keep(n, false);
  if (d == 1) {
    keep[order[0]] = true;
  } else if (d == 2) {
    T best_y{};
    bool any = false;
    for (std::size_t idx : order) {
      const T y = ps[idx][1];
      if (!any || y > best_y) {
        keep[idx] = true;
        best_y = y;
        any = true;
      }
    }
  } else {
    std::map<T, T> stairs;  // y -> z over kept points, antichain
    for (std::size_t idx : order) {
      const T y = ps[idx][1], z = ps[idx][2];
      auto it = stairs.lower_bound(y);
      if (it != stairs.end() && it->second >= z) continue;  // dominated
      keep[idx] = true;
      if (it != stairs.end() && it->first == y) it = stairs.erase(it);
      while (it != stairs.begin()) {
        auto prev = std::prev(it);
        if (prev->second <= z) {
          stairs.erase(prev);
        } else {
          break;
        }
      }
      stairs.emplace(y, z);
    }
  }
  return keep;
}

}  // namespace detail

// Remove every point dominated by a distinct other point; duplicates keep the
// lowest-index copy. Output preserves the original index order.
template <class T>
Filtered<T> pareto_filter(const PointSet<T>& ps) {
  Filtered<T> out{PointSet<T>(ps.dim()), {}};
  if (ps.empty()) return out;
  const std::vector<bool> keep = (ps.dim() <= 3 && ps.size() > 64)
                                     ? detail::pareto_keep_sorted(ps)
                                     : detail::pareto_keep_quadratic(ps);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (keep[i]) {
      out.points.add(ps[i]);
      out.original.push_back(i);
    }
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <class T>
T parse_coordinate(std::string_view field, std::size_t line) {
  field = trim(field);
  if (field.empty()) throw CsvError(line, "empty field");
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    if constexpr (VolumeTraits<T>::is_exact) {
      throw CsvError(line, "expected a positive integer, got '" + std::string(field) + "'");
    } else {
      throw CsvError(line, "expected a positive number, got '" + std::string(field) + "'");
    }
  }
  if (!(value > T(0))) throw CsvError(line, "coordinates must be strictly positive");
  return value;
}

}  // namespace detail

// CSV point format: one point per line, d comma-separated strictly positive
// values; an optional single leading header line starts with '#'.
template <class T>
PointSet<T> read_points_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<T>> rows;
  int dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = detail::trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      if (line_no == 1) continue;
      throw CsvError(line_no, "unexpected comment line");
    }
    std::vector<T> row;
    std::size_t start = 0;
    const std::string text(view);
    while (true) {
      const std::size_t comma = text.find(',', start);
      const std::string_view field(text.data() + start,
                                   (comma == std::string::npos ? text.size() : comma) - start);
      row.push_back(detail::parse_coordinate<T>(field, line_no));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (dim < 0) {
      dim = static_cast<int>(row.size());
    } else if (static_cast<int>(row.size()) != dim) {
      throw CsvError(line_no, "expected " + std::to_string(dim) + " values, got " +
                                  std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw CsvError(line_no, "no points in input");
  return PointSet<T>::from_rows(rows);
}

template <class T>
PointSet<T> read_points_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(0, "cannot open '" + path + "'");
  return read_points_csv<T>(in);
}

inline std::string format_coordinate(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_coordinate(std::int64_t v) { return std::to_string(v); }

template <class T>
void write_points_csv(std::ostream& out, const PointSet<T>& ps) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto p = ps[i];
    for (int c = 0; c < ps.dim(); ++c) {
      if (c) out << ',';
      out << format_coordinate(p[c]);
    }
    out << '\n';
  }
}

}  // namespace volsel
