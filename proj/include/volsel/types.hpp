// Shared scalar/volume traits and error types for the volume-selection library.
//
// Coordinates come in two modes: double ("float mode", general inputs) and
// std::int64_t ("exact mode", integer instances whose volumes must be
// certified with strict equalities/inequalities). Exact-mode volumes are
// accumulated in 128-bit integers with checked multiplication.
#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace volsel {

using Int128 = __int128;

template <class T>
struct VolumeTraits;

template <>
struct VolumeTraits<double> {
  using type = double;
  static constexpr bool is_exact = false;
};

template <>
struct VolumeTraits<std::int64_t> {
  using type = Int128;
  static constexpr bool is_exact = true;
};

// Volume value type matching a coordinate type.
template <class T>
using Volume = typename VolumeTraits<T>::type;

// Multiply two volume values; throws std::overflow_error in exact mode.
template <class T>
inline Volume<T> vol_mul(Volume<T> a, Volume<T> b) {
  if constexpr (VolumeTraits<T>::is_exact) {
    Int128 r;
    if (__builtin_mul_overflow(a, b, &r)) {
      throw std::overflow_error("128-bit volume overflow");
    }
    return r;
  } else {
    return a * b;
  }
}

inline std::string to_string(Int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

inline Int128 int128_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw std::invalid_argument("bad integer literal: " + s);
  Int128 v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer literal: " + s);
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

// Raised when an enumeration/budget precondition is violated (CLI exit 3).
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an EPTAS cell exceeds the exhaustive-solve cap under the
// error policy (CLI exit 3).
struct CellCapError : BudgetError {
  using BudgetError::BudgetError;
};

// CSV / input-file parse failure carrying a 1-based line number (CLI exit 4).
struct CsvError : std::runtime_error {
  std::size_t line;
  CsvError(std::size_t line_number, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
};

}  // namespace volsel
