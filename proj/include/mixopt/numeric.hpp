#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "mixopt/errors.hpp"

namespace mixopt {

// Arbitrary precision integers and rationals. mpq_class values produced by
// arithmetic are canonical (lowest terms, positive denominator); the only
// place a non-canonical rational can appear is direct construction from a
// numerator/denominator pair, which make_rat() handles.
using Int = mpz_class;
using Rat = mpq_class;

using IntMatrix = std::vector<std::vector<Int>>;
using RatMatrix = std::vector<std::vector<Rat>>;

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw DomainError("zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Int floor_of(const Rat& a) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  return q;
}

inline Int ceil_of(const Rat& a) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  return q;
}

inline bool is_integral(const Rat& a) { return a.get_den() == 1; }

inline Int ipow(const Int& base, unsigned long k) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), k);
  return r;
}

inline Rat rpow(const Rat& base, unsigned long k) {
  Int num = ipow(base.get_num(), k);
  Int den = ipow(base.get_den(), k);
  Rat r(num, den);  // already in lowest terms
  return r;
}

// "p/q", or "p" when q == 1.
inline std::string to_string(const Rat& a) { return a.get_str(); }
inline std::string to_string(const Int& a) { return a.get_str(); }

// Strict parser for the "p/q" | "p" wire format. Leading '+' and whitespace
// are rejected so that parse/print round-trips are byte-exact.
inline Rat parse_rat(std::string_view text) {
  auto valid_int = [](std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && s[0] == '-') i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  if (!valid_int(num, true))
    throw DomainError("malformed rational '" + std::string(text) + "'");
  if (slash == std::string_view::npos) return Rat(Int(std::string(num)));
  std::string_view den = text.substr(slash + 1);
  if (!valid_int(den, false))
    throw DomainError("malformed rational '" + std::string(text) + "'");
  Int d(std::string{den});
  if (d == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  return make_rat(Int(std::string(num)), d);
}

inline Int parse_int(std::string_view text) {
  Rat r = parse_rat(text);
  if (!is_integral(r) || text.find('/') != std::string_view::npos)
    throw DomainError("expected an integer, got '" + std::string(text) + "'");
  return r.get_num();
}

// Largest integer t >= 0 with t^k <= a.
inline Int ikth_root_floor(const Rat& a, unsigned long k) {
  if (k == 0) throw ContractViolation("root index must be positive");
  if (a < 0) throw DomainError("k-th root of a negative number");
  // t^k <= a  <=>  t^k <= floor(a) for integral t.
  const Int fl = floor_of(a);
  if (fl == 0) return 0;
  const std::size_t bits = mpz_sizeinbase(fl.get_mpz_t(), 2);
  // fl < 2^bits, so the root is below 2^ceil(bits/k).
  Int hi = 1;
  hi <<= static_cast<mp_bitcnt_t>((bits + k - 1) / k);
  Int lo = 0;  // invariant: lo^k <= fl < hi^k
  while (hi - lo > 1) {
    Int mid = (lo + hi) >> 1;
    if (ipow(mid, k) <= fl)
      lo = std::move(mid);
    else
      hi = std::move(mid);
  }
  return lo;
}

// Smallest integer t >= 0 with t^k >= a.
inline Int ikth_root_ceil(const Rat& a, unsigned long k) {
  Int t = ikth_root_floor(a, k);
  if (Rat(ipow(t, k)) < a) ++t;
  return t;
}

// Fraction-free Gaussian elimination (Bareiss). Every intermediate division
// is exact.
inline Int det(IntMatrix m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw ContractViolation("determinant of a non-square matrix");
  if (n == 0) return 1;
  int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = std::move(t);
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// lcm of |v| over the list; the empty list has lcm 1.
inline Int lcm_all(std::span<const Int> values) {
  Int acc = 1;
  for (const auto& v : values) {
    if (v == 0) throw ContractViolation("lcm_all: zero entry");
    mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), v.get_mpz_t());
  }
  return acc;
}

// Solves the square system M y = rhs exactly. nullopt when M is singular.
inline std::optional<std::vector<Rat>> solve_square(RatMatrix m, std::vector<Rat> rhs) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    const Rat inv = 1 / m[col][col];
    for (std::size_t j = col; j < n; ++j) m[col][j] *= inv;
    rhs[col] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || m[i][col] == 0) continue;
      const Rat f = m[i][col];
      for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
      rhs[i] -= f * rhs[col];
    }
  }
  return rhs;
}

// Calls fn(indices) for each size-k subset of {0..n-1}, in lexicographic
// order. Stops early when fn returns false.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!fn(std::span<const std::size_t>(idx))) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace mixopt
