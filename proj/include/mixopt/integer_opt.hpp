#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mixopt/numeric.hpp"
#include "mixopt/polynomial.hpp"
#include "mixopt/polytope.hpp"

namespace mixopt {

// values[k] = sum over lattice points of f^k; values[0] = N.
struct MomentVector {
  Int N = 0;
  std::vector<Rat> values;
};

struct BoundsPair {
  unsigned k = 1;
  Int L;
  Int U;
};

// Sums of f(point)^k for k = 0..kmax over an explicit point stream.
template <class Point>
MomentVector moment_sums(std::span<const Point> points, const Polynomial& f, unsigned kmax) {
  MomentVector mv;
  mv.N = static_cast<unsigned long>(points.size());
  mv.values.assign(kmax + 1, Rat(0));
  for (const auto& pt : points) {
    const Rat v = [&] {
      if constexpr (std::is_same_v<Point, MixedPoint>) {
        return f.evaluate(pt.coords());
      } else {
        std::vector<Rat> c(pt.begin(), pt.end());
        return f.evaluate(c);
      }
    }();
    Rat pw = 1;
    for (unsigned k = 0; k <= kmax; ++k) {
      mv.values[k] += pw;
      pw *= v;
    }
  }
  return mv;
}

// Sum of f^k over P cap Z^d; 0 for an empty polytope.
inline Rat moment_sum(const Polytope& P, const Polynomial& f, unsigned k) {
  const auto pts = lattice_points(P);
  return moment_sums(std::span<const std::vector<Int>>(pts), f, k).values[k];
}

// L_k = ceil((S_k / N)^(1/k)),  U_k = floor(S_k^(1/k)).
inline BoundsPair bounds_from_moment(const Int& N, const Rat& sum, unsigned k) {
  if (k < 1) throw ContractViolation("bounds need k >= 1");
  if (N <= 0) throw InfeasibleError("no lattice points");
  return BoundsPair{k, ikth_root_ceil(sum / Rat(N), k), ikth_root_floor(sum, k)};
}

inline BoundsPair bounds(const Polytope& P, const Polynomial& f, unsigned k) {
  if (!f.has_integer_coefficients()) throw ContractViolation("bounds need integer coefficients");
  if (k < 1) throw ContractViolation("bounds need k >= 1");
  const auto pts = lattice_points(P);
  if (pts.empty()) throw InfeasibleError("polytope has no lattice points");
  const auto mv = moment_sums(std::span<const std::vector<Int>>(pts), f, k);
  return bounds_from_moment(mv.N, mv.values[k], k);
}

inline void require_open_unit(const Rat& eps, const char* what) {
  if (eps <= 0 || eps >= 1) throw DomainError(std::string(what) + " must lie in (0,1)");
}

// Smallest k >= 1 with N <= (1 + eps)^k, i.e. N^(1/k) <= 1 + eps.
inline unsigned choose_k(const Rat& eps, const Int& N) {
  require_open_unit(eps, "epsilon");
  if (N < 1) throw DomainError("choose_k needs N >= 1");
  const Rat base = 1 + eps;
  Rat pw = base;
  unsigned k = 1;
  while (Rat(N) > pw) {
    pw *= base;
    ++k;
  }
  return k;
}

struct IntegerSolution {
  std::vector<Int> point;
  Int value;
  unsigned k = 1;
  Int N;
  Int moment;        // S_k = sum of f^k over all points
  BoundsPair root;   // bounds of the full instance; value >= root.L
  std::size_t nodes = 0;  // boxes examined by the search
};

namespace detail {

class BisectionSearch {
 public:
  BisectionSearch(const std::vector<std::vector<Int>>& points, std::vector<Int> powers, unsigned k,
                  Int threshold)
      : points_(points), powers_(std::move(powers)), k_(k), threshold_(std::move(threshold)) {}

  std::optional<std::size_t> run(std::vector<std::size_t> idx) { return search(idx); }
  std::size_t nodes() const { return nodes_; }

 private:
  Int upper(const std::vector<std::size_t>& idx) const {
    Int s = 0;
    for (auto i : idx) s += powers_[i];
    return ikth_root_floor(Rat(s), k_);
  }

  std::optional<std::size_t> search(const std::vector<std::size_t>& idx) {
    ++nodes_;
    if (idx.size() == 1) return idx.front();
    const std::size_t dim = points_[idx.front()].size();
    std::size_t axis = 0;
    Int best_len = -1, lo, hi;
    for (std::size_t j = 0; j < dim; ++j) {
      Int mn = points_[idx.front()][j], mx = mn;
      for (auto i : idx) {
        mn = std::min(mn, points_[i][j]);
        mx = std::max(mx, points_[i][j]);
      }
      if (mx - mn > best_len) {
        best_len = mx - mn;
        axis = j;
        lo = mn;
        hi = mx;
      }
    }
    Int mid;
    mpz_fdiv_q_2exp(mid.get_mpz_t(), Int(lo + hi).get_mpz_t(), 1);
    std::vector<std::size_t> lower, upper_half;
    for (auto i : idx) (points_[i][axis] <= mid ? lower : upper_half).push_back(i);

    struct Half {
      std::vector<std::size_t>* idx;
      Int U;
    };
    std::vector<Half> halves;
    for (auto* h : {&lower, &upper_half})
      if (!h->empty()) halves.push_back({h, upper(*h)});
    // Larger upper bound first; the lower half wins ties.
    std::stable_sort(halves.begin(), halves.end(),
                     [](const Half& a, const Half& b) { return a.U > b.U; });
    for (auto& h : halves) {
      if (h.U < threshold_) continue;  // no point of this half reaches the threshold
      if (auto hit = search(*h.idx)) return hit;
    }
    return std::nullopt;
  }

  const std::vector<std::vector<Int>>& points_;
  std::vector<Int> powers_;
  unsigned k_;
  Int threshold_;
  std::size_t nodes_ = 0;
};

}  // namespace detail

// Approximate maximizer over an explicit lattice point list with values of
// an integer-valued objective that is non-negative on the points. Returns a
// point with value >= L_k(root) >= (1 - eps) f*.
inline IntegerSolution bisection_solve(const std::vector<std::vector<Int>>& points,
                                       const std::vector<Int>& values, const Rat& eps) {
  require_open_unit(eps, "epsilon");
  if (points.empty()) throw InfeasibleError("no lattice points");
  if (points.size() != values.size()) throw ContractViolation("one value per point is required");
  for (const auto& v : values)
    if (v < 0) throw NegativeObjectiveError("objective is negative at a lattice point");

  IntegerSolution sol;
  sol.N = static_cast<unsigned long>(points.size());
  sol.k = choose_k(eps, sol.N);
  std::vector<Int> powers;
  powers.reserve(values.size());
  sol.moment = 0;
  for (const auto& v : values) {
    powers.push_back(ipow(v, sol.k));
    sol.moment += powers.back();
  }
  sol.root = bounds_from_moment(sol.N, Rat(sol.moment), sol.k);

  std::vector<std::size_t> all(points.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  detail::BisectionSearch search(points, std::move(powers), sol.k, sol.root.L);
  const auto hit = search.run(std::move(all));
  if (!hit) throw Error("bisection found no point above the root lower bound");
  sol.point = points[*hit];
  sol.value = values[*hit];
  sol.nodes = search.nodes();
  return sol;
}

inline IntegerSolution bisection_solve(const Polytope& P, const Polynomial& f, const Rat& eps) {
  if (!f.has_integer_coefficients()) throw ContractViolation("bisection needs integer coefficients");
  require_open_unit(eps, "epsilon");
  const auto pts = lattice_points(P);
  std::vector<Int> vals;
  vals.reserve(pts.size());
  for (const auto& p : pts) vals.push_back(f.evaluate(std::span<const Int>(p)));
  return bisection_solve(pts, vals, eps);
}

struct OracleResult {
  MixedPoint argmax;
  Rat max;
  MixedPoint argmin;
  Rat min;
};

// Exact maximum and minimum over a point stream by brute force. Ties go to
// the lexicographically smallest point.
template <class Range>
OracleResult oracle_optimize(const Range& points, const Polynomial& f) {
  std::optional<OracleResult> res;
  for (const MixedPoint& p : points) {
    const Rat v = f.evaluate(p.coords());
    if (!res) {
      res = OracleResult{p, v, p, v};
      continue;
    }
    if (v > res->max || (v == res->max && lex_less(p, res->argmax))) {
      res->max = v;
      res->argmax = p;
    }
    if (v < res->min || (v == res->min && lex_less(p, res->argmin))) {
      res->min = v;
      res->argmin = p;
    }
  }
  if (!res) throw InfeasibleError("oracle over an empty point set");
  return *res;
}

}  // namespace mixopt
