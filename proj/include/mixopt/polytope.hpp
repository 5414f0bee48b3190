#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "mixopt/numeric.hpp"

namespace mixopt {

// P = {(x, z) : A x + B z <= b} with x in R^d1 continuous and z in Z^d2.
// Columns of the full system are ordered (x, z).
struct Polytope {
  std::size_t d1 = 0;
  std::size_t d2 = 0;
  IntMatrix A;  // p x d1
  IntMatrix B;  // p x d2
  std::vector<Int> b;

  std::size_t rows() const { return b.size(); }
  std::size_t dim() const { return d1 + d2; }

  void check() const {
    if (A.size() != b.size() || B.size() != b.size())
      throw ContractViolation("row counts of A, B and b differ");
    for (const auto& row : A)
      if (row.size() != d1) throw ContractViolation("row of A does not have d1 entries");
    for (const auto& row : B)
      if (row.size() != d2) throw ContractViolation("row of B does not have d2 entries");
  }

  // [A | B]
  IntMatrix full_matrix() const {
    IntMatrix g(rows());
    for (std::size_t i = 0; i < rows(); ++i) {
      g[i] = A[i];
      g[i].insert(g[i].end(), B[i].begin(), B[i].end());
    }
    return g;
  }

  bool contains(std::span<const Rat> x, std::span<const Int> z) const {
    if (x.size() != d1 || z.size() != d2) throw ContractViolation("point has wrong dimension");
    for (std::size_t i = 0; i < rows(); ++i) {
      Rat lhs = 0;
      for (std::size_t j = 0; j < d1; ++j) lhs += A[i][j] * x[j];
      for (std::size_t j = 0; j < d2; ++j) lhs += Rat(B[i][j] * z[j]);
      if (lhs > b[i]) return false;
    }
    return true;
  }
};

// A point of P with x on the (1/grid) lattice and z integral.
struct MixedPoint {
  std::vector<Rat> x;
  std::vector<Int> z;
  Int grid = 1;

  // (x, z) as one rational vector, the evaluation order of objectives.
  std::vector<Rat> coords() const {
    std::vector<Rat> c(x.begin(), x.end());
    for (const auto& v : z) c.emplace_back(v);
    return c;
  }

  bool on_grid() const {
    return std::all_of(x.begin(), x.end(), [&](const Rat& v) { return is_integral(v * grid); });
  }

  friend bool operator==(const MixedPoint& a, const MixedPoint& b) {
    return a.x == b.x && a.z == b.z;
  }
};

// Lexicographic order over (z, x); the grid denominator is ignored.
inline bool lex_less(const MixedPoint& a, const MixedPoint& b) {
  if (a.z != b.z) return std::lexicographical_compare(a.z.begin(), a.z.end(), b.z.begin(), b.z.end());
  return std::lexicographical_compare(a.x.begin(), a.x.end(), b.x.begin(), b.x.end());
}

using VertexSet = std::vector<std::vector<Rat>>;

namespace detail {

// Vertices of {y in R^n : G y <= h} by enumerating n-subsets of rows. Only
// meaningful for pointed systems; bounded nonempty systems always are.
// Returned sorted and without duplicates.
inline VertexSet vertices(const RatMatrix& G, const std::vector<Rat>& h, std::size_t n) {
  const std::size_t p = h.size();
  auto feasible = [&](const std::vector<Rat>& y) {
    for (std::size_t i = 0; i < p; ++i) {
      Rat lhs = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (G[i][j] != 0) lhs += G[i][j] * y[j];
      if (lhs > h[i]) return false;
    }
    return true;
  };
  std::set<std::vector<Rat>> found;
  if (n == 0) {
    if (feasible({})) found.insert({});
    return {found.begin(), found.end()};
  }
  RatMatrix sq(n, std::vector<Rat>(n));
  std::vector<Rat> rhs(n);
  for_each_subset(p, n, [&](std::span<const std::size_t> idx) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) sq[r][c] = G[idx[r]][c];
      rhs[r] = h[idx[r]];
    }
    if (auto y = solve_square(sq, rhs); y && feasible(*y)) found.insert(std::move(*y));
    return true;
  });
  return {found.begin(), found.end()};
}

inline RatMatrix to_rat(const IntMatrix& m) {
  RatMatrix r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) r[i].assign(m[i].begin(), m[i].end());
  return r;
}

// True iff {y : G y <= 0} = {0}. The cone is cut by the unit box, which
// leaves a polytope whose vertices are all zero exactly when the cone is.
inline bool recession_cone_trivial(const IntMatrix& G, std::size_t n) {
  RatMatrix g = to_rat(G);
  std::vector<Rat> h(G.size(), Rat(0));
  for (std::size_t j = 0; j < n; ++j) {
    for (int s : {1, -1}) {
      std::vector<Rat> row(n, Rat(0));
      row[j] = s;
      g.push_back(std::move(row));
      h.emplace_back(1);
    }
  }
  for (const auto& v : vertices(g, h, n))
    for (const auto& c : v)
      if (c != 0) return false;
  return true;
}

// Feasibility of {G y <= h} for integral data without assuming a pointed
// system. A nonempty polyhedron has a point given by Cramer's rule on a
// square integral subsystem, so its coordinates are bounded by a Hadamard
// type bound R; P is nonempty iff P cut by the box [-R, R]^n is.
inline bool feasible_integral(const IntMatrix& G, const std::vector<Int>& h, std::size_t n) {
  Int row_norm = 1;
  for (std::size_t i = 0; i < G.size(); ++i) {
    Int s = abs(h[i]);
    for (const auto& v : G[i]) s += abs(v);
    row_norm = std::max(row_norm, s);
  }
  const Int R = ipow(row_norm, n);
  RatMatrix g = to_rat(G);
  std::vector<Rat> hh(h.begin(), h.end());
  for (std::size_t j = 0; j < n; ++j) {
    for (int s : {1, -1}) {
      std::vector<Rat> row(n, Rat(0));
      row[j] = s;
      g.push_back(std::move(row));
      hh.emplace_back(R);
    }
  }
  return !vertices(g, hh, n).empty();
}

}  // namespace detail

struct PolytopeInfo {
  bool feasible = false;
  bool bounded = false;
  Rat M = 0;  // integer valued: ceil of the largest |coordinate|
  // Exact coordinate ranges over P in (x, z) order; filled when feasible and bounded.
  std::vector<Rat> lower;
  std::vector<Rat> upper;
  VertexSet vertices;
};

inline PolytopeInfo validate(const Polytope& P) {
  P.check();
  PolytopeInfo info;
  const std::size_t n = P.dim();
  const IntMatrix G = P.full_matrix();
  if (!detail::recession_cone_trivial(G, n)) {
    info.feasible = detail::feasible_integral(G, P.b, n);
    info.bounded = !info.feasible;
    return info;
  }
  info.bounded = true;
  info.vertices = detail::vertices(detail::to_rat(G), std::vector<Rat>(P.b.begin(), P.b.end()), n);
  info.feasible = !info.vertices.empty();
  if (!info.feasible) return info;
  info.lower = info.vertices.front();
  info.upper = info.vertices.front();
  for (const auto& v : info.vertices)
    for (std::size_t j = 0; j < n; ++j) {
      info.lower[j] = std::min(info.lower[j], v[j]);
      info.upper[j] = std::max(info.upper[j], v[j]);
    }
  Int M = 0;
  for (std::size_t j = 0; j < n; ++j) {
    M = std::max(M, ceil_of(abs(info.lower[j])));
    M = std::max(M, ceil_of(abs(info.upper[j])));
  }
  info.M = M;
  return info;
}

inline void require_polytope(const PolytopeInfo& info) {
  if (!info.bounded) throw UnboundedError("constraint system is unbounded");
  if (!info.feasible) throw InfeasibleError("constraint system is infeasible");
}

enum class Sense { maximize, minimize };

struct LpResult {
  Rat value;
  std::vector<Rat> point;  // (x, z) order
};

// Optimum of a linear objective over the vertices; ties go to the
// lexicographically smallest vertex.
inline LpResult lp_extreme(const PolytopeInfo& info, std::span<const Rat> objective, Sense sense) {
  require_polytope(info);
  std::optional<LpResult> best;
  for (const auto& v : info.vertices) {
    if (objective.size() != v.size()) throw ContractViolation("objective has wrong dimension");
    Rat val = 0;
    for (std::size_t j = 0; j < v.size(); ++j) val += objective[j] * v[j];
    const bool better = !best || (sense == Sense::maximize ? val > best->value : val < best->value);
    if (better) best = LpResult{val, v};
  }
  return *best;
}

inline LpResult lp_extreme(const Polytope& P, std::span<const Rat> objective, Sense sense) {
  return lp_extreme(validate(P), objective, sense);
}

// Delta = lcm of |det| over nonsingular d1 x d1 row submatrices of A.
inline Int integral_scaling_factor(const Polytope& P) {
  P.check();
  std::vector<Int> dets;
  IntMatrix sq(P.d1, std::vector<Int>(P.d1));
  if (P.d1 > 0) {
    for_each_subset(P.rows(), P.d1, [&](std::span<const std::size_t> idx) {
      for (std::size_t r = 0; r < P.d1; ++r) sq[r] = P.A[idx[r]];
      Int d = det(sq);
      if (d != 0) dets.push_back(abs(d));
      return true;
    });
  }
  return lcm_all(dets);
}

// Vertices of the slice {x : A x <= b - B z}.
inline VertexSet slice_vertices(const Polytope& P, std::span<const Int> z) {
  P.check();
  if (z.size() != P.d2) throw ContractViolation("slice index has wrong dimension");
  std::vector<Rat> h(P.rows());
  for (std::size_t i = 0; i < P.rows(); ++i) {
    Int r = P.b[i];
    for (std::size_t j = 0; j < P.d2; ++j) r -= P.B[i][j] * z[j];
    h[i] = r;
  }
  return detail::vertices(detail::to_rat(P.A), h, P.d1);
}

namespace detail {

// Integer points of {y : G y <= h}, variables fixed in column order, so the
// callback sees points in lexicographic order. Each coordinate range is
// the exact projection of the remaining system (an LP), except for the last
// coordinate where the interval is read off the rows directly.
class LatticeWalker {
 public:
  LatticeWalker(IntMatrix G, std::vector<Int> h) : G_(std::move(G)), h_(std::move(h)) {
    n_ = G_.empty() ? 0 : G_.front().size();
  }

  LatticeWalker(IntMatrix G, std::vector<Int> h, std::size_t n)
      : G_(std::move(G)), h_(std::move(h)), n_(n) {}

  template <class Fn>
  void run(Fn&& fn) {
    point_.assign(n_, Int(0));
    if (n_ == 0) {
      if (std::all_of(h_.begin(), h_.end(), [](const Int& v) { return v >= 0; }))
        fn(std::span<const Int>(point_));
      return;
    }
    descend(0, h_, fn);
  }

 private:
  template <class Fn>
  void descend(std::size_t level, const std::vector<Int>& residual, Fn& fn) {
    Int lo, hi;
    if (!range(level, residual, lo, hi)) return;
    std::vector<Int> next(residual.size());
    for (Int v = lo; v <= hi; ++v) {
      point_[level] = v;
      if (level + 1 == n_) {
        fn(std::span<const Int>(point_));
        continue;
      }
      for (std::size_t i = 0; i < residual.size(); ++i) next[i] = residual[i] - G_[i][level] * v;
      descend(level + 1, next, fn);
    }
  }

  bool range(std::size_t level, const std::vector<Int>& residual, Int& lo, Int& hi) const {
    const std::size_t p = residual.size();
    if (level + 1 == n_) {
      bool has_lo = false, has_hi = false;
      for (std::size_t i = 0; i < p; ++i) {
        const Int& a = G_[i][level];
        if (a == 0) {
          if (residual[i] < 0) return false;
        } else if (a > 0) {
          Int t = floor_of(make_rat(residual[i], a));
          if (!has_hi || t < hi) hi = std::move(t), has_hi = true;
        } else {
          Int t = ceil_of(make_rat(residual[i], a));
          if (!has_lo || t > lo) lo = std::move(t), has_lo = true;
        }
      }
      if (!has_lo || !has_hi) throw UnboundedError("lattice enumeration over an unbounded system");
      return lo <= hi;
    }
    const std::size_t free = n_ - level;
    RatMatrix g(p, std::vector<Rat>(free));
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < free; ++j) g[i][j] = G_[i][level + j];
    const VertexSet verts = vertices(g, std::vector<Rat>(residual.begin(), residual.end()), free);
    if (verts.empty()) return false;
    Rat mn = verts.front()[0], mx = verts.front()[0];
    for (const auto& v : verts) {
      mn = std::min(mn, v[0]);
      mx = std::max(mx, v[0]);
    }
    lo = ceil_of(mn);
    hi = floor_of(mx);
    return lo <= hi;
  }

  IntMatrix G_;
  std::vector<Int> h_;
  std::size_t n_ = 0;
  std::vector<Int> point_;
};

}  // namespace detail

// Calls fn(const MixedPoint&) for every point of P on (1/m)Z^d1 x Z^d2, in
// lexicographic (z, x) order.
template <class Fn>
void for_each_grid_point(const Polytope& P, const Int& m, Fn&& fn) {
  P.check();
  if (m <= 0) throw DomainError("grid size must be positive");
  const PolytopeInfo info = validate(P);
  if (!info.bounded) throw UnboundedError("cannot enumerate an unbounded system");
  if (!info.feasible) return;
  // Integer variables (z, x~) with x = x~/m: m B z + A x~ <= m b.
  IntMatrix G(P.rows());
  std::vector<Int> h(P.rows());
  for (std::size_t i = 0; i < P.rows(); ++i) {
    for (std::size_t j = 0; j < P.d2; ++j) G[i].push_back(m * P.B[i][j]);
    for (std::size_t j = 0; j < P.d1; ++j) G[i].push_back(P.A[i][j]);
    h[i] = m * P.b[i];
  }
  detail::LatticeWalker walker(std::move(G), std::move(h), P.dim());
  MixedPoint pt;
  pt.grid = m;
  pt.x.resize(P.d1);
  pt.z.resize(P.d2);
  walker.run([&](std::span<const Int> y) {
    for (std::size_t j = 0; j < P.d2; ++j) pt.z[j] = y[j];
    for (std::size_t j = 0; j < P.d1; ++j) pt.x[j] = make_rat(y[P.d2 + j], m);
    fn(static_cast<const MixedPoint&>(pt));
  });
}

inline std::vector<MixedPoint> enumerate_grid_points(const Polytope& P, const Int& m) {
  std::vector<MixedPoint> out;
  for_each_grid_point(P, m, [&](const MixedPoint& p) { out.push_back(p); });
  return out;
}

// Integer points of P in (x, z) coordinate order.
inline std::vector<std::vector<Int>> lattice_points(const Polytope& P) {
  std::vector<std::vector<Int>> out;
  for_each_grid_point(P, Int(1), [&](const MixedPoint& p) {
    std::vector<Int> v;
    v.reserve(P.dim());
    for (const auto& x : p.x) v.push_back(x.get_num());
    v.insert(v.end(), p.z.begin(), p.z.end());
    out.push_back(std::move(v));
  });
  return out;
}

// Upper estimate of |P cap ((1/m)Z^d1 x Z^d2)| from the coordinate box.
inline Int grid_size_estimate(const PolytopeInfo& info, std::size_t d1, const Int& m) {
  require_polytope(info);
  Int total = 1;
  for (std::size_t j = 0; j < info.lower.size(); ++j) {
    const Rat scale = j < d1 ? Rat(m) : Rat(1);
    Int cnt = floor_of(info.upper[j] * scale) - ceil_of(info.lower[j] * scale) + 1;
    total *= std::max(cnt, Int(0));
  }
  return total;
}

namespace detail {

// Unique solution of the (possibly overdetermined) system M lambda = rhs when
// M has full column rank and the system is consistent.
inline std::optional<std::vector<Rat>> solve_full_column_rank(RatMatrix m, std::vector<Rat> rhs) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m.front().size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols; ++c, ++r) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) return std::nullopt;
    std::swap(m[piv], m[r]);
    std::swap(rhs[piv], rhs[r]);
    const Rat inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    rhs[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rat f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
      rhs[i] -= f * rhs[r];
    }
  }
  for (std::size_t i = r; i < rows; ++i)
    if (rhs[i] != 0) return std::nullopt;
  rhs.resize(cols);
  return rhs;
}

}  // namespace detail

// Convex multipliers with at most n+1 nonzero entries expressing target as a
// combination of the given points, searching supports by increasing size.
// Returns (support indices, multipliers); nullopt when target is outside the hull.
inline std::optional<std::pair<std::vector<std::size_t>, std::vector<Rat>>> caratheodory_multipliers(
    const VertexSet& verts, std::span<const Rat> target) {
  const std::size_t n = target.size();
  std::optional<std::pair<std::vector<std::size_t>, std::vector<Rat>>> out;
  for (std::size_t s = 1; s <= std::min(verts.size(), n + 1) && !out; ++s) {
    for_each_subset(verts.size(), s, [&](std::span<const std::size_t> idx) {
      RatMatrix m(n + 1, std::vector<Rat>(s));
      std::vector<Rat> rhs(n + 1);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < s; ++j) m[i][j] = verts[idx[j]][i];
        rhs[i] = target[i];
      }
      for (std::size_t j = 0; j < s; ++j) m[n][j] = 1;
      rhs[n] = 1;
      auto lambda = detail::solve_full_column_rank(std::move(m), std::move(rhs));
      if (!lambda) return true;
      for (const auto& l : *lambda)
        if (l < 0) return true;
      out.emplace(std::vector<std::size_t>(idx.begin(), idx.end()), std::move(*lambda));
      return false;
    });
  }
  return out;
}

// Rounds target inside the integral polytope conv(verts) onto (1/k)Z^n.
// Every multiplier but the first is floored to the 1/k grid, and the first
// absorbs the remainder. Result is within 2 n M / k of target in sup-norm.
inline std::vector<Rat> caratheodory_round(const VertexSet& verts, std::span<const Rat> target,
                                           const Int& k) {
  if (k <= 0) throw DomainError("rounding lattice needs k >= 1");
  for (const auto& v : verts) {
    if (v.size() != target.size()) throw ContractViolation("vertex has wrong dimension");
    for (const auto& c : v)
      if (!is_integral(c)) throw ContractViolation("caratheodory_round needs an integral polytope");
  }
  auto mult = caratheodory_multipliers(verts, target);
  if (!mult) throw ContractViolation("target point lies outside the polytope");
  const auto& [support, lambda] = *mult;
  std::vector<Rat> rounded(lambda.size());
  Rat rest = 1;
  for (std::size_t i = 1; i < lambda.size(); ++i) {
    rounded[i] = make_rat(floor_of(lambda[i] * k), k);
    rest -= rounded[i];
  }
  rounded[0] = rest;
  std::vector<Rat> x(target.size(), Rat(0));
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += rounded[i] * verts[support[i]][j];
  return x;
}

inline Rat sup_distance(std::span<const Rat> a, std::span<const Rat> b) {
  Rat d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max<Rat>(d, abs(a[i] - b[i]));
  return d;
}

// Grid rounding within the integral slice: returns a feasible point of P on
// the (1/m) grid in the same slice as (x*, z*) and within delta of x*.
// Requires m = k Delta with k >= (2/delta) d1 M.
inline MixedPoint mixed_round(const Polytope& P, const Int& delta_scale, std::span<const Rat> x_star,
                              std::span<const Int> z_star, const Rat& delta, const Int& m) {
  const PolytopeInfo info = validate(P);
  require_polytope(info);
  if (delta <= 0) throw DomainError("delta must be positive");
  if (delta_scale <= 0 || m <= 0 || m % delta_scale != 0)
    throw ContractViolation("grid size must be a positive multiple of Delta");
  if (!P.contains(x_star, z_star)) throw ContractViolation("target point is infeasible");
  const Int k = m / delta_scale;
  if (Rat(k) < 2 / delta * Rat(static_cast<unsigned long>(P.d1)) * info.M)
    throw ContractViolation("grid is too coarse for the requested delta");

  MixedPoint out;
  out.z.assign(z_star.begin(), z_star.end());
  out.grid = m;
  if (P.d1 == 0) return out;

  VertexSet verts = slice_vertices(P, z_star);
  for (auto& v : verts)
    for (auto& c : v) c *= delta_scale;
  std::vector<Rat> scaled(x_star.begin(), x_star.end());
  for (auto& c : scaled) c *= delta_scale;
  std::vector<Rat> x = caratheodory_round(verts, scaled, k);
  for (auto& c : x) c /= delta_scale;
  out.x = std::move(x);

  if (!P.contains(out.x, out.z) || !out.on_grid() || sup_distance(out.x, x_star) > delta)
    throw Error("grid rounding produced a point violating its guarantee");
  return out;
}

}  // namespace mixopt
