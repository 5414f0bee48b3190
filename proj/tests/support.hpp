#pragma once

// Instance generators and brute-force oracles shared by the unit and
// acceptance tests. Nothing here calls the library's enumeration, vertex or
// determinant code.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "mixopt/mixopt.hpp"

namespace oracle {

using mixopt::Int;
using mixopt::Polynomial;
using mixopt::Polytope;
using mixopt::Rat;
using RatVec = std::vector<Rat>;

// Integer bounding box of a generated instance, in (x, z) order.
struct Box {
  std::vector<int> lo, hi;
};

struct Case {
  Polytope P;
  Box box;
  Polynomial f;
};

// gmpxx leaves num/den constructions uncanonicalized.
inline Rat frac(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat naive_eval(const Polynomial& f, const RatVec& y) {
  Rat s = 0;
  for (const auto& [e, c] : f.terms()) {
    Rat t = c;
    for (std::size_t j = 0; j < e.size(); ++j)
      for (unsigned p = 0; p < e[j]; ++p) t *= y[j];
    s += t;
  }
  return s;
}

inline bool inside(const Polytope& P, const RatVec& y) {
  for (std::size_t i = 0; i < P.rows(); ++i) {
    Rat lhs = 0;
    for (std::size_t j = 0; j < P.d1; ++j) lhs += P.A[i][j] * y[j];
    for (std::size_t j = 0; j < P.d2; ++j) lhs += Rat(P.B[i][j]) * y[P.d1 + j];
    if (lhs > Rat(P.b[i])) return false;
  }
  return true;
}

// Every point of P with x in (1/m)Z^d1 and z integral, by nested loops over the box.
inline std::vector<RatVec> brute_grid(const Polytope& P, const Box& box, long m) {
  const std::size_t n = P.dim();
  std::vector<long> lo(n), hi(n), cur(n);
  for (std::size_t j = 0; j < n; ++j) {
    const long s = j < P.d1 ? m : 1;
    lo[j] = box.lo[j] * s;
    hi[j] = box.hi[j] * s;
  }
  std::vector<RatVec> out;
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == n) {
      RatVec y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = i < P.d1 ? frac(cur[i], m) : Rat(cur[i]);
      if (inside(P, y)) out.push_back(std::move(y));
      return;
    }
    for (cur[j] = lo[j]; cur[j] <= hi[j]; ++cur[j]) rec(j + 1);
  };
  rec(0);
  return out;
}

struct Extremes {
  Rat max, min;
  RatVec argmax, argmin;
  std::size_t count = 0;
};

inline Extremes extremes(const std::vector<RatVec>& pts, const Polynomial& f) {
  Extremes e;
  for (const auto& y : pts) {
    const Rat v = naive_eval(f, y);
    if (e.count == 0 || v > e.max) e.max = v, e.argmax = y;
    if (e.count == 0 || v < e.min) e.min = v, e.argmin = y;
    ++e.count;
  }
  return e;
}

inline Rat det_laplace(const std::vector<RatVec>& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  Rat s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c] == 0) continue;
    std::vector<RatVec> minor;
    for (std::size_t r = 1; r < n; ++r) {
      RatVec row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(std::move(row));
    }
    const Rat t = a[0][c] * det_laplace(minor);
    s += (c % 2 == 0) ? t : Rat(-t);
  }
  return s;
}

// Vertices of {y : G y <= h} by Cramer's rule over all n-subsets of rows.
inline std::vector<RatVec> brute_vertices(const std::vector<RatVec>& G, const RatVec& h, std::size_t n) {
  std::vector<RatVec> out;
  if (n == 0) {
    if (std::all_of(h.begin(), h.end(), [](const Rat& v) { return v >= 0; })) out.emplace_back();
    return out;
  }
  std::vector<std::size_t> idx(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == n) {
      std::vector<RatVec> M(n);
      for (std::size_t i = 0; i < n; ++i) M[i] = G[idx[i]];
      const Rat d = det_laplace(M);
      if (d == 0) return;
      RatVec y(n);
      for (std::size_t c = 0; c < n; ++c) {
        auto Mc = M;
        for (std::size_t i = 0; i < n; ++i) Mc[i][c] = h[idx[i]];
        y[c] = det_laplace(Mc) / d;
      }
      for (std::size_t i = 0; i < G.size(); ++i) {
        Rat lhs = 0;
        for (std::size_t c = 0; c < n; ++c) lhs += G[i][c] * y[c];
        if (lhs > h[i]) return;
      }
      if (std::find(out.begin(), out.end(), y) == out.end()) out.push_back(std::move(y));
      return;
    }
    for (std::size_t i = start; i < G.size(); ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return out;
}

// Vertices of the continuous slice P_z.
inline std::vector<RatVec> slice_vertices(const Polytope& P, const std::vector<Int>& z) {
  std::vector<RatVec> G(P.rows());
  RatVec h(P.rows());
  for (std::size_t i = 0; i < P.rows(); ++i) {
    for (std::size_t j = 0; j < P.d1; ++j) G[i].emplace_back(P.A[i][j]);
    Rat r = P.b[i];
    for (std::size_t j = 0; j < P.d2; ++j) r -= Rat(P.B[i][j] * z[j]);
    h[i] = r;
  }
  return brute_vertices(G, h, P.d1);
}

inline void for_each_box_z(const Polytope& P, const Box& box, const std::function<void(const std::vector<Int>&)>& fn) {
  std::vector<Int> z(P.d2);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == P.d2) return fn(z);
    for (int v = box.lo[P.d1 + j]; v <= box.hi[P.d1 + j]; ++v) {
      z[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
}

// Exact extremes over the mixed set when f is affine in x for every fixed z:
// each slice optimum sits at a slice vertex.
inline Extremes affine_x_extremes(const Polytope& P, const Box& box, const Polynomial& f) {
  std::vector<RatVec> cands;
  for_each_box_z(P, box, [&](const std::vector<Int>& z) {
    for (auto& x : slice_vertices(P, z)) {
      for (const auto& v : z) x.emplace_back(v);
      cands.push_back(std::move(x));
    }
  });
  return extremes(cands, f);
}

// Exact constancy verdict on the mixed set. On a simplex spanned by slice
// vertices a polynomial of degree <= D is fixed by its values on the
// barycentric lattice of order D, and the slices are unions of such simplices.
inline bool constant_on_mixed_set(const Polytope& P, const Box& box, const Polynomial& f) {
  const unsigned D = std::max(1u, f.degree());
  std::optional<Rat> first;
  bool constant = true;
  for_each_box_z(P, box, [&](const std::vector<Int>& z) {
    if (!constant) return;
    const auto verts = slice_vertices(P, z);
    const std::size_t nv = verts.size();
    std::vector<std::size_t> pick;
    std::vector<unsigned> weight;
    // weights over the picked vertices summing to D
    std::function<void(std::size_t, unsigned)> spread = [&](std::size_t i, unsigned left) {
      if (!constant) return;
      if (i + 1 == pick.size()) {
        weight[i] = left;
        RatVec y(P.d1, Rat(0));
        for (std::size_t k = 0; k < pick.size(); ++k)
          for (std::size_t j = 0; j < P.d1; ++j) y[j] += Rat(weight[k]) / Rat(D) * verts[pick[k]][j];
        for (const auto& v : z) y.emplace_back(v);
        const Rat val = naive_eval(f, y);
        if (!first) first = val;
        constant = constant && val == *first;
        return;
      }
      for (unsigned w = 0; w <= left; ++w) {
        weight[i] = w;
        spread(i + 1, left - w);
      }
    };
    std::function<void(std::size_t)> choose = [&](std::size_t start) {
      if (!pick.empty()) {
        weight.assign(pick.size(), 0);
        spread(0, D);
      }
      if (pick.size() == P.d1 + 1) return;
      for (std::size_t i = start; i < nv; ++i) {
        pick.push_back(i);
        choose(i + 1);
        pick.pop_back();
      }
    };
    choose(0);
  });
  return constant;
}

inline bool affine_in_x(const Polynomial& f, std::size_t d1) {
  for (const auto& [e, c] : f.terms()) {
    unsigned s = 0;
    for (std::size_t j = 0; j < d1; ++j) s += e[j];
    if (s > 1) return false;
  }
  return true;
}

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  // Box within [-bound, bound]^d (continuous sides have positive length)
  // plus a few cuts with coefficients in [-coef, coef] that keep an integral
  // anchor point feasible.
  Case polytope(std::size_t d1, std::size_t d2, int bound, int cuts, int coef = 3) {
    Case c;
    Polytope& P = c.P;
    P.d1 = d1;
    P.d2 = d2;
    const std::size_t n = d1 + d2;
    std::vector<int> anchor(n);
    for (std::size_t j = 0; j < n; ++j) {
      int lo = uniform(-bound, j < d1 ? bound - 1 : bound);
      int hi = uniform(j < d1 ? lo + 1 : lo, bound);
      c.box.lo.push_back(lo);
      c.box.hi.push_back(hi);
      anchor[j] = uniform(lo, hi);
    }
    auto add_row = [&](const std::vector<int>& a, long rhs) {
      std::vector<Int> ra, rb;
      for (std::size_t j = 0; j < n; ++j) (j < d1 ? ra : rb).emplace_back(a[j]);
      P.A.push_back(std::move(ra));
      P.B.push_back(std::move(rb));
      P.b.emplace_back(rhs);
    };
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<int> e(n, 0);
      e[j] = 1;
      add_row(e, c.box.hi[j]);
      e[j] = -1;
      add_row(e, -c.box.lo[j]);
    }
    for (int k = 0; k < cuts; ++k) {
      std::vector<int> a(n);
      bool nonzero = false;
      while (!nonzero) {
        for (auto& v : a) v = uniform(-coef, coef);
        nonzero = std::any_of(a.begin(), a.end(), [](int v) { return v != 0; });
      }
      long rhs = uniform(0, 3);
      for (std::size_t j = 0; j < n; ++j) rhs += long(a[j]) * anchor[j];
      add_row(a, rhs);
    }
    return c;
  }

  // Random polynomial with integer coefficients in [-coef, coef]; when
  // affine_x is set, every term has degree at most one in the first d1 variables.
  Polynomial polynomial(std::size_t dims, unsigned max_deg, int terms, int coef, std::size_t d1 = 0,
                        bool affine_x = false) {
    Polynomial f(dims);
    for (int t = 0; t < terms; ++t) {
      mixopt::Exponent e(dims, 0);
      const unsigned deg = uniform(0, int(max_deg));
      for (unsigned k = 0; k < deg; ++k) {
        std::size_t j = uniform(0, int(dims) - 1);
        if (affine_x && j < d1) {
          unsigned sx = 0;
          for (std::size_t i = 0; i < d1; ++i) sx += e[i];
          if (sx >= 1) {
            if (dims == d1) continue;
            j = d1 + uniform(0, int(dims - d1) - 1);
          }
        }
        ++e[j];
      }
      int c = 0;
      while (c == 0) c = uniform(-coef, coef);
      f.add_term(std::move(e), c);
    }
    return f;
  }
};

// Sup-norm Lipschitz bound computed straight from the terms.
inline Rat lipschitz_bound(const Polynomial& f, const Rat& M) {
  Rat C = 0;
  unsigned D = 0;
  for (const auto& [e, c] : f.terms()) {
    C = std::max<Rat>(C, abs(c));
    unsigned s = 0;
    for (auto v : e) s += v;
    D = std::max(D, s);
  }
  if (D == 0) return 0;
  Rat p = 1;
  for (unsigned i = 1; i < D; ++i) p *= M;
  return C * Rat(static_cast<long>(f.size())) * Rat(static_cast<long>(D)) * p;
}

inline std::vector<Rat> coords(const mixopt::MixedPoint& p) { return p.coords(); }

}  // namespace oracle
