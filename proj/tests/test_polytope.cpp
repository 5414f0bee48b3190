#include <gtest/gtest.h>

#include <set>

#include "mixopt/io.hpp"
#include "mixopt/polytope.hpp"
#include "support.hpp"

using namespace mixopt;

namespace {

std::vector<oracle::RatVec> as_coords(const std::vector<MixedPoint>& pts) {
  std::vector<oracle::RatVec> out;
  for (const auto& p : pts) out.push_back(p.coords());
  return out;
}

std::set<oracle::RatVec> as_set(const std::vector<oracle::RatVec>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Polytope, ParityTriangle) {
  const Polytope P = make_parity_instance().P;
  const PolytopeInfo info = validate(P);
  EXPECT_TRUE(info.feasible);
  EXPECT_TRUE(info.bounded);
  EXPECT_EQ(info.M, 1);
  EXPECT_EQ(integral_scaling_factor(P), 2);
  EXPECT_EQ(info.lower, (std::vector<Rat>{0, 0}));
  EXPECT_EQ(info.upper, (std::vector<Rat>{1, 1}));
  const std::vector<Int> z1{1};
  EXPECT_EQ(slice_vertices(P, z1), (VertexSet{{Rat(1, 2)}}));
  const std::vector<Int> z0{0};
  EXPECT_EQ(slice_vertices(P, z0), (VertexSet{{0}, {1}}));
}

TEST(Polytope, GridEnumerationMatchesBruteForce) {
  oracle::Gen gen(21);
  for (int it = 0; it < 120; ++it) {
    const std::size_t d1 = gen.uniform(0, 2), d2 = gen.uniform(0, 2);
    if (d1 + d2 == 0) continue;
    const auto c = gen.polytope(d1, d2, 2, gen.uniform(0, 3));
    const long m = d1 ? gen.uniform(1, 4) : 1;
    const auto pts = enumerate_grid_points(c.P, m);
    EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end(), lex_less));
    for (const auto& p : pts) EXPECT_TRUE(p.on_grid());
    EXPECT_EQ(as_set(as_coords(pts)), as_set(oracle::brute_grid(c.P, c.box, m)));
    EXPECT_EQ(pts.size(), oracle::brute_grid(c.P, c.box, m).size());
    EXPECT_GE(grid_size_estimate(validate(c.P), d1, m), Int(static_cast<unsigned long>(pts.size())));
  }
}

TEST(Polytope, VerticesMatchCramer) {
  oracle::Gen gen(22);
  for (int it = 0; it < 80; ++it) {
    const auto c = gen.polytope(gen.uniform(1, 2), gen.uniform(0, 1), 3, gen.uniform(0, 3));
    const PolytopeInfo info = validate(c.P);
    std::vector<oracle::RatVec> G;
    oracle::RatVec h;
    for (const auto& row : c.P.full_matrix()) G.emplace_back(row.begin(), row.end());
    for (const auto& v : c.P.b) h.emplace_back(v);
    EXPECT_EQ(as_set(info.vertices), as_set(oracle::brute_vertices(G, h, c.P.dim())));
  }
}

TEST(Polytope, SliceVerticesMatchCramer) {
  oracle::Gen gen(23);
  for (int it = 0; it < 60; ++it) {
    const auto c = gen.polytope(gen.uniform(1, 2), gen.uniform(1, 2), 2, gen.uniform(1, 3));
    oracle::for_each_box_z(c.P, c.box, [&](const std::vector<Int>& z) {
      EXPECT_EQ(as_set(slice_vertices(c.P, z)), as_set(oracle::slice_vertices(c.P, z)));
    });
  }
}

TEST(Polytope, InfeasibleAndUnbounded) {
  Polytope empty{1, 0, {{1}, {-1}}, {{}, {}}, {0, -1}};  // x <= 0, x >= 1
  auto info = validate(empty);
  EXPECT_FALSE(info.feasible);
  EXPECT_THROW(require_polytope(info), InfeasibleError);
  EXPECT_TRUE(enumerate_grid_points(empty, 3).empty());

  Polytope ray{1, 1, {{-1}, {0}, {0}}, {{0}, {1}, {-1}}, {0, 1, 0}};  // x >= 0, z in [0,1]
  info = validate(ray);
  EXPECT_TRUE(info.feasible);
  EXPECT_FALSE(info.bounded);
  EXPECT_THROW(require_polytope(info), UnboundedError);
  EXPECT_THROW(enumerate_grid_points(ray, 1), UnboundedError);

  Polytope open_empty{1, 0, {{1}, {-1}, {0}}, {{}, {}, {}}, {5, 0, -1}};  // 0 <= -1 row
  EXPECT_FALSE(validate(open_empty).feasible);

  Polytope no_rows{0, 1, {}, {}, {}};
  info = validate(no_rows);
  EXPECT_FALSE(info.bounded);

  Polytope bad{1, 1, {{1, 2}}, {{1}}, {0}};
  EXPECT_THROW(validate(bad), ContractViolation);
}

TEST(Polytope, UnboundedInfeasibleSystemIsInfeasible) {
  // x - z <= -1/2 style: x <= z - 1, x >= z: unbounded cone, no points
  Polytope P{1, 1, {{1}, {-1}}, {{-1}, {1}}, {-1, 0}};
  const auto info = validate(P);
  EXPECT_FALSE(info.feasible);
  EXPECT_THROW(require_polytope(info), InfeasibleError);
}

TEST(Polytope, LpExtreme) {
  const Polytope P = make_parity_instance().P;
  const std::vector<Rat> obj{-1, 2};
  const auto mx = lp_extreme(P, obj, Sense::maximize);
  EXPECT_EQ(mx.value, Rat(3, 2));
  EXPECT_EQ(mx.point, (std::vector<Rat>{Rat(1, 2), 1}));
  const auto mn = lp_extreme(P, obj, Sense::minimize);
  EXPECT_EQ(mn.value, -1);
  EXPECT_EQ(mn.point, (std::vector<Rat>{1, 0}));
}

TEST(Polytope, ScalingFactorMakesSlicesIntegral) {
  oracle::Gen gen(24);
  for (int it = 0; it < 60; ++it) {
    const auto c = gen.polytope(gen.uniform(1, 2), gen.uniform(0, 2), 2, gen.uniform(0, 3));
    const Int Delta = integral_scaling_factor(c.P);
    EXPECT_GE(Delta, 1);
    oracle::for_each_box_z(c.P, c.box, [&](const std::vector<Int>& z) {
      for (const auto& v : oracle::slice_vertices(c.P, z))
        for (const auto& x : v) EXPECT_TRUE(is_integral(x * Delta));
    });
  }
  Polytope pure{0, 1, {{}, {}}, {{1}, {-1}}, {1, 0}};
  EXPECT_EQ(integral_scaling_factor(pure), 1);
}

TEST(Polytope, LatticePointsOrder) {
  Polytope sq{1, 1, {{1}, {-1}, {0}, {0}}, {{0}, {0}, {1}, {-1}}, {1, 0, 1, 0}};
  const auto pts = lattice_points(sq);
  ASSERT_EQ(pts.size(), 4u);
  // (x, z) coordinates, walked in (z, x) order
  EXPECT_EQ(pts[0], (std::vector<Int>{0, 0}));
  EXPECT_EQ(pts[1], (std::vector<Int>{1, 0}));
  EXPECT_EQ(pts[2], (std::vector<Int>{0, 1}));
}

TEST(Polytope, CaratheodoryRound) {
  const VertexSet square{{0, 0}, {0, 4}, {4, 0}, {4, 4}};
  const std::vector<Rat> t{Rat(7, 3), Rat(1, 5)};
  for (long k : {1, 2, 3, 7, 40}) {
    const auto x = caratheodory_round(square, t, k);
    for (const auto& c : x) EXPECT_TRUE(is_integral(c * k));
    EXPECT_LE(sup_distance(x, t), Rat(2 * 2 * 4, k));
    EXPECT_TRUE(x[0] >= 0 && x[0] <= 4 && x[1] >= 0 && x[1] <= 4);
  }
  const std::vector<Rat> out{5, 0};
  EXPECT_THROW(caratheodory_round(square, out, 2), ContractViolation);
  const VertexSet frac{{Rat(1, 2)}};
  const std::vector<Rat> half{Rat(1, 2)};
  EXPECT_THROW(caratheodory_round(frac, half, 2), ContractViolation);
}

TEST(Polytope, MixedRoundOnParity) {
  const Polytope P = make_parity_instance().P;
  const std::vector<Rat> x{Rat(1, 3)};
  const std::vector<Int> z{1};
  // z = 1 pins x = 1/2: the only candidate
  EXPECT_THROW(mixed_round(P, 2, x, z, Rat(1, 2), 8), ContractViolation);
  const std::vector<Rat> xh{Rat(1, 2)};
  const auto p = mixed_round(P, 2, xh, z, Rat(1, 2), 8);
  EXPECT_EQ(p.x, xh);
  EXPECT_THROW(mixed_round(P, 2, xh, z, Rat(1, 2), 7), ContractViolation);  // not a multiple of Delta
  EXPECT_THROW(mixed_round(P, 2, xh, z, Rat(1, 100), 8), ContractViolation);  // too coarse
}

TEST(Polytope, MixedRoundRandom) {
  oracle::Gen gen(25);
  int checked = 0;
  for (int it = 0; it < 60; ++it) {
    const auto c = gen.polytope(gen.uniform(1, 2), gen.uniform(0, 1), 2, gen.uniform(0, 2));
    const auto info = validate(c.P);
    const Int Delta = integral_scaling_factor(c.P);
    const Rat delta(1, gen.uniform(1, 4));
    const Int k = ceil_of(2 / delta * Rat(static_cast<unsigned long>(c.P.d1)) * info.M);
    oracle::for_each_box_z(c.P, c.box, [&](const std::vector<Int>& z) {
      const auto verts = oracle::slice_vertices(c.P, z);
      if (verts.empty()) return;
      std::vector<Rat> target(c.P.d1, Rat(0));
      Rat total = 0;
      std::vector<Rat> w;
      for (std::size_t i = 0; i < verts.size(); ++i) total += w.emplace_back(gen.uniform(0, 5));
      if (total == 0) w[0] = total = 1;
      for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = 0; j < c.P.d1; ++j) target[j] += w[i] / total * verts[i][j];
      const auto p = mixed_round(c.P, Delta, target, z, delta, k * Delta);
      EXPECT_TRUE(c.P.contains(p.x, p.z));
      EXPECT_TRUE(p.on_grid());
      EXPECT_LE(sup_distance(p.x, target), delta);
      ++checked;
    });
  }
  EXPECT_GT(checked, 50);
}
