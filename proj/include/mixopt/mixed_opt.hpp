#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mixopt/integer_opt.hpp"
#include "mixopt/numeric.hpp"
#include "mixopt/polynomial.hpp"
#include "mixopt/polytope.hpp"

namespace mixopt {

// Pure integer instance A x~ + m B z <= m b over (x~, z) with objective
// f~(x~, z) = m^D f(x~/m, z). Grid points of P map to it by x~ = m x.
struct GridProblem {
  Polytope P;  // d1 = 0, columns (x~, z)
  Polynomial f;
  Int m;
  std::size_t d1 = 0;
  std::size_t d2 = 0;
  unsigned D = 0;

  MixedPoint to_mixed(std::span<const Int> y) const {
    MixedPoint p;
    p.grid = m;
    for (std::size_t j = 0; j < d1; ++j) p.x.push_back(make_rat(y[j], m));
    p.z.assign(y.begin() + static_cast<std::ptrdiff_t>(d1), y.end());
    return p;
  }

  std::vector<Int> from_mixed(const MixedPoint& p) const {
    std::vector<Int> y;
    for (const auto& x : p.x) {
      const Rat s = x * m;
      if (!is_integral(s)) throw ContractViolation("point is not on the grid");
      y.push_back(s.get_num());
    }
    y.insert(y.end(), p.z.begin(), p.z.end());
    return y;
  }
};

inline GridProblem grid_problem(const Polytope& P, const Polynomial& f, const Int& m) {
  P.check();
  if (m < 1) throw DomainError("grid size must be positive");
  if (f.dims() != P.dim()) throw ContractViolation("objective dimension does not match polytope");
  GridProblem gp;
  gp.m = m;
  gp.d1 = P.d1;
  gp.d2 = P.d2;
  gp.D = f.degree();
  gp.f = scale_substitute(f, m, P.d1);
  gp.P.d1 = 0;
  gp.P.d2 = P.dim();
  gp.P.A.assign(P.rows(), {});
  gp.P.B.resize(P.rows());
  gp.P.b.resize(P.rows());
  for (std::size_t i = 0; i < P.rows(); ++i) {
    gp.P.B[i] = P.A[i];
    for (const auto& v : P.B[i]) gp.P.B[i].push_back(m * v);
    gp.P.b[i] = m * P.b[i];
  }
  return gp;
}

// Certified parameters of the grid approximation for a given epsilon.
struct GridPlan {
  Rat epsilon;
  Rat M;
  Int Delta = 1;
  std::size_t d1 = 0;
  CoeffStats stats;
  Rat L;      // Lipschitz constant C r D max(M,1)^(D-1)
  Rat delta;  // rounding radius; 0 when unused (constant objective)
  Int m;
  bool degenerate = false;  // constant objective polynomial
};

inline GridPlan make_grid_plan(const PolytopeInfo& info, const Int& Delta, std::size_t d1,
                               const Polynomial& f, const Rat& eps) {
  require_open_unit(eps, "epsilon");
  require_polytope(info);
  if (!f.has_integer_coefficients()) throw ContractViolation("grid plan needs integer coefficients");
  GridPlan plan;
  plan.epsilon = eps;
  plan.M = info.M;
  plan.Delta = Delta;
  plan.d1 = d1;
  plan.stats = coeff_stats(f);
  plan.L = lipschitz_constant(plan.stats, info.M);
  const unsigned D = plan.stats.D;
  const Int d1i = static_cast<unsigned long>(d1);
  if (plan.L == 0) {
    plan.degenerate = true;
    plan.delta = 0;
    plan.m = Delta * std::max(Int(1), Int((D + 1) * d1i));
    return plan;
  }
  // The lower bound f* >= (D d1 Delta)^-D for non-constant objectives; the
  // base degenerates to 1 for pure integer instances (integral values).
  Int base = D * d1i * Delta;
  if (base < 1) base = 1;
  const Rat low = Rat(ipow(base, D));
  plan.delta = eps / (2 * low * plan.L);
  const Int k = ceil_of(4 / eps * low * plan.L * Rat(d1i) * info.M);
  plan.m = Delta * std::max(Int(1), k);
  return plan;
}

inline GridPlan make_grid_plan(const Polytope& P, const Polynomial& f, const Rat& eps) {
  return make_grid_plan(validate(P), integral_scaling_factor(P), P.d1, f, eps);
}

enum class GuaranteeKind { fptas, weak, oracle, constant };

inline const char* to_string(GuaranteeKind k) {
  switch (k) {
    case GuaranteeKind::fptas: return "fptas";
    case GuaranteeKind::weak: return "weak";
    case GuaranteeKind::oracle: return "oracle";
    case GuaranteeKind::constant: return "constant";
  }
  return "?";
}

// Operands of the inequality chain behind an FPTAS answer on a grid. With
// scale = q m^D, the grid objective is scale * g and is integral:
//   N <= (1 + eps_inner)^k,  U^k <= S < (U+1)^k,  N (L-1)^k < S <= N L^k,
//   scaled_value = scale * value >= L.
struct GridCertificate {
  GridPlan plan;
  Int m;  // grid actually used
  unsigned D = 0;
  Int q;  // denominator cleared on top of m^D
  Rat eps_inner;
  unsigned k = 1;
  Int N;
  Int moment;
  Int L_k;
  Int U_k;
  Int scaled_value;
  Rat inner_value;  // g(point)
  Rat lipschitz;  // Lipschitz constant of the optimized objective
  bool plan_grid = true;  // m is the plan's certified grid
  // A posteriori bound f* <= U_k / scale + lipschitz * delta_eff, when the
  // grid is a multiple of Delta; then `a_posteriori` reports value >= (1-eps) bound.
  std::optional<Rat> optimum_upper_bound;
  bool a_posteriori = false;
};

struct RangeState {
  unsigned i = 0;
  Rat L;
  Rat U;
};

struct WeakCertificate {
  Rat delta;
  unsigned n = 0;
  Int m_const;  // (D+1) d1 Delta grid of the constancy gate
  unsigned D = 0;
  Int multiplier;  // integer objective F = multiplier * f
  std::vector<RangeState> trace;
  Rat epsilon_inner;
};

struct Solution {
  MixedPoint point;
  Rat value;
  GuaranteeKind kind = GuaranteeKind::fptas;
  Rat epsilon;
  bool certified = true;
  std::optional<GridCertificate> grid;
  std::optional<WeakCertificate> weak;
};

struct SolveOptions {
  std::optional<Int> grid_m;  // uncertified override of the plan's grid
  Int max_grid_points = 2'000'000;
};

struct ConstancyResult {
  bool constant = false;
  Int m;
  unsigned D = 0;
  Int multiplier = 1;
  MixedPoint sample;  // first grid point
  Rat sample_value;
  std::optional<std::pair<MixedPoint, Rat>> witness;  // point with a different value
  Rat gap_bound;  // m^-D / multiplier
};

// Constancy on P cap (R^d1 x Z^d2), decided on the grid of size
// m = Delta * max(1, (D+1) d1).
inline ConstancyResult is_constant(const Polytope& P, const PolytopeInfo& info, const Int& Delta,
                                   const Polynomial& f) {
  require_polytope(info);
  if (f.dims() != P.dim()) throw ContractViolation("objective dimension does not match polytope");
  ConstancyResult res;
  auto [F, mult] = clear_denominators(f);
  res.multiplier = mult;
  res.D = F.degree();
  res.m = Delta * std::max(Int(1), Int(static_cast<unsigned long>((res.D + 1) * P.d1)));
  res.gap_bound = Rat(1) / (Rat(ipow(res.m, res.D)) * Rat(mult));
  bool first = true;
  for_each_grid_point(P, res.m, [&](const MixedPoint& p) {
    if (res.witness) return;
    const Rat v = f.evaluate(p.coords());
    if (first) {
      res.sample = p;
      res.sample_value = v;
      first = false;
    } else if (v != res.sample_value) {
      res.witness.emplace(p, v);
    }
  });
  if (first) throw InfeasibleError("feasible region is empty");
  res.constant = !res.witness;
  return res;
}

inline ConstancyResult is_constant(const Polytope& P, const Polynomial& f) {
  const PolytopeInfo info = validate(P);
  require_polytope(info);
  return is_constant(P, info, integral_scaling_factor(P), f);
}

namespace detail {

// Enumerated grid problem for one grid size, reusable across objectives
// that share the non-constant part of F.
struct GridContext {
  GridProblem problem;
  std::vector<std::vector<Int>> points;  // (x~, z)
  std::vector<Int> base_values;          // m^D F at each point
};

inline void check_grid_size(const PolytopeInfo& info, std::size_t d1, const Int& m,
                            const SolveOptions& opts) {
  const Int est = grid_size_estimate(info, d1, m);
  if (est > opts.max_grid_points) throw RefusedSizeError(m, est);
}

inline GridContext make_grid_context(const Polytope& P, const Polynomial& F, const Int& m) {
  GridContext ctx{grid_problem(P, F, m), {}, {}};
  ctx.points = lattice_points(ctx.problem.P);
  ctx.base_values.reserve(ctx.points.size());
  for (const auto& y : ctx.points) ctx.base_values.push_back(ctx.problem.f.evaluate(std::span<const Int>(y)));
  return ctx;
}

inline Int den_lcm(const Rat& a, const Rat& b) {
  Int q;
  mpz_lcm(q.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
  return q;
}

// FPTAS step on an enumerated grid for g = a F + c (a != 0), where F is the
// integer polynomial the context was built from. Bisection runs with eps/2.
inline Solution fptas_on_grid(const Polytope& P, const PolytopeInfo& info, const GridContext& ctx,
                              const GridPlan& plan, const Polynomial& g, const Rat& a, const Rat& c,
                              const Rat& eps, const Rat& lipschitz_g) {
  const Int mD = ipow(ctx.problem.m, ctx.problem.D);
  const Rat shift = c * Rat(mD);
  const Int q = den_lcm(a, shift);
  std::vector<Int> values;
  values.reserve(ctx.points.size());
  for (const auto& v : ctx.base_values) {
    const Rat s = (a * Rat(v) + shift) * Rat(q);
    values.push_back(s.get_num());
  }
  const Rat eps_inner = eps / 2;
  const IntegerSolution isol = bisection_solve(ctx.points, values, eps_inner);

  Solution sol;
  sol.point = ctx.problem.to_mixed(isol.point);
  sol.value = g.evaluate(sol.point.coords());
  sol.kind = GuaranteeKind::fptas;
  sol.epsilon = eps;

  GridCertificate cert;
  cert.plan = plan;
  cert.m = ctx.problem.m;
  cert.D = ctx.problem.D;
  cert.q = q;
  cert.eps_inner = eps_inner;
  cert.k = isol.k;
  cert.N = isol.N;
  cert.moment = isol.moment;
  cert.L_k = isol.root.L;
  cert.U_k = isol.root.U;
  cert.scaled_value = isol.value;
  cert.inner_value = sol.value;
  cert.lipschitz = lipschitz_g;
  cert.plan_grid = cert.m == plan.m;
  if (Rat(isol.value) != sol.value * Rat(q * mD))
    throw Error("grid objective and exact objective disagree");

  if (cert.m % plan.Delta == 0) {
    Rat delta_eff = 0;
    if (P.d1 > 0) {
      const Int k_eff = cert.m / plan.Delta;
      delta_eff = 2 * Rat(static_cast<unsigned long>(P.d1)) * info.M / Rat(k_eff);
    }
    const Rat bound = Rat(cert.U_k) / Rat(q * mD) + lipschitz_g * delta_eff;
    cert.optimum_upper_bound = bound;
    cert.a_posteriori = sol.value >= (1 - eps) * bound;
  }
  sol.certified = cert.plan_grid || cert.a_posteriori;
  sol.grid = std::move(cert);
  return sol;
}

inline Solution constant_solution(const ConstancyResult& cr, const Polynomial& g, const Rat& eps) {
  Solution sol;
  sol.point = cr.sample;
  sol.value = g.evaluate(cr.sample.coords());
  sol.kind = GuaranteeKind::constant;
  sol.epsilon = eps;
  return sol;
}

}  // namespace detail

// (1 - eps)-approximate maximizer of f >= 0 over P cap (R^d1 x Z^d2).
inline Solution fptas_maximize(const Polytope& P, const Polynomial& f, const Rat& eps,
                               const SolveOptions& opts = {}) {
  require_open_unit(eps, "epsilon");
  const PolytopeInfo info = validate(P);
  require_polytope(info);
  if (f.dims() != P.dim()) throw ContractViolation("objective dimension does not match polytope");
  const Int Delta = integral_scaling_factor(P);
  const ConstancyResult cr = is_constant(P, info, Delta, f);
  if (cr.constant) {
    if (cr.sample_value < 0) throw NegativeObjectiveError("objective is a negative constant");
    return detail::constant_solution(cr, f, eps);
  }
  auto [F, mult] = clear_denominators(f);
  const GridPlan plan = make_grid_plan(info, Delta, P.d1, F, eps);
  const Int m = opts.grid_m.value_or(plan.m);
  if (m < 1) throw DomainError("grid size must be positive");
  detail::check_grid_size(info, P.d1, m, opts);
  const auto ctx = detail::make_grid_context(P, F, m);
  const Rat a = Rat(1) / Rat(mult);
  return detail::fptas_on_grid(P, info, ctx, plan, f, a, Rat(0), eps, plan.L * a);
}

struct UpperBound {
  Rat u;
  Solution solution;
};

// f* <= u <= (1 + delta) f* for f >= 0, via the FPTAS with eps = delta/(1+delta).
inline UpperBound upper_bound(const Polytope& P, const Polynomial& f, const Rat& delta,
                              const SolveOptions& opts = {}) {
  if (delta <= 0) throw DomainError("delta must be positive");
  const Rat eps = delta / (1 + delta);
  Solution sol = fptas_maximize(P, f, eps, opts);
  return UpperBound{(1 + delta) * sol.value, std::move(sol)};
}

struct RangeTrace {
  Rat delta;
  std::vector<RangeState> states;  // states[i] = (i, L_i, U_i), i = 0..n
  std::optional<GridPlan> plan;    // shared by every iteration
  bool constant = false;
  MixedPoint sample;               // a feasible point
};

// Alternating upper bounds on f - L_i and U_i - f, starting from
// [-r C M^D, r C M^D]. The grid plan is built once from f and reused, since
// the constant term affects neither the Lipschitz bound nor the lower bound
// on the range.
inline RangeTrace range_bounds(const Polytope& P, const Polynomial& f, const Rat& delta, unsigned n,
                               const SolveOptions& opts = {}) {
  require_open_unit(delta, "delta");
  if (!f.has_integer_coefficients()) throw ContractViolation("range bounds need integer coefficients");
  const PolytopeInfo info = validate(P);
  require_polytope(info);
  if (f.dims() != P.dim()) throw ContractViolation("objective dimension does not match polytope");
  const Int Delta = integral_scaling_factor(P);

  RangeTrace trace;
  trace.delta = delta;
  const CoeffStats st = coeff_stats(f);
  const Rat bound = st.C * Rat(static_cast<unsigned long>(st.r)) * rpow(std::max<Rat>(info.M, 1), st.D);
  trace.states.push_back({0, -bound, bound});

  const ConstancyResult cr = is_constant(P, info, Delta, f);
  trace.constant = cr.constant;
  trace.sample = cr.sample;

  std::optional<detail::GridContext> ctx;
  if (!cr.constant) {
    trace.plan = make_grid_plan(info, Delta, P.d1, f, delta / (1 + delta));
    const Int m = opts.grid_m.value_or(trace.plan->m);
    detail::check_grid_size(info, P.d1, m, opts);
    ctx = detail::make_grid_context(P, f, m);
  }
  const Rat eps = delta / (1 + delta);
  for (unsigned i = 0; i < n; ++i) {
    const Rat& Li = trace.states.back().L;
    const Rat& Ui = trace.states.back().U;
    const Polynomial g = f - Li;
    const Polynomial h = Ui - f;
    Rat g_val, h_val;
    if (cr.constant) {
      g_val = g.evaluate(cr.sample.coords());
      h_val = h.evaluate(cr.sample.coords());
    } else {
      g_val = detail::fptas_on_grid(P, info, *ctx, *trace.plan, g, 1, -Li, eps, trace.plan->L).value;
      h_val = detail::fptas_on_grid(P, info, *ctx, *trace.plan, h, -1, Ui, eps, trace.plan->L).value;
    }
    const Rat U_next = Li + (1 + delta) * g_val;
    const Rat L_next = Ui - (1 + delta) * h_val;
    trace.states.push_back({i + 1, L_next, U_next});
  }
  return trace;
}

// Smallest n >= 0 with delta^n * X <= 1.
inline unsigned range_iterations(const Rat& delta, const Rat& X) {
  require_open_unit(delta, "delta");
  unsigned n = 0;
  Rat v = X;
  while (v > 1) {
    v *= delta;
    ++n;
  }
  return n;
}

// Weak approximation: |f(sol) - f_max| <= eps (f_max - f_min) for arbitrary f.
inline Solution weak_maximize(const Polytope& P, const Polynomial& f, const Rat& eps,
                              const SolveOptions& opts = {}) {
  require_open_unit(eps, "epsilon");
  const PolytopeInfo info = validate(P);
  require_polytope(info);
  if (f.dims() != P.dim()) throw ContractViolation("objective dimension does not match polytope");
  const Int Delta = integral_scaling_factor(P);
  auto [F, mult] = clear_denominators(f);

  WeakCertificate wc;
  wc.delta = Rat(1, 2);
  wc.D = F.degree();
  wc.multiplier = mult;
  wc.m_const = Delta * std::max(Int(1), Int(static_cast<unsigned long>((wc.D + 1) * P.d1)));
  const Rat mD = Rat(ipow(wc.m_const, wc.D));
  const CoeffStats st = coeff_stats(F);
  const Rat width0 = 2 * st.C * Rat(static_cast<unsigned long>(st.r)) * rpow(std::max<Rat>(info.M, 1), st.D);
  wc.n = range_iterations(wc.delta, 2 * mD * width0);

  SolveOptions range_opts = opts;
  range_opts.grid_m.reset();
  RangeTrace trace = range_bounds(P, F, wc.delta, wc.n, range_opts);
  wc.trace = trace.states;
  const Rat& Ln = trace.states.back().L;
  const Rat& Un = trace.states.back().U;
  const bool gate_constant = Un - Ln < 1 / mD;
  if (gate_constant != trace.constant)
    throw Error("range gate and grid constancy test disagree");
  wc.epsilon_inner = eps / (Rat(1, 2) + (1 + wc.delta) / (1 - wc.delta));

  Solution sol;
  if (gate_constant) {
    sol.point = trace.sample;
    sol.kind = GuaranteeKind::constant;
  } else {
    const GridPlan plan = make_grid_plan(info, Delta, P.d1, F, wc.epsilon_inner);
    const Int m = opts.grid_m.value_or(plan.m);
    detail::check_grid_size(info, P.d1, m, opts);
    const auto ctx = detail::make_grid_context(P, F, m);
    const Polynomial shifted = F - Ln;
    Solution inner = detail::fptas_on_grid(P, info, ctx, plan, shifted, 1, -Ln, wc.epsilon_inner, plan.L);
    sol.point = inner.point;
    sol.certified = inner.certified;
    sol.grid = std::move(inner.grid);
    sol.kind = GuaranteeKind::weak;
  }
  sol.value = f.evaluate(sol.point.coords());
  sol.epsilon = eps;
  sol.weak = std::move(wc);
  return sol;
}

// Brute-force optimum over the grid of size m (the oracle route).
inline Solution oracle_maximize(const Polytope& P, const Polynomial& f, const Int& m) {
  const auto pts = enumerate_grid_points(P, m);
  const OracleResult r = oracle_optimize(pts, f);
  Solution sol;
  sol.point = r.argmax;
  sol.value = r.max;
  sol.kind = GuaranteeKind::oracle;
  sol.epsilon = 0;
  return sol;
}

}  // namespace mixopt
