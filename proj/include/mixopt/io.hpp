#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include "mixopt/mixed_opt.hpp"

namespace mixopt {

using json = nlohmann::json;

// Malformed instance or report; `where` is a JSON pointer to the field.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct Instance {
  std::string name;
  std::string description;
  Polytope P;
  Polynomial objective;
};

namespace io_detail {

inline std::string ptr(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

inline Int int_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Int(std::to_string(j.get<std::uint64_t>()))
                                  : Int(std::to_string(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    try {
      return parse_int(j.get<std::string>());
    } catch (const Error& e) {
      throw ParseError(where, e.what());
    }
  }
  throw ParseError(where, "expected an integer or a decimal string");
}

inline Rat rat_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rat(int_from_json(j, where));
  if (!j.is_string()) throw ParseError(where, "expected a rational string \"p/q\"");
  try {
    return parse_rat(j.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(where, e.what());
  }
}

inline std::size_t size_from_json(const json& j, const std::string& where) {
  if (!j.is_number_unsigned()) throw ParseError(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline IntMatrix matrix_from_json(const json& j, const std::string& where, std::size_t cols) {
  if (!j.is_array()) throw ParseError(where, "expected an array of rows");
  IntMatrix m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    const std::string w = ptr(where, i);
    if (!row.is_array()) throw ParseError(w, "expected an array");
    if (row.size() != cols)
      throw ParseError(w, "expected " + std::to_string(cols) + " entries, got " + std::to_string(row.size()));
    std::vector<Int> r;
    for (std::size_t c = 0; c < row.size(); ++c) r.push_back(int_from_json(row[c], ptr(w, c)));
    m.push_back(std::move(r));
  }
  return m;
}

}  // namespace io_detail

// Integers that fit in 64 bits are JSON numbers, larger ones decimal strings.
inline json int_to_json(const Int& v) {
  if (v.fits_slong_p()) return static_cast<std::int64_t>(v.get_si());
  return v.get_str();
}

inline json rat_to_json(const Rat& v) { return to_string(v); }

// Report fields are always exact decimal strings.
inline json exact_json(const Int& v) { return v.get_str(); }
inline json exact_json(unsigned long v) { return std::to_string(v); }

inline json polynomial_to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exponents", e}, {"coefficient", rat_to_json(c)}});
  return terms;
}

inline Polynomial polynomial_from_json(const json& j, std::size_t dims, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array of terms");
  Polynomial p(dims);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = io_detail::ptr(where, i);
    const auto& t = j[i];
    if (!t.is_object()) throw ParseError(w, "expected a term object");
    if (!t.contains("exponents")) throw ParseError(w, "missing field 'exponents'");
    if (!t.contains("coefficient")) throw ParseError(w, "missing field 'coefficient'");
    const auto& ex = t["exponents"];
    if (!ex.is_array() || ex.size() != dims)
      throw ParseError(w + "/exponents", "expected " + std::to_string(dims) + " exponents");
    Exponent e;
    for (std::size_t k = 0; k < ex.size(); ++k) {
      if (!ex[k].is_number_unsigned()) throw ParseError(io_detail::ptr(w + "/exponents", k), "expected a non-negative integer");
      e.push_back(ex[k].get<unsigned>());
    }
    p.add_term(std::move(e), io_detail::rat_from_json(t["coefficient"], w + "/coefficient"));
  }
  return p;
}

inline json point_to_json(const MixedPoint& p) {
  json x = json::array(), z = json::array();
  for (const auto& v : p.x) x.push_back(rat_to_json(v));
  for (const auto& v : p.z) z.push_back(exact_json(v));
  return {{"x", x}, {"z", z}, {"grid", exact_json(p.grid)}};
}

inline MixedPoint point_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("x") || !j.contains("z")) throw ParseError(where, "expected a point {x, z}");
  MixedPoint p;
  for (std::size_t i = 0; i < j["x"].size(); ++i) p.x.push_back(io_detail::rat_from_json(j["x"][i], io_detail::ptr(where + "/x", i)));
  for (std::size_t i = 0; i < j["z"].size(); ++i) p.z.push_back(io_detail::int_from_json(j["z"][i], io_detail::ptr(where + "/z", i)));
  if (j.contains("grid")) p.grid = io_detail::int_from_json(j["grid"], where + "/grid");
  return p;
}

inline json instance_to_json(const Instance& inst) {
  json A = json::array(), B = json::array(), b = json::array();
  for (const auto& row : inst.P.A) {
    json r = json::array();
    for (const auto& v : row) r.push_back(int_to_json(v));
    A.push_back(r);
  }
  for (const auto& row : inst.P.B) {
    json r = json::array();
    for (const auto& v : row) r.push_back(int_to_json(v));
    B.push_back(r);
  }
  for (const auto& v : inst.P.b) b.push_back(int_to_json(v));
  json j = {{"d1", inst.P.d1}, {"d2", inst.P.d2}, {"A", A}, {"B", B}, {"b", b},
            {"objective", polynomial_to_json(inst.objective)}};
  if (!inst.name.empty()) j["name"] = inst.name;
  if (!inst.description.empty()) j["description"] = inst.description;
  return j;
}

inline Instance instance_from_json(const json& j) {
  using namespace io_detail;
  if (!j.is_object()) throw ParseError("", "instance must be a JSON object");
  for (const char* key : {"d1", "d2", "A", "B", "b", "objective"})
    if (!j.contains(key)) throw ParseError(std::string("/") + key, "missing field");
  Instance inst;
  inst.P.d1 = size_from_json(j["d1"], "/d1");
  inst.P.d2 = size_from_json(j["d2"], "/d2");
  if (!j["b"].is_array()) throw ParseError("/b", "expected an array");
  for (std::size_t i = 0; i < j["b"].size(); ++i) inst.P.b.push_back(int_from_json(j["b"][i], ptr("/b", i)));
  inst.P.A = matrix_from_json(j["A"], "/A", inst.P.d1);
  inst.P.B = matrix_from_json(j["B"], "/B", inst.P.d2);
  const std::size_t p = inst.P.b.size();
  // A p x 0 block may be written as [].
  if (inst.P.d1 == 0 && inst.P.A.empty()) inst.P.A.assign(p, {});
  if (inst.P.d2 == 0 && inst.P.B.empty()) inst.P.B.assign(p, {});
  if (inst.P.A.size() != p) throw ParseError("/A", "expected " + std::to_string(p) + " rows to match b");
  if (inst.P.B.size() != p) throw ParseError("/B", "expected " + std::to_string(p) + " rows to match b");
  inst.objective = polynomial_from_json(j["objective"], inst.P.dim(), "/objective");
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ParseError("/name", "expected a string");
    inst.name = j["name"].get<std::string>();
  }
  if (j.contains("description")) {
    if (!j["description"].is_string()) throw ParseError("/description", "expected a string");
    inst.description = j["description"].get<std::string>();
  }
  return inst;
}

inline Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
  return instance_from_json(j);
}

inline std::string serialize_instance(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

// x^2 = a (mod b) with 0 < x < c as max of -(x^2 - a - b y)^2 over the lattice
// points of 1 <= x <= c-1, (1-a)/b <= y <= ((c-1)^2-a)/b.
inline Instance make_an1_instance(const Int& a, const Int& b, const Int& c) {
  if (a <= 0 || b <= 0 || c <= 0) throw DomainError("AN1 parameters must be positive integers");
  if (c < 2) throw DomainError("AN1 needs c >= 2 so that 1 <= x <= c-1 is nonempty");
  Instance inst;
  inst.name = "an1-" + a.get_str() + "-" + b.get_str() + "-" + c.get_str();
  inst.description = "quadratic residue instance: maximize -(x^2 - a - b y)^2";
  inst.P.d1 = 0;
  inst.P.d2 = 2;
  const Int cm1 = c - 1;
  inst.P.B = {{-1, 0}, {1, 0}, {0, -b}, {0, b}};
  inst.P.b = {-1, cm1, a - 1, cm1 * cm1 - a};
  inst.P.A.assign(4, {});
  const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  const Polynomial inner = x * x - Rat(a) - Rat(b) * y;
  inst.objective = -(inner * inner);
  return inst;
}

// max 2z - x  s.t. z <= 2x, z <= 2(1-x), x >= 0, 0 <= z <= 1.
inline Instance make_parity_instance() {
  Instance inst;
  inst.name = "parity";
  inst.description = "triangle whose grid optima alternate between even and odd grid sizes";
  inst.P.d1 = 1;
  inst.P.d2 = 1;
  inst.P.A = {{-2}, {2}, {-1}, {0}, {0}};
  inst.P.B = {{1}, {1}, {0}, {1}, {-1}};
  inst.P.b = {0, 2, 0, 1, 0};
  Polynomial f(2);
  f.add_term({0, 1}, 2);
  f.add_term({1, 0}, -1);
  inst.objective = f;
  return inst;
}

// ---------------------------------------------------------------------------
// Reports

enum class Status { ok, infeasible, unbounded, constant, refused_size, error, internal };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::constant: return "constant";
    case Status::refused_size: return "refused-size";
    case Status::error: return "error";
    case Status::internal: return "internal";
  }
  return "internal";
}

inline int exit_code(Status s) {
  switch (s) {
    case Status::ok:
    case Status::constant: return 0;
    case Status::error: return 2;
    case Status::infeasible:
    case Status::unbounded: return 3;
    case Status::refused_size: return 4;
    case Status::internal: return 5;
  }
  return 5;
}

inline json plan_to_json(const GridPlan& p) {
  return {{"epsilon", rat_to_json(p.epsilon)},  {"M", rat_to_json(p.M)},       {"Delta", exact_json(p.Delta)},
          {"d1", exact_json(p.d1)},             {"C", rat_to_json(p.stats.C)}, {"r", exact_json(p.stats.r)},
          {"D", exact_json(p.stats.D)},         {"L", rat_to_json(p.L)},       {"delta", rat_to_json(p.delta)},
          {"m", exact_json(p.m)},               {"degenerate", p.degenerate}};
}

inline json grid_certificate_to_json(const GridCertificate& c) {
  json j = {{"plan", plan_to_json(c.plan)},
            {"m", exact_json(c.m)},
            {"D", exact_json(c.D)},
            {"q", exact_json(c.q)},
            {"eps_inner", rat_to_json(c.eps_inner)},
            {"k", exact_json(c.k)},
            {"N", exact_json(c.N)},
            {"moment", exact_json(c.moment)},
            {"L_k", exact_json(c.L_k)},
            {"U_k", exact_json(c.U_k)},
            {"scaled_value", exact_json(c.scaled_value)},
            {"inner_value", rat_to_json(c.inner_value)},
            {"lipschitz", rat_to_json(c.lipschitz)},
            {"plan_grid", c.plan_grid},
            {"a_posteriori", c.a_posteriori}};
  if (c.optimum_upper_bound) j["optimum_upper_bound"] = rat_to_json(*c.optimum_upper_bound);
  return j;
}

inline json trace_to_json(const std::vector<RangeState>& states) {
  json t = json::array();
  for (const auto& s : states) t.push_back({{"i", exact_json(s.i)}, {"L", rat_to_json(s.L)}, {"U", rat_to_json(s.U)}});
  return t;
}

inline json solution_to_json(const Solution& s) {
  json j = {{"point", point_to_json(s.point)},
            {"value", rat_to_json(s.value)},
            {"guarantee", {{"kind", to_string(s.kind)}, {"epsilon", rat_to_json(s.epsilon)}}},
            {"certified", s.certified}};
  json cert = json::object();
  if (s.grid) cert["grid"] = grid_certificate_to_json(*s.grid);
  if (s.weak) {
    const auto& w = *s.weak;
    cert["weak"] = {{"delta", rat_to_json(w.delta)},     {"n", exact_json(w.n)},
                    {"m_const", exact_json(w.m_const)}, {"D", exact_json(w.D)},
                    {"multiplier", exact_json(w.multiplier)}, {"trace", trace_to_json(w.trace)},
                    {"epsilon_inner", rat_to_json(w.epsilon_inner)}};
  }
  j["certificate"] = cert;
  return j;
}

// ---------------------------------------------------------------------------
// Certificate replay: recomputes every inequality of an optimize report from
// the operands stored in it (plus the embedded instance).

struct ReplayCheck {
  std::string name;
  bool ok = false;
};

namespace io_detail {

inline Rat R(const json& j, const char* key) { return rat_from_json(j.at(key), std::string("/") + key); }
inline Int I(const json& j, const char* key) { return int_from_json(j.at(key), std::string("/") + key); }
inline unsigned long Z(const json& j, const char* key) {
  const Int v = I(j, key);
  if (v < 0 || !v.fits_ulong_p()) throw ParseError(std::string("/") + key, "expected a small non-negative integer");
  return v.get_ui();
}

inline void replay_plan(const json& p, std::vector<ReplayCheck>& out) {
  const Rat eps = R(p, "epsilon"), M = R(p, "M"), C = R(p, "C"), L = R(p, "L"), delta = R(p, "delta");
  const Int Delta = I(p, "Delta"), m = I(p, "m");
  const auto d1 = Z(p, "d1");
  const auto r = Z(p, "r");
  const auto D = static_cast<unsigned>(Z(p, "D"));
  const Rat Lexp = D == 0 ? Rat(0) : C * Rat(r) * Rat(D) * rpow(std::max<Rat>(M, 1), D - 1);
  out.push_back({"plan: L = C r D max(M,1)^(D-1)", L == Lexp});
  if (p.at("degenerate").get<bool>()) {
    out.push_back({"plan: degenerate grid m = Delta max(1,(D+1) d1)",
                   m == Delta * std::max(Int(1), Int(static_cast<unsigned long>((D + 1) * d1)))});
    return;
  }
  Int base = Int(D) * Int(d1) * Delta;
  if (base < 1) base = 1;
  const Rat low = Rat(ipow(base, D));
  out.push_back({"plan: delta = eps / (2 (D d1 Delta)^D L)", delta * 2 * low * L == eps});
  const Int k = ceil_of(4 / eps * low * L * Rat(d1) * M);
  out.push_back({"plan: m = Delta ceil((4/eps) (D d1 Delta)^D L d1 M)", m == Delta * std::max(Int(1), k)});
  out.push_back({"plan: m >= Delta (2/delta) d1 M", Rat(m) >= Rat(Delta) * 2 / delta * Rat(d1) * M});
}

inline void replay_grid(const json& c, std::vector<ReplayCheck>& out) {
  replay_plan(c.at("plan"), out);
  const auto k = static_cast<unsigned>(Z(c, "k"));
  const auto D = static_cast<unsigned>(Z(c, "D"));
  const Int N = I(c, "N"), S = I(c, "moment");
  const Int L = I(c, "L_k"), U = I(c, "U_k"), sv = I(c, "scaled_value"), q = I(c, "q"), m = I(c, "m");
  const Rat eps_inner = R(c, "eps_inner"), inner = R(c, "inner_value");
  out.push_back({"inner tolerance is eps/2", eps_inner * 2 == R(c.at("plan"), "epsilon")});
  out.push_back({"N <= (1 + eps_inner)^k", Rat(N) <= rpow(1 + eps_inner, k)});
  out.push_back({"U_k^k <= S_k < (U_k+1)^k", ipow(U, k) <= S && S < ipow(U + 1, k)});
  out.push_back({"N (L_k-1)^k < S_k <= N L_k^k",
                 S <= N * ipow(L, k) && (L == 0 || N * ipow(L - 1, k) < S)});
  out.push_back({"scaled value = q m^D inner value", Rat(sv) == Rat(q * ipow(m, D)) * inner});
  out.push_back({"scaled value >= L_k", sv >= L});
}

}  // namespace io_detail

inline std::vector<ReplayCheck> replay_certificate(const json& report) {
  using namespace io_detail;
  std::vector<ReplayCheck> out;
  const Instance inst = instance_from_json(report.at("instance"));
  const json& sol = report.at("solution");
  const MixedPoint pt = point_from_json(sol.at("point"), "/solution/point");
  const Rat value = rat_from_json(sol.at("value"), "/solution/value");
  const std::vector<Rat> coords = pt.coords();
  out.push_back({"point is feasible", pt.x.size() == inst.P.d1 && pt.z.size() == inst.P.d2 && inst.P.contains(pt.x, pt.z)});
  out.push_back({"point is on its grid", pt.on_grid()});
  out.push_back({"value = f(point)", inst.objective.evaluate(coords) == value});
  const json& cert = sol.at("certificate");
  const std::string kind = sol.at("guarantee").at("kind").get<std::string>();
  if (cert.contains("grid")) {
    const json& g = cert.at("grid");
    replay_grid(g, out);
    const Rat inner = R(g, "inner_value");
    if (kind == "fptas") out.push_back({"inner value = value", inner == value});
    if (cert.contains("weak")) {
      const json& w = cert.at("weak");
      const Rat Ln = rat_from_json(w.at("trace").back().at("L"), "/trace/L");
      out.push_back({"inner value = multiplier f(point) - L_n", inner == Rat(I(w, "multiplier")) * value - Ln});
    }
  }
  if (cert.contains("weak")) {
    const json& w = cert.at("weak");
    const Rat delta = R(w, "delta"), eps = rat_from_json(sol.at("guarantee").at("epsilon"), "/epsilon");
    const auto n = Z(w, "n");
    const auto D = static_cast<unsigned>(Z(w, "D"));
    const Int mc = I(w, "m_const");
    const json& tr = w.at("trace");
    const Rat L0 = rat_from_json(tr.front().at("L"), "/trace/0/L"), U0 = rat_from_json(tr.front().at("U"), "/trace/0/U");
    const Rat Ln = rat_from_json(tr.back().at("L"), "/trace/L"), Un = rat_from_json(tr.back().at("U"), "/trace/U");
    const Rat mD = Rat(ipow(mc, D));
    out.push_back({"trace has n+1 states", tr.size() == n + 1});
    out.push_back({"delta^n 2 m^D (U_0 - L_0) <= 1", rpow(delta, n) * 2 * mD * (U0 - L0) <= 1});
    out.push_back({"eps_inner = eps / (1/2 + (1+delta)/(1-delta))",
                   R(w, "epsilon_inner") * (Rat(1, 2) + (1 + delta) / (1 - delta)) == eps});
    if (kind == "weak") out.push_back({"range gate: U_n - L_n >= m^-D", Un - Ln >= 1 / mD});
    if (kind == "constant") out.push_back({"range gate: U_n - L_n < m^-D", Un - Ln < 1 / mD});
  }
  return out;
}

}  // namespace mixopt
