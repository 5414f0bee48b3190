// Command-line front end: reads instance files, runs the drivers and prints
// one JSON report on stdout. Diagnostics go to stderr.

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mixopt/mixopt.hpp"

namespace {

using namespace mixopt;

std::string read_all(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Instance load(const std::string& path) { return parse_instance(read_all(path)); }

Rat rat_arg(const std::string& text, const char* flag) {
  try {
    return parse_rat(text);
  } catch (const Error& e) {
    throw ParseError(std::string("--") + flag, e.what());
  }
}

Int int_arg(const std::string& text, const char* flag) {
  try {
    return parse_int(text);
  } catch (const Error& e) {
    throw ParseError(std::string("--") + flag, e.what());
  }
}

Polynomial integer_objective(const Instance& inst) {
  if (!inst.objective.has_integer_coefficients())
    throw ParseError("/objective", "this command needs integer coefficients");
  return inst.objective;
}

int emit(json report, Status status) {
  report["status"] = to_string(status);
  std::cout << report.dump(2) << "\n";
  return exit_code(status);
}

struct Args {
  std::string instance;
  std::string epsilon = "1/2";
  std::string delta = "1/2";
  std::string grid_m;
  std::string max_points = "2000000";
  bool weak = false;
  bool oracle = false;
  unsigned k = 1;
  unsigned n = 1;
  std::string family;
  std::string a, b, c;
};

json cmd_optimize(const Args& args, Status& status) {
  const Instance inst = load(args.instance);
  json out;
  out["instance"] = instance_to_json(inst);
  SolveOptions opts;
  opts.max_grid_points = int_arg(args.max_points, "max-grid-points");
  if (!args.grid_m.empty()) opts.grid_m = int_arg(args.grid_m, "grid-m");
  Solution sol;
  if (args.oracle) {
    Int m = opts.grid_m.value_or(1);
    if (inst.P.d1 > 0 && !opts.grid_m) throw ParseError("--grid-m", "the oracle needs an explicit grid for continuous variables");
    const auto info = validate(inst.P);
    require_polytope(info);
    const Int est = grid_size_estimate(info, inst.P.d1, m);
    if (est > opts.max_grid_points) throw RefusedSizeError(m, est);
    const auto pts = enumerate_grid_points(inst.P, m);
    const OracleResult r = oracle_optimize(pts, inst.objective);
    sol.point = r.argmax;
    sol.value = r.max;
    sol.kind = GuaranteeKind::oracle;
    sol.epsilon = 0;
    out["minimum"] = {{"point", point_to_json(r.argmin)}, {"value", rat_to_json(r.min)}};
    out["grid_points"] = exact_json(pts.size());
  } else {
    const Rat eps = rat_arg(args.epsilon, "epsilon");
    sol = args.weak ? weak_maximize(inst.P, inst.objective, eps, opts)
                    : fptas_maximize(inst.P, inst.objective, eps, opts);
  }
  out["solution"] = solution_to_json(sol);
  status = sol.kind == GuaranteeKind::constant ? Status::constant : Status::ok;
  return out;
}

json cmd_bounds(const Args& args) {
  const Instance inst = load(args.instance);
  const Polynomial f = integer_objective(inst);
  if (args.k < 1) throw ParseError("--k", "k must be at least 1");
  const auto pts = lattice_points(inst.P);
  if (pts.empty()) throw InfeasibleError("polytope has no lattice points");
  const auto mv = moment_sums(std::span<const std::vector<Int>>(pts), f, args.k);
  const BoundsPair bp = bounds_from_moment(mv.N, mv.values[args.k], args.k);
  return {{"k", exact_json(bp.k)}, {"N", exact_json(mv.N)}, {"moment", to_string(mv.values[args.k])},
          {"L_k", exact_json(bp.L)}, {"U_k", exact_json(bp.U)}};
}

json cmd_count(const Args& args) {
  const Instance inst = load(args.instance);
  const Int m = args.grid_m.empty() ? Int(1) : int_arg(args.grid_m, "grid-m");
  if (m < 1) throw ParseError("--grid-m", "grid size must be positive");
  const auto info = validate(inst.P);
  if (!info.bounded) throw UnboundedError("constraint system is unbounded");
  unsigned long count = 0;
  if (info.feasible) for_each_grid_point(inst.P, m, [&](const MixedPoint&) { ++count; });
  return {{"m", exact_json(m)}, {"count", exact_json(count)}};
}

json cmd_constant(const Args& args, Status& status) {
  const Instance inst = load(args.instance);
  const ConstancyResult cr = is_constant(inst.P, inst.objective);
  json out = {{"constant", cr.constant},
              {"m", exact_json(cr.m)},
              {"D", exact_json(cr.D)},
              {"gap_bound", rat_to_json(cr.gap_bound)},
              {"sample", {{"point", point_to_json(cr.sample)}, {"value", rat_to_json(cr.sample_value)}}}};
  if (cr.witness)
    out["witness"] = {{"point", point_to_json(cr.witness->first)}, {"value", rat_to_json(cr.witness->second)}};
  status = cr.constant ? Status::constant : Status::ok;
  return out;
}

json cmd_range(const Args& args) {
  const Instance inst = load(args.instance);
  const Polynomial f = integer_objective(inst);
  SolveOptions opts;
  opts.max_grid_points = int_arg(args.max_points, "max-grid-points");
  const RangeTrace tr = range_bounds(inst.P, f, rat_arg(args.delta, "delta"), args.n, opts);
  json out = {{"delta", rat_to_json(tr.delta)}, {"n", exact_json(args.n)}, {"constant", tr.constant},
              {"trace", trace_to_json(tr.states)}};
  if (tr.plan) out["plan"] = plan_to_json(*tr.plan);
  return out;
}

json cmd_delta(const Args& args) {
  const Instance inst = load(args.instance);
  inst.P.check();
  return {{"Delta", exact_json(integral_scaling_factor(inst.P))}};
}

int cmd_generate(const Args& args) {
  Instance inst;
  if (args.family == "an1") {
    if (args.a.empty() || args.b.empty() || args.c.empty())
      throw ParseError("--a/--b/--c", "the an1 family needs --a, --b and --c");
    inst = make_an1_instance(int_arg(args.a, "a"), int_arg(args.b, "b"), int_arg(args.c, "c"));
  } else if (args.family == "parity") {
    inst = make_parity_instance();
  } else {
    throw ParseError("--family", "unknown family '" + args.family + "'");
  }
  std::cout << serialize_instance(inst);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified approximate maximization of polynomials over mixed-integer points of polytopes"};
  app.require_subcommand(1);
  Args args;

  auto* optimize = app.add_subcommand("optimize", "approximate maximizer with a replayable certificate");
  optimize->add_option("instance", args.instance, "instance file ('-' for stdin)")->required();
  optimize->add_option("--epsilon", args.epsilon, "tolerance in (0,1) as an exact rational");
  optimize->add_flag("--weak", args.weak, "range-relative guarantee for arbitrary objectives");
  optimize->add_option("--grid-m", args.grid_m, "override the grid size (uncertified)");
  optimize->add_flag("--oracle", args.oracle, "brute-force optimum over the grid");
  optimize->add_option("--max-grid-points", args.max_points, "refuse grids larger than this");

  auto* bounds_cmd = app.add_subcommand("bounds", "moment bounds L_k <= f* <= U_k over P cap Z^d");
  bounds_cmd->add_option("instance", args.instance)->required();
  bounds_cmd->add_option("--k", args.k, "moment order")->required();

  auto* count = app.add_subcommand("count", "number of points of P on the (1/m) grid");
  count->add_option("instance", args.instance)->required();
  count->add_option("--grid-m", args.grid_m, "grid size m");

  auto* constant = app.add_subcommand("constant", "decide constancy on the feasible region");
  constant->add_option("instance", args.instance)->required();

  auto* range = app.add_subcommand("range", "range bounds L_i <= f_min <= f_max <= U_i");
  range->add_option("instance", args.instance)->required();
  range->add_option("--delta", args.delta, "contraction parameter in (0,1)");
  range->add_option("--n", args.n, "number of iterations");
  range->add_option("--max-grid-points", args.max_points, "refuse grids larger than this");

  auto* delta = app.add_subcommand("delta", "integral scaling factor of the continuous slices");
  delta->add_option("instance", args.instance)->required();

  auto* generate = app.add_subcommand("generate", "emit a generated instance");
  generate->add_option("--family", args.family, "an1 | parity")->required();
  generate->add_option("--a", args.a);
  generate->add_option("--b", args.b);
  generate->add_option("--c", args.c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return emit({{"message", e.what()}}, Status::error);
  }

  const auto start = std::chrono::steady_clock::now();
  const std::string command = app.get_subcommands().front()->get_name();
  Status status = Status::ok;
  json report;
  try {
    if (command == "generate") return cmd_generate(args);
    if (command == "optimize") report = cmd_optimize(args, status);
    else if (command == "bounds") report = cmd_bounds(args);
    else if (command == "count") report = cmd_count(args);
    else if (command == "constant") report = cmd_constant(args, status);
    else if (command == "range") report = cmd_range(args);
    else if (command == "delta") report = cmd_delta(args);
  } catch (const RefusedSizeError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return emit({{"command", command}, {"message", e.what()}, {"m", exact_json(e.m())},
                 {"estimate", exact_json(e.estimate())}},
                Status::refused_size);
  } catch (const InfeasibleError& e) {
    std::cerr << e.what() << "\n";
    return emit({{"command", command}, {"message", e.what()}}, Status::infeasible);
  } catch (const UnboundedError& e) {
    std::cerr << e.what() << "\n";
    return emit({{"command", command}, {"message", e.what()}}, Status::unbounded);
  } catch (const Error& e) {
    // parse errors, domain errors, precondition violations
    std::cerr << "error: " << e.what() << "\n";
    return emit({{"command", command}, {"message", e.what()}}, Status::error);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return emit({{"command", command}, {"message", e.what()}}, Status::internal);
  }
  const auto us = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
  report["command"] = command;
  report["timing_us"] = exact_json(static_cast<unsigned long>(us.count()));
  std::cerr << command << ": done in " << us.count() << " us\n";
  return emit(std::move(report), status);
}
