// phasekit command-line interface: classification, phases, essential phases,
// graph directedness, numerical-range plot data, and the randomized
// verification suites.
//
// Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 numeric
// failure, 4 domain (classification) error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "phasekit/generators.hpp"
#include "phasekit/graphs.hpp"
#include "phasekit/io.hpp"
#include "phasekit/phase_calculus.hpp"
#include "phasekit/verify.hpp"

namespace {

using namespace phasekit;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitDomain = 4;

struct GlobalOptions {
  TolerancePolicy tol;
  bool degrees = false;
};

double display_angle(const GlobalOptions& g, double radians) {
  return g.degrees ? radians * 180.0 / kPi : radians;
}

Json arc_to_json(const GlobalOptions& g, const AngleArc& arc) {
  switch (arc.kind) {
    case AngleArc::Kind::Empty:
      return Json("empty");
    case AngleArc::Kind::FullCircle:
      return Json("full-circle");
    case AngleArc::Kind::Arc:
      return Json::array({json_number(display_angle(g, arc.lo)),
                          json_number(display_angle(g, arc.hi))});
  }
  return Json();
}

int cmd_classify(const GlobalOptions& g, const std::string& path) {
  const ComplexMatrix m = read_matrix_file(path);
  const SectorClass cls = classify(m, g.tol);
  Json out;
  out["kind"] = to_string(cls.kind);
  out["rank"] = cls.rank;
  out["rotated_hermitian"] = cls.rotated_hermitian;
  out["feasible_arc"] = arc_to_json(g, cls.feasible_arc);
  if (m.norm() > 0.0) {
    out["field_angle"] = json_number(display_angle(g, field_angle(m, g.tol)));
  } else {
    out["field_angle"] = nullptr;
  }
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int cmd_phases(const GlobalOptions& g, const std::string& path) {
  const ComplexMatrix m = read_matrix_file(path);
  const PhaseList p = phases_of(m, g.tol);
  Json out;
  Json arr = Json::array();
  for (double v : p.phases) arr.push_back(json_number(display_angle(g, v)));
  out["phases"] = std::move(arr);
  out["center"] = p.empty() ? Json(nullptr)
                            : json_number(display_angle(g, p.center));
  out["rank"] = p.rank;
  out["approximate"] = p.approximate;
  if (p.approximate) {
    out["error_estimate"] = json_number(display_angle(g, p.error_estimate));
  }
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int cmd_essential(const GlobalOptions& g, const std::string& path,
                  double accuracy, std::optional<double> upper,
                  std::optional<double> lower, std::uint64_t seed) {
  const ComplexMatrix mc = read_matrix_file(path);
  if (mc.imag().cwiseAbs().maxCoeff() > 0.0) {
    throw DomainError("essential phase expects a real matrix");
  }
  const RealMatrix m = mc.real();
  std::optional<PhaseBounds> bounds;
  if (upper) {
    bounds = PhaseBounds{lower.value_or(0.0), *upper};
  } else if (lower) {
    throw DomainError("--lower requires --upper");
  }
  LmiOptions opts;
  opts.seed = seed;
  const BisectionResult res =
      essential_phase(m, accuracy, bounds, opts, g.tol);
  Json out;
  out["alpha_star"] = json_number(display_angle(g, res.alpha_star));
  out["iterations"] = res.iterations;
  Json brackets = Json::array();
  for (const auto& [lo, hi] : res.bracket) {
    brackets.push_back(Json::array({json_number(display_angle(g, lo)),
                                    json_number(display_angle(g, hi))}));
  }
  out["bracket"] = std::move(brackets);
  out["d_star"] = json_vector(res.d_star);
  out["status"] = res.status;
  bool inner_trouble = false;
  Json inner = Json::array();
  for (const auto& st : res.inner_status) {
    inner.push_back(Json{{"feasible", st.feasible},
                         {"margin", json_number(st.margin)},
                         {"iterations", st.iterations}});
    inner_trouble = inner_trouble || (!st.feasible && st.max_iterations_hit &&
                                      st.margin > -1e-12);
  }
  out["inner_status"] = std::move(inner);
  std::cout << out.dump() << "\n";
  // An exhausted inner budget that ended ambiguously is reported as a
  // numeric failure so scripts can distinguish it from a clean run.
  return inner_trouble ? kExitNumeric : kExitOk;
}

int cmd_graph(const GlobalOptions& g, const std::string& path, bool blocks,
              bool bisect, double accuracy) {
  const WeightedDigraph graph = parse_graph_file(path);
  Json out;
  if (blocks) {
    const DirectednessReport rep =
        component_phase_bounds(graph, bisect, accuracy, g.tol);
    out["strongly_connected"] = rep.strongly_connected;
    out["spanning_tree"] = rep.spanning_tree;
    out["weight_balanced"] = rep.weight_balanced;
    out["phi_ess"] = rep.phi_ess
                         ? Json(json_number(display_angle(g, *rep.phi_ess)))
                         : Json(nullptr);
    Json blk_list = Json::array();
    for (const auto& blk : rep.blocks) {
      Json b;
      b["block"] = blk.index;
      b["size"] = blk.size;
      b["nodes"] = blk.nodes;
      b["phi_ess"] = blk.phi_ess
                         ? Json(json_number(display_angle(g, *blk.phi_ess)))
                         : Json(nullptr);
      b["upper_bound"] = json_number(display_angle(g, blk.scaled_upper));
      b["component_bound"] =
          json_number(display_angle(g, blk.component_bound));
      b["method"] = blk.method;
      blk_list.push_back(std::move(b));
    }
    out["blocks"] = std::move(blk_list);
  } else {
    const FrobeniusForm ff = scc_frobenius(graph);
    out["strongly_connected"] = ff.strongly_connected;
    out["spanning_tree"] = ff.spanning_tree;
    out["weight_balanced"] = is_weight_balanced(graph, g.tol);
    if (!ff.strongly_connected) {
      throw DomainError(
          "graph is not strongly connected; use --blocks for per-component "
          "bounds");
    }
    out["phi_ess"] = json_number(
        display_angle(g, laplacian_essential_phase(graph, g.tol)));
  }
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int cmd_nrange(const GlobalOptions& g, const std::string& path, int samples) {
  const ComplexMatrix m = read_matrix_file(path);
  const NRBoundary nr = nr_boundary(m, samples, g.tol);
  std::printf("theta,support,re,im\n");
  for (const auto& s : nr.samples) {
    std::printf("%.12g,%.12g,%.12g,%.12g\n", round12(s.theta),
                round12(s.support), round12(s.point.real()),
                round12(s.point.imag()));
  }
  return kExitOk;
}

int cmd_verify(const GlobalOptions& g, const std::string& suite, int trials,
               std::uint64_t seed) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = suite_names();
  } else {
    names = {suite};
  }
  bool all_passed = true;
  for (const auto& name : names) {
    const SuiteResult res = run_suite(name, trials, seed, g.tol);
    all_passed = all_passed && res.passed();
    std::printf("[%s] %-18s trials=%d failures=%d (%.2fs)\n",
                res.passed() ? "PASS" : "FAIL", res.name.c_str(), res.trials,
                res.failures, res.seconds);
    if (!res.passed()) {
      std::printf("       first counterexample: %s\n",
                  res.first_counterexample.c_str());
    }
  }
  return all_passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phasekit: phases of semi-sectorial matrices, essential "
               "phases, and graph directedness"};
  app.require_subcommand(1);

  GlobalOptions g;
  try {
    g.tol = TolerancePolicy::from_env();
  } catch (const std::exception& e) {
    std::cerr << "bad tolerance override: " << e.what() << "\n";
    return kExitNumeric;
  }
  app.add_option("--eps-rank", g.tol.eps_rank, "relative rank cutoff");
  app.add_option("--eps-psd", g.tol.eps_psd, "relative PSD floor");
  app.add_option("--eps-phase", g.tol.eps_phase, "angle tolerance (radians)");
  app.add_flag("--degrees", g.degrees, "print angles in degrees");

  std::string matrix_path, graph_path;
  double accuracy = 1e-5;
  std::optional<double> upper, lower;
  std::uint64_t seed = 0;
  int samples = 256;
  int trials = 200;
  std::string suite = "all";
  bool blocks = false, bisect = false;

  auto* classify_cmd =
      app.add_subcommand("classify", "classify a matrix file");
  classify_cmd->add_option("matrix", matrix_path)->required();

  auto* phases_cmd = app.add_subcommand("phases", "phases of a matrix file");
  phases_cmd->add_option("matrix", matrix_path)->required();

  auto* essential_cmd = app.add_subcommand(
      "essential", "essential phase of a real matrix by bisection");
  essential_cmd->add_option("matrix", matrix_path)->required();
  essential_cmd->add_option("--e", accuracy, "bisection accuracy");
  essential_cmd->add_option("--upper", upper, "upper bound override");
  essential_cmd->add_option("--lower", lower, "lower bound override");
  essential_cmd->add_option("--seed", seed, "inner-solver seed");

  auto* graph_cmd =
      app.add_subcommand("graph", "directedness of a weighted digraph");
  graph_cmd->add_option("graph", graph_path)->required();
  graph_cmd->add_flag("--blocks", blocks, "per-component report");
  graph_cmd->add_flag("--bisect", bisect,
                      "also bisect each block's essential phase");
  graph_cmd->add_option("--e", accuracy, "bisection accuracy");

  auto* nrange_cmd = app.add_subcommand(
      "nrange", "numerical range boundary samples as CSV");
  nrange_cmd->add_option("matrix", matrix_path)->required();
  nrange_cmd->add_option("--samples", samples, "sample count (>= 8)");

  auto* verify_cmd =
      app.add_subcommand("verify", "run randomized verification suites");
  verify_cmd->add_option("--suite", suite, "suite name or 'all'");
  verify_cmd->add_option("--trials", trials, "trials per suite");
  verify_cmd->add_option("--seed", seed, "base RNG seed");

  // Let the global tolerance/display flags appear after the subcommand.
  for (CLI::App* sub : app.get_subcommands(
           [](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    g.tol.validate();
    if (classify_cmd->parsed()) return cmd_classify(g, matrix_path);
    if (phases_cmd->parsed()) return cmd_phases(g, matrix_path);
    if (essential_cmd->parsed()) {
      return cmd_essential(g, matrix_path, accuracy, upper, lower, seed);
    }
    if (graph_cmd->parsed()) {
      return cmd_graph(g, graph_path, blocks, bisect, accuracy);
    }
    if (nrange_cmd->parsed()) return cmd_nrange(g, matrix_path, samples);
    if (verify_cmd->parsed()) return cmd_verify(g, suite, trials, seed);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
