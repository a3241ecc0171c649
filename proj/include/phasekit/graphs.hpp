#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "phasekit/essential.hpp"
#include "phasekit/sectorial.hpp"

namespace phasekit {

/// Weighted directed graph with 0-based node ids, strictly positive edge
/// weights, no self-loops and no parallel edges.
///
/// Edge convention: the input line "i j w" is the edge (i, j) directed
/// i -> j carrying a_{ji} = w, so the Laplacian row of the *head* node
/// receives the weight.  This is the transpose of the folklore adjacency
/// orientation; it makes L 1 = 0 hold by construction.
struct WeightedDigraph {
  struct Edge {
    int src = 0;
    int dst = 0;
    double weight = 0.0;
  };
  int n = 0;
  std::vector<Edge> edges;

  void validate() const {
    if (n <= 0) throw ParseError("graph must have at least one node");
    std::map<std::pair<int, int>, int> seen;
    for (const Edge& e : edges) {
      if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
        throw ParseError("edge endpoint out of range");
      }
      if (e.src == e.dst) throw ParseError("self-loops are not allowed");
      if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
        throw ParseError("edge weights must be strictly positive");
      }
      if (++seen[{e.src, e.dst}] > 1) throw ParseError("duplicate edge");
    }
  }
};

/// Parse the "src dst weight" line format; '#' comments and blank lines are
/// ignored and an optional "n <count>" header fixes the node count.
inline WeightedDigraph parse_graph(const std::string& text) {
  WeightedDigraph g;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int max_id = -1;
  bool have_n = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank
    if (first == "n") {
      int count = 0;
      if (!(ls >> count) || count <= 0) {
        throw ParseError("bad node-count header at line " +
                         std::to_string(lineno));
      }
      g.n = count;
      have_n = true;
      continue;
    }
    WeightedDigraph::Edge e;
    std::string rest;
    try {
      e.src = std::stoi(first);
    } catch (...) {
      throw ParseError("bad edge line at line " + std::to_string(lineno));
    }
    if (!(ls >> e.dst >> e.weight)) {
      throw ParseError("bad edge line at line " + std::to_string(lineno));
    }
    if (ls >> rest) {
      throw ParseError("trailing tokens at line " + std::to_string(lineno));
    }
    if (e.src < 0 || e.dst < 0) {
      throw ParseError("negative node id at line " + std::to_string(lineno));
    }
    if (!(e.weight > 0.0)) {
      throw ParseError("non-positive weight at line " + std::to_string(lineno));
    }
    max_id = std::max({max_id, e.src, e.dst});
    g.edges.push_back(e);
  }
  if (!have_n) g.n = max_id + 1;
  g.validate();
  return g;
}

inline WeightedDigraph parse_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

/// Laplacian with row sums exactly zero: edge (i, j, w) contributes
/// L(j, j) += w and L(j, i) -= w; the diagonal is rebuilt as the negated
/// off-diagonal row sum in a fixed summation order so L 1 = 0 cancels
/// exactly in floating point.
inline RealMatrix laplacian(const WeightedDigraph& g) {
  g.validate();
  RealMatrix l = RealMatrix::Zero(g.n, g.n);
  for (const auto& e : g.edges) {
    l(e.dst, e.src) -= e.weight;
  }
  for (int i = 0; i < g.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) {
      if (j != i) s += l(i, j);
    }
    l(i, i) = -s;
  }
  return l;
}

/// Frobenius normal form: strongly connected components in a topological
/// order of the condensation (sources first), so the permuted Laplacian is
/// lower block triangular with irreducible diagonal blocks.
struct FrobeniusForm {
  std::vector<int> permutation;     // new position -> original node id
  std::vector<int> block_sizes;
  std::vector<std::vector<int>> block_nodes;  // original ids per block
  std::vector<int> component_of;    // original node -> block index
  bool spanning_tree = false;       // one source component reaching all
  bool strongly_connected = false;
};

namespace detail {

// Iterative Tarjan SCC; returns component index per node (discovery order).
inline std::vector<int> tarjan_scc(int n,
                                   const std::vector<std::vector<int>>& adj,
                                   int& comp_count) {
  std::vector<int> index(static_cast<size_t>(n), -1);
  std::vector<int> low(static_cast<size_t>(n), 0);
  std::vector<int> comp(static_cast<size_t>(n), -1);
  std::vector<char> on_stack(static_cast<size_t>(n), 0);
  std::vector<int> stack;
  int next_index = 0;
  comp_count = 0;

  struct Frame {
    int v;
    size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[static_cast<size_t>(root)] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = next_index++;
    stack.push_back(root);
    on_stack[static_cast<size_t>(root)] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& out = adj[static_cast<size_t>(f.v)];
      if (f.child < out.size()) {
        const int w = out[f.child++];
        if (index[static_cast<size_t>(w)] == -1) {
          index[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = next_index++;
          stack.push_back(w);
          on_stack[static_cast<size_t>(w)] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[static_cast<size_t>(w)]) {
          low[static_cast<size_t>(f.v)] =
              std::min(low[static_cast<size_t>(f.v)], index[static_cast<size_t>(w)]);
        }
      } else {
        if (low[static_cast<size_t>(f.v)] == index[static_cast<size_t>(f.v)]) {
          while (true) {
            const int w = stack.back();
            stack.pop_back();
            on_stack[static_cast<size_t>(w)] = 0;
            comp[static_cast<size_t>(w)] = comp_count;
            if (w == f.v) break;
          }
          ++comp_count;
        }
        const int v = f.v;
        frames.pop_back();
        if (!frames.empty()) {
          const int p = frames.back().v;
          low[static_cast<size_t>(p)] =
              std::min(low[static_cast<size_t>(p)], low[static_cast<size_t>(v)]);
        }
      }
    }
  }
  return comp;
}

}  // namespace detail

inline FrobeniusForm scc_frobenius(const WeightedDigraph& g) {
  g.validate();
  std::vector<std::vector<int>> adj(static_cast<size_t>(g.n));
  for (const auto& e : g.edges) adj[static_cast<size_t>(e.src)].push_back(e.dst);

  int comp_count = 0;
  const std::vector<int> comp = detail::tarjan_scc(g.n, adj, comp_count);

  // Condensation DAG and a deterministic topological order: among the
  // currently source components, pick the one containing the smallest
  // original node id.
  std::vector<std::vector<int>> members(static_cast<size_t>(comp_count));
  for (int v = 0; v < g.n; ++v) {
    members[static_cast<size_t>(comp[static_cast<size_t>(v)])].push_back(v);
  }
  std::vector<std::map<int, int>> cond_out(static_cast<size_t>(comp_count));
  std::vector<int> indeg(static_cast<size_t>(comp_count), 0);
  for (const auto& e : g.edges) {
    const int a = comp[static_cast<size_t>(e.src)];
    const int b = comp[static_cast<size_t>(e.dst)];
    if (a != b && cond_out[static_cast<size_t>(a)].emplace(b, 1).second) {
      ++indeg[static_cast<size_t>(b)];
    }
  }
  std::vector<int> order;
  {
    auto min_id = [&](int c) { return members[static_cast<size_t>(c)].front(); };
    std::vector<int> ready;
    for (int c = 0; c < comp_count; ++c) {
      if (indeg[static_cast<size_t>(c)] == 0) ready.push_back(c);
    }
    while (!ready.empty()) {
      auto it = std::min_element(ready.begin(), ready.end(),
                                 [&](int x, int y) { return min_id(x) < min_id(y); });
      const int c = *it;
      ready.erase(it);
      order.push_back(c);
      for (const auto& [b, _] : cond_out[static_cast<size_t>(c)]) {
        if (--indeg[static_cast<size_t>(b)] == 0) ready.push_back(b);
      }
    }
  }

  FrobeniusForm out;
  out.component_of.assign(static_cast<size_t>(g.n), -1);
  int sources = 0;
  for (size_t pos = 0; pos < order.size(); ++pos) {
    const int c = order[pos];
    auto nodes = members[static_cast<size_t>(c)];
    std::sort(nodes.begin(), nodes.end());
    out.block_sizes.push_back(static_cast<int>(nodes.size()));
    for (int v : nodes) {
      out.permutation.push_back(v);
      out.component_of[static_cast<size_t>(v)] = static_cast<int>(pos);
    }
    out.block_nodes.push_back(std::move(nodes));
  }
  // Spanning tree <=> unique source component that reaches every other.
  std::vector<int> indeg2(static_cast<size_t>(comp_count), 0);
  for (int c = 0; c < comp_count; ++c) {
    for (const auto& [b, _] : cond_out[static_cast<size_t>(c)]) {
      ++indeg2[static_cast<size_t>(b)];
    }
  }
  for (int c = 0; c < comp_count; ++c) {
    if (indeg2[static_cast<size_t>(c)] == 0) ++sources;
  }
  out.strongly_connected = (comp_count == 1);
  out.spanning_tree = (sources == 1);
  return out;
}

/// Weight-balance test: 1^T L = 0 within eps_rank * max(1, ||L||).
inline bool is_weight_balanced(const WeightedDigraph& g,
                               const TolerancePolicy& tol = {}) {
  const RealMatrix l = laplacian(g);
  return l.colwise().sum().cwiseAbs().maxCoeff() <=
         tol.eps_rank * std::max(1.0, l.norm());
}

/// Positive left null vector of the Laplacian, normalized to sum n, found by
/// power iteration on the transpose of the stochastic matrix I - L/(2 max_ii).
inline RealVector left_perron_vector(const WeightedDigraph& g,
                                     const TolerancePolicy& tol = {}) {
  const FrobeniusForm ff = scc_frobenius(g);
  if (!ff.strongly_connected) {
    throw DomainError("graph is not strongly connected");
  }
  const RealMatrix l = laplacian(g);
  const int n = g.n;
  if (n == 1) return RealVector::Constant(1, 1.0);
  const double c = l.diagonal().maxCoeff();
  const RealMatrix pt =
      (RealMatrix::Identity(n, n) - l / (2.0 * c)).transpose();
  RealVector v = RealVector::Constant(n, 1.0);
  for (int it = 0; it < 200000; ++it) {
    RealVector w = pt * v;
    w *= n / w.lpNorm<1>();
    const double delta = (w - v).lpNorm<Eigen::Infinity>();
    v = w;
    if (delta < 1e-15) break;
  }
  if (v.minCoeff() <= 0.0) {
    throw NumericError("left null vector is not strictly positive");
  }
  if ((v.transpose() * l).cwiseAbs().maxCoeff() >
      tol.eps_rank * n * std::max(1.0, l.norm())) {
    throw NumericError("left null vector residual out of tolerance");
  }
  return v;
}

/// Largest essential phase of the Laplacian of a strongly connected graph:
/// phi_max(V L) with V = diag of the left null vector.  The smallest is its
/// negative since L is real.
inline double laplacian_essential_phase(const WeightedDigraph& g,
                                        const TolerancePolicy& tol = {}) {
  const RealVector v = left_perron_vector(g, tol);
  const RealMatrix l = laplacian(g);
  const ComplexMatrix vl = (v.asDiagonal() * l).cast<Complex>();
  PhaseList p;
  try {
    p = phases_quasi(vl, tol);
  } catch (const DomainError&) {
    throw NumericError(
        "balanced-scaled Laplacian failed to classify quasi-sectorial");
  }
  if (p.empty()) return 0.0;  // single node / zero Laplacian
  return p.phi_max();
}

/// Per-graph and per-block directedness data.
struct DirectednessReport {
  struct Block {
    int index = 0;
    int size = 0;
    std::vector<int> nodes;
    // Exact essential phase when known (root block, 1x1 blocks, or when the
    // bisection was requested); otherwise unset.
    std::optional<double> phi_ess;
    // phi_max of the block under its own component's balancing scaling;
    // an upper bound for the block essential phase.
    double scaled_upper = 0.0;
    // Essential phase of the component's row-sum-zeroed Laplacian; the
    // diagonally-dominant-block upper bound.
    double component_bound = 0.0;
    std::string method;
  };
  bool strongly_connected = false;
  bool spanning_tree = false;
  bool weight_balanced = false;
  std::optional<double> phi_ess;  // whole-graph value when strongly connected
  std::vector<Block> blocks;
};

namespace detail {

inline WeightedDigraph induced_subgraph(const WeightedDigraph& g,
                                        const std::vector<int>& nodes) {
  std::map<int, int> relabel;
  for (size_t i = 0; i < nodes.size(); ++i) {
    relabel[nodes[static_cast<size_t>(i)]] = static_cast<int>(i);
  }
  WeightedDigraph out;
  out.n = static_cast<int>(nodes.size());
  for (const auto& e : g.edges) {
    const auto a = relabel.find(e.src);
    const auto b = relabel.find(e.dst);
    if (a != relabel.end() && b != relabel.end()) {
      out.edges.push_back({a->second, b->second, e.weight});
    }
  }
  return out;
}

}  // namespace detail

/// Block-by-block essential phase bounds for a graph with a spanning tree.
/// The root block is exact; later blocks report the balancing-scaled value
/// and the component bound, plus the bisection value when requested.
inline DirectednessReport component_phase_bounds(
    const WeightedDigraph& g, bool run_bisection = false,
    double bisection_accuracy = 1e-5, const TolerancePolicy& tol = {}) {
  const FrobeniusForm ff = scc_frobenius(g);
  if (!ff.spanning_tree) {
    throw DomainError("graph has no spanning tree");
  }
  const RealMatrix l = laplacian(g);
  DirectednessReport rep;
  rep.strongly_connected = ff.strongly_connected;
  rep.spanning_tree = true;
  rep.weight_balanced = is_weight_balanced(g, tol);
  if (ff.strongly_connected) {
    rep.phi_ess = laplacian_essential_phase(g, tol);
  }

  for (size_t k = 0; k < ff.block_nodes.size(); ++k) {
    DirectednessReport::Block blk;
    blk.index = static_cast<int>(k);
    blk.nodes = ff.block_nodes[k];
    blk.size = static_cast<int>(blk.nodes.size());
    const WeightedDigraph sub = detail::induced_subgraph(g, blk.nodes);
    RealMatrix lkk(blk.size, blk.size);
    for (int i = 0; i < blk.size; ++i) {
      for (int j = 0; j < blk.size; ++j) {
        lkk(i, j) = l(blk.nodes[static_cast<size_t>(i)],
                      blk.nodes[static_cast<size_t>(j)]);
      }
    }
    if (blk.size == 1) {
      blk.phi_ess = 0.0;
      blk.scaled_upper = 0.0;
      blk.component_bound = 0.0;
      blk.method = "trivial";
      rep.blocks.push_back(std::move(blk));
      continue;
    }
    const double tilde_phase = laplacian_essential_phase(sub, tol);
    blk.component_bound = tilde_phase;
    const RealVector vk = left_perron_vector(sub, tol);
    if (k == 0) {
      blk.phi_ess = tilde_phase;  // the root block is itself a Laplacian
      blk.scaled_upper = tilde_phase;
      blk.method = "exact-scaling";
    } else {
      ScalingVector d{vk};
      d.normalize();
      const ComplexMatrix scaled = (d.d.asDiagonal() * lkk).cast<Complex>();
      blk.scaled_upper = phases_of(scaled, tol).phi_max();
      blk.method = "scaling-bound";
      if (run_bisection) {
        const BisectionResult bi =
            essential_phase(lkk, bisection_accuracy, std::nullopt, {}, tol);
        blk.phi_ess = bi.alpha_star;
        blk.method = "bisection";
      }
    }
    rep.blocks.push_back(std::move(blk));
  }
  return rep;
}

}  // namespace phasekit
