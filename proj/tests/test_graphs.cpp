#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "phasekit/generators.hpp"
#include "phasekit/graphs.hpp"
#include "phasekit/io.hpp"

using namespace phasekit;

namespace {

std::string fixture(const std::string& name) {
  return std::string(PHASEKIT_FIXTURE_DIR) + "/" + name;
}

WeightedDigraph cycle3() {
  return parse_graph("0 1 1\n1 2 1\n2 0 1\n");
}

}  // namespace

TEST_CASE("graph parsing") {
  const WeightedDigraph g = cycle3();
  CHECK(g.n == 3);
  CHECK(g.edges.size() == 3);

  const WeightedDigraph two = parse_graph("0 1 1\n1 0 1\n");
  CHECK(two.n == 2);

  const WeightedDigraph header = parse_graph("n 5\n0 1 1\n");
  CHECK(header.n == 5);

  CHECK_THROWS_AS(parse_graph("0 1 -1\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("0 1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("0 0 1\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("0 1 1\n0 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("0 x 1\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("# only comments\n"), ParseError);
  CHECK_NOTHROW(parse_graph_file(fixture("cycle3.graph")));
}

TEST_CASE("laplacian construction") {
  const RealMatrix l = laplacian(cycle3());
  RealMatrix expect(3, 3);
  expect << 1, 0, -1, -1, 1, 0, 0, -1, 1;
  CHECK((l - expect).norm() == 0.0);

  // Row sums cancel exactly under the construction's summation order.
  Rng rng(3);
  const WeightedDigraph g = gen::strongly_connected_digraph(6, rng);
  const RealMatrix lg = laplacian(g);
  for (int i = 0; i < g.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) {
      if (j != i) s += lg(i, j);
    }
    CHECK(lg(i, i) + s == 0.0);
    for (int j = 0; j < g.n; ++j) {
      if (i != j) CHECK(lg(i, j) <= 0.0);
    }
  }

  const WeightedDigraph single = parse_graph("n 1\n");
  CHECK(laplacian(single)(0, 0) == 0.0);
}

TEST_CASE("strongly connected components and Frobenius form") {
  const FrobeniusForm one = scc_frobenius(cycle3());
  CHECK(one.strongly_connected);
  CHECK(one.spanning_tree);
  CHECK(one.block_sizes == std::vector<int>{3});

  const WeightedDigraph chain = parse_graph_file(fixture("chain2.graph"));
  const FrobeniusForm two = scc_frobenius(chain);
  CHECK_FALSE(two.strongly_connected);
  CHECK(two.spanning_tree);
  CHECK(two.block_sizes == std::vector<int>{1, 1});
  CHECK(two.block_nodes[0] == std::vector<int>{0});

  // Two sources: no spanning tree.
  const WeightedDigraph vee = parse_graph("0 2 1\n1 2 1\n");
  CHECK_FALSE(scc_frobenius(vee).spanning_tree);
}

TEST_CASE("Frobenius permutation is lower block triangular") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const WeightedDigraph g = gen::spanning_tree_digraph(
        gen::uniform_int(rng, 2, 3), gen::uniform_int(rng, 1, 3),
        gen::uniform_int(rng, 1, 3), rng);
    const FrobeniusForm ff = scc_frobenius(g);
    const RealMatrix l = laplacian(g);
    RealMatrix p(g.n, g.n);
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        p(i, j) = l(ff.permutation[static_cast<size_t>(i)],
                    ff.permutation[static_cast<size_t>(j)]);
      }
    }
    // Zero blocks strictly above the diagonal, exactly.
    int row0 = 0;
    for (size_t bi = 0; bi < ff.block_sizes.size(); ++bi) {
      int col0 = 0;
      for (size_t bj = 0; bj < ff.block_sizes.size(); ++bj) {
        if (bj > bi) {
          CHECK(p.block(row0, col0, ff.block_sizes[bi], ff.block_sizes[bj])
                    .cwiseAbs()
                    .maxCoeff() == 0.0);
        }
        col0 += ff.block_sizes[bj];
      }
      row0 += ff.block_sizes[bi];
    }
  }
}

TEST_CASE("block structure matches a reachability oracle") {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const int n = gen::uniform_int(rng, 3, 8);
    const WeightedDigraph g = gen::strongly_connected_digraph(n, rng, 2);
    // Drop a few edges to break strong connectivity at random.
    WeightedDigraph h;
    h.n = n;
    for (const auto& e : g.edges) {
      if (gen::uniform(rng, 0.0, 1.0) < 0.75) h.edges.push_back(e);
    }
    // Reachability closure.
    std::vector<std::vector<char>> reach(
        static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0));
    for (int i = 0; i < n; ++i) reach[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    for (const auto& e : h.edges) {
      reach[static_cast<size_t>(e.src)][static_cast<size_t>(e.dst)] = 1;
    }
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (reach[static_cast<size_t>(i)][static_cast<size_t>(k)] &&
              reach[static_cast<size_t>(k)][static_cast<size_t>(j)]) {
            reach[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
          }
        }
      }
    }
    const FrobeniusForm ff = scc_frobenius(h);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const bool same_comp =
            ff.component_of[static_cast<size_t>(i)] ==
            ff.component_of[static_cast<size_t>(j)];
        const bool mutual = reach[static_cast<size_t>(i)][static_cast<size_t>(j)] &&
                            reach[static_cast<size_t>(j)][static_cast<size_t>(i)];
        CHECK(same_comp == mutual);
      }
    }
  }
}

TEST_CASE("weight balance") {
  CHECK(is_weight_balanced(cycle3()));
  const WeightedDigraph star = parse_graph("0 1 1\n0 2 1\n0 3 1\n");
  CHECK_FALSE(is_weight_balanced(star));
}

TEST_CASE("left Perron vector") {
  const RealVector v1 = left_perron_vector(cycle3());
  CHECK((v1 - RealVector::Constant(3, 1.0)).cwiseAbs().maxCoeff() < 1e-12);

  // 2-cycle, weight a on 0->1 and b on 1->0: L = [[b, -b], [-a, a]], so the
  // left null space is spanned by (a, b).
  Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    const double a = gen::uniform(rng, 0.2, 2.0);
    const double b = gen::uniform(rng, 0.2, 2.0);
    std::ostringstream gs;
    gs << "0 1 " << a << "\n1 0 " << b << "\n";
    const WeightedDigraph g = parse_graph(gs.str());
    const RealVector v = left_perron_vector(g);
    CHECK(v(0) / v(1) == Catch::Approx(a / b).margin(1e-9));
  }

  CHECK_THROWS_AS(left_perron_vector(parse_graph("0 1 1\n")), DomainError);
}

TEST_CASE("essential phase of reference graphs") {
  CHECK(laplacian_essential_phase(cycle3()) ==
        Catch::Approx(kPi / 6).margin(1e-9));

  const WeightedDigraph undirected =
      parse_graph_file(fixture("path2_undirected.graph"));
  CHECK(std::abs(laplacian_essential_phase(undirected)) <= 1e-9);

  // Reversing every edge preserves the essential phase.
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    const WeightedDigraph g =
        gen::strongly_connected_digraph(gen::uniform_int(rng, 3, 5), rng);
    WeightedDigraph rev;
    rev.n = g.n;
    for (const auto& e : g.edges) rev.edges.push_back({e.dst, e.src, e.weight});
    CHECK(laplacian_essential_phase(g) ==
          Catch::Approx(laplacian_essential_phase(rev)).margin(1e-7));
  }
}

TEST_CASE("balance equivalence with classification") {
  Rng rng(17);
  for (int t = 0; t < 30; ++t) {
    const int n = gen::uniform_int(rng, 3, 6);
    const WeightedDigraph g = (t % 2 == 0)
                                  ? gen::balanced_digraph(n, rng)
                                  : gen::strongly_connected_digraph(n, rng);
    const bool balanced = is_weight_balanced(g);
    const SectorClass cls = classify(laplacian(g).cast<Complex>());
    CHECK(balanced == (cls.kind == SectorKind::QuasiSectorial));
  }
}

TEST_CASE("eigen angles bounded by the Laplacian essential phase") {
  Rng rng(19);
  for (int t = 0; t < 20; ++t) {
    const WeightedDigraph g =
        gen::strongly_connected_digraph(gen::uniform_int(rng, 3, 6), rng);
    const double phi = laplacian_essential_phase(g);
    CHECK(phi < kPi / 2);
    CHECK(eigen_angle_lower_bound(laplacian(g)) <= phi + 1e-9);
  }
}

TEST_CASE("analytic scaling agrees with bisection") {
  Rng rng(23);
  for (int t = 0; t < 8; ++t) {
    const WeightedDigraph g =
        gen::strongly_connected_digraph(gen::uniform_int(rng, 3, 5), rng);
    const double analytic = laplacian_essential_phase(g);
    const double e = 1e-5;
    const BisectionResult bi = essential_phase(laplacian(g), e);
    CHECK(std::abs(bi.alpha_star - analytic) <= 2e-5 + 2 * e);
  }
}

TEST_CASE("component phase bounds") {
  const WeightedDigraph chain = parse_graph_file(fixture("chain2.graph"));
  const DirectednessReport rep = component_phase_bounds(chain);
  REQUIRE(rep.blocks.size() == 2);
  CHECK(rep.spanning_tree);
  CHECK_FALSE(rep.strongly_connected);
  CHECK(rep.blocks[0].phi_ess.value() == Catch::Approx(0.0).margin(1e-12));
  CHECK(rep.blocks[1].phi_ess.value() == Catch::Approx(0.0).margin(1e-12));

  CHECK_THROWS_AS(component_phase_bounds(parse_graph("0 2 1\n1 2 1\n")),
                  DomainError);

  Rng rng(29);
  for (int t = 0; t < 8; ++t) {
    const WeightedDigraph g = gen::spanning_tree_digraph(
        gen::uniform_int(rng, 2, 3), gen::uniform_int(rng, 1, 2),
        gen::uniform_int(rng, 2, 3), rng);
    const DirectednessReport r =
        component_phase_bounds(g, /*run_bisection=*/true, 1e-4);
    for (const auto& blk : r.blocks) {
      if (blk.index == 0 || blk.size == 1) continue;
      // Proof chain: bisected essential phase <= scaled value <= component
      // bound (the blocks here are diagonally dominant).
      CHECK(blk.scaled_upper <= blk.component_bound + 1e-6);
      REQUIRE(blk.phi_ess.has_value());
      CHECK(*blk.phi_ess <= blk.scaled_upper + 2e-4);
    }
  }
}

TEST_CASE("non-diagonally-dominant M-matrix reverses the block bound") {
  // The 3x3 reference M-matrix: its essential phase (0.1662) exceeds the
  // essential phase of its row-sum-zeroed Laplacian (0.1403), showing the
  // component bound direction only holds for diagonally dominant blocks.
  const RealMatrix m =
      read_matrix_file(fixture("mmatrix_3x3.csv")).real();
  const RealMatrix lt = m - RealMatrix((m.rowwise().sum()).asDiagonal());
  // Build the graph of lt to reuse the analytic scaling.
  WeightedDigraph g;
  g.n = 3;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j && lt(i, j) < 0.0) g.edges.push_back({j, i, -lt(i, j)});
    }
  }
  const double lap_phase = laplacian_essential_phase(g);
  CHECK(lap_phase == Catch::Approx(0.1403).margin(2e-3));
  const double m_phase = essential_phase(m, 1e-5).alpha_star;
  CHECK(m_phase == Catch::Approx(0.1662).margin(2e-3));
  CHECK(m_phase > lap_phase);
}
