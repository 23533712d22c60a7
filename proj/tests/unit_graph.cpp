#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spanstream/graph.hpp"
#include "spanstream/instances.hpp"
#include "spanstream/resistance.hpp"
#include "spanstream/sparsify.hpp"

using namespace spanstream;

namespace {

UnweightedGraph path(std::size_t n) {
  UnweightedGraph g(n);
  for (Vertex v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

UnweightedGraph cycle(std::size_t n) {
  UnweightedGraph g = path(n);
  g.add_edge(0, static_cast<Vertex>(n - 1));
  return g;
}

UnweightedGraph complete(std::size_t n) {
  UnweightedGraph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

}  // namespace

TEST_CASE("bfs on a path") {
  DistanceMap d = bfs_distances(path(3), 0);
  REQUIRE(d.dist.size() == 3);
  CHECK(d.dist[0] == 0);
  CHECK(d.dist[1] == 1);
  CHECK(d.dist[2] == 2);
}

TEST_CASE("bfs marks disconnected vertices unreachable") {
  UnweightedGraph g(3);
  g.add_edge(0, 1);
  DistanceMap d = bfs_distances(g, 0);
  CHECK(d.dist[2] == kUnreachable);
}

TEST_CASE("bfs rejects out-of-range source") {
  CHECK_THROWS_AS(bfs_distances(path(3), 7), std::invalid_argument);
}

TEST_CASE("bfs satisfies the edge relaxation inequality") {
  UnweightedGraph g = gnp(60, 0.08, 5);
  DistanceMap d = bfs_distances(g, 0);
  for (const Edge& e : g.edges()) {
    if (d.dist[e.u] == kUnreachable || d.dist[e.v] == kUnreachable) continue;
    CHECK(std::abs(d.dist[e.u] - d.dist[e.v]) <= 1);
  }
}

TEST_CASE("stretch of the identity subgraph is 1") {
  UnweightedGraph g = gnp(40, 0.2, 3);
  CHECK(spanner_stretch(g, g).max_stretch == 1);
}

TEST_CASE("stretch of C8 minus one edge is 7") {
  UnweightedGraph g = cycle(8);
  UnweightedGraph h = g;
  h.remove_edge(0, 7);
  StretchReport r = spanner_stretch(g, h);
  CHECK(r.max_stretch == 7);
  CHECK(r.witness_edge == Edge(0, 7));
}

TEST_CASE("stretch of a star inside K4 is 2") {
  UnweightedGraph g = complete(4);
  UnweightedGraph h(4);
  h.add_edge(0, 1);
  h.add_edge(0, 2);
  h.add_edge(0, 3);
  CHECK(spanner_stretch(g, h).max_stretch == 2);
}

TEST_CASE("stretch rejects non-subgraphs") {
  UnweightedGraph g = path(4);
  UnweightedGraph h(4);
  h.add_edge(0, 3);
  CHECK_THROWS_AS(spanner_stretch(g, h), std::invalid_argument);
}

TEST_CASE("edge-restricted stretch equals the all-pairs maximum") {
  // Triangle-inequality reduction, checked brute force at small n.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    UnweightedGraph g = gnp(30, 0.25, 100 + trial);
    UnweightedGraph h(30);
    for (const Edge& e : g.edges())
      if (rng() % 4) h.add_edge(e.u, e.v);
    StretchReport r = spanner_stretch(g, h);

    // brute all-pairs worst ratio d_h/d_g; the edge-restricted maximum must
    // coincide with it (it is attained at an edge, d_g = 1)
    double worst = 1.0;
    bool cut = false;
    for (Vertex s = 0; s < 30; ++s) {
      DistanceMap dg = bfs_distances(g, s);
      DistanceMap dh = bfs_distances(h, s);
      for (Vertex u = 0; u < 30; ++u) {
        if (dg.dist[u] == kUnreachable || dg.dist[u] == 0) continue;
        if (dh.dist[u] == kUnreachable) {
          cut = true;
          continue;
        }
        worst = std::max(worst, static_cast<double>(dh.dist[u]) /
                                    static_cast<double>(dg.dist[u]));
      }
    }
    if (cut) {
      CHECK(r.max_stretch == kUnreachable);
    } else {
      CHECK(static_cast<double>(r.max_stretch) == doctest::Approx(worst));
    }
  }
}

TEST_CASE("effective resistance of a unit path is its length") {
  for (std::size_t s : {1u, 4u, 9u}) {
    WeightedGraph g = WeightedGraph::from_unweighted(path(s + 1));
    CHECK(effective_resistance(g, 0, static_cast<Vertex>(s)) ==
          doctest::Approx(static_cast<double>(s)).epsilon(1e-10));
  }
}

TEST_CASE("effective resistance across a triangle edge is 2/3") {
  WeightedGraph g = WeightedGraph::from_unweighted(complete(3));
  CHECK(effective_resistance(g, 0, 1) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("effective resistance across components is infinite") {
  WeightedGraph g(4);
  g.set_weight(0, 1, 1.0);
  g.set_weight(2, 3, 1.0);
  CHECK(effective_resistance(g, 0, 2) == kInfiniteResistance);
}

TEST_CASE("layered terminal resistance matches the closed form") {
  LayeredInstance inst = layered_custom(4, 5);
  WeightedGraph g = WeightedGraph::from_unweighted(inst.graph);
  double a = 4, N = 5;
  double closed = (2 * a + N - 1) / (a * a + 2 * a + N - 1);
  CHECK(closed == doctest::Approx(12.0 / 28.0).epsilon(1e-12));
  CHECK(effective_resistance(g, inst.u, inst.v) ==
        doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("sum of weighted resistances is n minus components") {
  CHECK(sum_weighted_resistances(WeightedGraph::from_unweighted(path(3))) ==
        doctest::Approx(2.0).epsilon(1e-8));
  CHECK(sum_weighted_resistances(WeightedGraph::from_unweighted(complete(3))) ==
        doctest::Approx(2.0).epsilon(1e-8));
  WeightedGraph two(4);
  two.set_weight(0, 1, 1.0);
  two.set_weight(2, 3, 1.0);
  CHECK(sum_weighted_resistances(two) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(sum_weighted_resistances(
            WeightedGraph::from_unweighted(gnp(50, 0.2, 9))) ==
        doctest::Approx(49.0).epsilon(1e-7));
}

TEST_CASE("unit edge resistance never exceeds 1") {
  WeightedGraph g = WeightedGraph::from_unweighted(gnp(40, 0.15, 2));
  ResistanceOracle oracle(g);
  for (const auto& [e, w] : g.edges())
    CHECK(oracle.resistance(e.u, e.v) <= 1.0 + 1e-9);
}

TEST_CASE("cut weight basics") {
  WeightedGraph k3 = WeightedGraph::from_unweighted(complete(3));
  CHECK(cut_weight(k3, {}) == doctest::Approx(0.0));
  CHECK(cut_weight(k3, {0}) == doctest::Approx(2.0));
}

TEST_CASE("cut weight matches a brute-force edge scan") {
  UnweightedGraph g = gnp(20, 0.5, 17);
  WeightedGraph w = WeightedGraph::from_unweighted(g);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vertex> side;
    std::vector<bool> in(20, false);
    for (Vertex v = 0; v < 20; ++v)
      if (rng() & 1) {
        side.push_back(v);
        in[v] = true;
      }
    double brute = 0;
    for (const Edge& e : g.edges())
      if (in[e.u] != in[e.v]) brute += 1.0;
    CHECK(cut_weight(w, side) == doctest::Approx(brute));
  }
}

TEST_CASE("layer cut check passes on identical graphs") {
  UnweightedGraph g = gnp(40, 0.2, 31);
  WeightedGraph h = WeightedGraph::from_unweighted(g);
  CHECK(layer_cut_check(g, h, 0, 0.0).ok());
  UnweightedGraph p = path(8);
  CHECK(layer_cut_check(p, WeightedGraph::from_unweighted(p), 0, 0.0).ok());
}

TEST_CASE("layer cut check rejects non-subgraphs") {
  UnweightedGraph g = path(4);
  WeightedGraph h(4);
  h.set_weight(0, 3, 1.0);
  CHECK_THROWS_AS(layer_cut_check(g, h, 0, 0.1), std::invalid_argument);
}

TEST_CASE("components labelling") {
  UnweightedGraph g(5);
  g.add_edge(0, 1);
  g.add_edge(3, 4);
  std::vector<Vertex> c = components(g);
  CHECK(c[0] == c[1]);
  CHECK(c[3] == c[4]);
  CHECK(c[0] != c[2]);
  CHECK(c[2] != c[3]);
}

TEST_CASE("edge construction rejects self loops") {
  CHECK_THROWS_AS(Edge(3, 3), std::invalid_argument);
}
