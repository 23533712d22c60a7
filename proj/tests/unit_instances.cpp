#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "spanstream/graph.hpp"
#include "spanstream/instances.hpp"
#include "spanstream/resistance.hpp"

using namespace spanstream;

TEST_CASE("layered custom counts") {
  LayeredInstance inst = layered_custom(4, 5);
  CHECK(inst.graph.n() == 22);             // 2 + a*N
  CHECK(inst.graph.m() == 73);             // 2a + (N-1)a^2 + 1
  CHECK(inst.graph.has_edge(inst.u, inst.v));
  REQUIRE(inst.layers.size() == 5);
  for (const auto& layer : inst.layers) CHECK(layer.size() == 4);
}

TEST_CASE("layered terminal distance without the direct edge") {
  LayeredInstance inst = layered_custom(4, 5);
  CHECK(bfs_distances(inst.graph, inst.u).dist[inst.v] == 1);
  UnweightedGraph cut = inst.graph;
  cut.remove_edge(inst.u, inst.v);
  CHECK(bfs_distances(cut, inst.u).dist[inst.v] == 6);  // N+1
}

TEST_CASE("layered resistance matches the closed form for several sizes") {
  for (auto [a, N] : {std::pair<std::size_t, std::size_t>{3, 4},
                      {4, 5},
                      {5, 3}}) {
    LayeredInstance inst = layered_custom(a, N);
    double da = static_cast<double>(a), dN = static_cast<double>(N);
    double closed = (2 * da + dN - 1) / (da * da + 2 * da + dN - 1);
    CHECK(effective_resistance(WeightedGraph::from_unweighted(inst.graph),
                               inst.u, inst.v) ==
          doctest::Approx(closed).epsilon(1e-9));
  }
}

TEST_CASE("layered asymptotic parameters") {
  LayeredInstance inst = layered_instance(1000);
  double c = std::log2(1000.0);
  CHECK(inst.a == static_cast<std::size_t>(
                      std::ceil(c * std::pow(1000.0, 1.0 / 3.0))));
  CHECK(inst.N ==
        static_cast<std::size_t>(std::ceil(std::pow(1000.0, 2.0 / 3.0) / c)));
  CHECK(inst.graph.n() == 2 + inst.a * inst.N);
  CHECK_THROWS_AS(layered_instance(1), std::invalid_argument);
}

TEST_CASE("cut-bad parameters at n=512") {
  LayeredInstance inst = cut_bad_instance(512);
  CHECK(inst.a == 9);
  CHECK(inst.N == 57);
}

TEST_CASE("cut-bad demo preserves cuts but stretches the terminal pair") {
  CutBadDemo demo = cut_bad_demo(512, 1.0 / 18.0, 2000, 5);
  CHECK(!demo.h.has_edge(demo.inst.u, demo.inst.v));
  CHECK(demo.cuts_checked == 2000);
  CHECK(demo.cut_violations == 0);
  CHECK(demo.spanner_distance ==
        static_cast<std::int64_t>(demo.inst.N) + 1);
}

TEST_CASE("conjectured hard rejects degenerate distance") {
  CHECK_THROWS_AS(conjectured_hard(200, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(conjectured_hard(200, 1, 1), std::invalid_argument);
}

TEST_CASE("conjectured hard edge count concentrates") {
  const std::size_t n = 200, d = 20;
  // candidate pairs: circular distance <= d, each kept w.p. 1/2
  double cand = static_cast<double>(n) * d;
  double mean = cand / 2.0, sigma = std::sqrt(cand) / 2.0;
  for (std::uint64_t seed : {2ull, 3ull, 4ull}) {
    HardInstance inst = conjectured_hard(n, d, seed);
    CHECK(std::abs(static_cast<double>(inst.graph.m()) - mean) <=
          3.0 * sigma + 2.0);  // +-2 for the swap
    // the swap bookkeeping is consistent
    CHECK(inst.graph.has_edge(inst.planted1.u, inst.planted1.v));
    CHECK(inst.graph.has_edge(inst.planted2.u, inst.planted2.v));
    CHECK(!inst.graph.has_edge(inst.removed1.u, inst.removed1.v));
    CHECK(!inst.graph.has_edge(inst.removed2.u, inst.removed2.v));
    CHECK(inst.perm.size() == n);
  }
}

TEST_CASE("conjectured hard planted pair is often far") {
  int far = 0, trials = 40;
  const std::size_t n = 200, d = 20;
  for (int t = 0; t < trials; ++t) {
    HardInstance inst = conjectured_hard(n, d, 100 + t);
    UnweightedGraph g = inst.graph;
    g.remove_edge(inst.planted1.u, inst.planted1.v);
    g.remove_edge(inst.planted2.u, inst.planted2.v);
    std::int64_t dist =
        bfs_distances(g, inst.planted1.u).dist[inst.planted1.v];
    if (dist == kUnreachable || dist >= 3) ++far;
  }
  CHECK(far >= trials * 3 / 10);
}

TEST_CASE("gnp extremes") {
  CHECK(gnp(20, 0.0, 1).m() == 0);
  CHECK(gnp(20, 1.0, 1).m() == 190);
  CHECK_THROWS_AS(gnp(20, 1.5, 1), std::invalid_argument);
}

TEST_CASE("gnp determinism per seed") {
  CHECK(gnp(50, 0.2, 9) == gnp(50, 0.2, 9));
  CHECK(!(gnp(50, 0.2, 9) == gnp(50, 0.2, 10)));
}

TEST_CASE("to_stream event count and materialization") {
  UnweightedGraph g = gnp(40, 0.25, 11);
  std::size_t m = g.m();
  for (double ratio : {0.0, 0.25, 0.5, 0.9}) {
    StreamSource s = to_stream(g, ratio, 13);
    std::size_t decoys =
        static_cast<std::size_t>(ratio * static_cast<double>(m) + 0.5);
    CHECK(s.events().size() == m + 2 * decoys);
    CHECK(s.materialize() == g);
  }
  CHECK_THROWS_AS(to_stream(g, 1.0, 1), std::invalid_argument);
}

TEST_CASE("to_stream of the empty graph") {
  StreamSource s = to_stream(UnweightedGraph(5), 0.5, 1);
  CHECK(s.events().empty());
  CHECK(s.materialize().m() == 0);
}
