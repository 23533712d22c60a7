#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spanstream/graph.hpp"
#include "spanstream/instances.hpp"
#include "spanstream/report.hpp"
#include "spanstream/resistance.hpp"
#include "spanstream/sparsify.hpp"

using namespace spanstream;

namespace {

UnweightedGraph tree(std::size_t n, std::uint64_t seed) {
  // random tree: attach each vertex to a random earlier one
  std::mt19937_64 rng(seed);
  UnweightedGraph g(n);
  for (Vertex v = 1; v < n; ++v)
    g.add_edge(v, static_cast<Vertex>(rng() % v));
  return g;
}

}  // namespace

TEST_CASE("a tree sparsifies to itself with unit weights") {
  UnweightedGraph t = tree(30, 3);
  WeightedGraph h = spectral_sparsify(t, {});
  CHECK(h.unweight() == t);
  for (const auto& [e, w] : h.edges()) CHECK(w == doctest::Approx(1.0));
}

TEST_CASE("K2 sparsifies to its single edge") {
  UnweightedGraph g(2);
  g.add_edge(0, 1);
  WeightedGraph h = spectral_sparsify(g, {});
  CHECK(h.m() == 1);
  CHECK(h.weight(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("kept weights are at least one") {
  SparsifierParams params;
  params.seed = 5;
  WeightedGraph h = spectral_sparsify(gnp(80, 0.3, 2), params);
  for (const auto& [e, w] : h.edges()) CHECK(w >= 1.0 - 1e-12);
}

TEST_CASE("eps outside (0, 1/18] is rejected") {
  SparsifierParams params;
  params.eps = 0.2;
  CHECK_THROWS_AS(spectral_sparsify(gnp(10, 0.5, 1), params),
                  std::invalid_argument);
  params.eps = 0.0;
  CHECK_THROWS_AS(spectral_sparsify(gnp(10, 0.5, 1), params),
                  std::invalid_argument);
}

TEST_CASE("disconnected inputs are sparsified per component") {
  UnweightedGraph g(8);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(5, 6);
  WeightedGraph h = spectral_sparsify(g, {});
  CHECK(h.unweight() == g);  // all bridges, all forced
}

TEST_CASE("verify_spectral accepts the identity") {
  WeightedGraph g = WeightedGraph::from_unweighted(gnp(40, 0.3, 7));
  SpectralVerdict v = verify_spectral(g, g, 1.0 / 18.0);
  CHECK(v.pass);
  CHECK(v.worst_ratio == doctest::Approx(1.0));
}

TEST_CASE("verify_spectral rejects doubled weights") {
  WeightedGraph g = WeightedGraph::from_unweighted(gnp(40, 0.3, 7));
  WeightedGraph h(g.n());
  for (const auto& [e, w] : g.edges()) h.set_weight(e.u, e.v, 2.0 * w);
  CHECK(!verify_spectral(g, h, 0.1).pass);
}

TEST_CASE("verify_spectral_exact brackets the identity at 1") {
  WeightedGraph g = WeightedGraph::from_unweighted(gnp(25, 0.4, 11));
  SpectralBounds b = verify_spectral_exact(g, g);
  CHECK(b.lo == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(b.hi == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("er sampling passes spectral verification on most seeds") {
  UnweightedGraph g = gnp(100, 0.3, 77);
  WeightedGraph wg = WeightedGraph::from_unweighted(g);
  int pass = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SparsifierParams params;
    params.seed = seed;
    WeightedGraph h = spectral_sparsify(g, params);
    if (verify_spectral(wg, h, params.eps, 50, seed).pass) ++pass;
    SpectralBounds b = verify_spectral_exact(wg, h);
    CHECK(b.lo >= 1.0 - 1.2 * params.eps - 1e-9);
    CHECK(b.hi <= 1.0 + 1.2 * params.eps + 1e-9);
  }
  CHECK(pass >= 18);
}

TEST_CASE("resistance and cut ratios stay in the band") {
  UnweightedGraph g = gnp(100, 0.3, 13);
  WeightedGraph wg = WeightedGraph::from_unweighted(g);
  SparsifierParams params;
  params.seed = 99;
  WeightedGraph h = spectral_sparsify(g, params);
  double band = 1.2 * params.eps;

  ResistanceOracle og(wg), oh(h);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    Vertex u = rng() % 100, v = rng() % 100;
    if (u == v) continue;
    double ratio = oh.resistance(u, v) / og.resistance(u, v);
    CHECK(ratio >= 1.0 - band - 1e-9);
    CHECK(ratio <= 1.0 + band + 1e-9);
  }

  double cutmin = 20.0 * std::pow(params.eps, -2.0) *
                  std::log2(static_cast<double>(g.n()));
  for (int t = 0; t < 200; ++t) {
    std::vector<Vertex> side;
    for (Vertex v = 0; v < 100; ++v)
      if (rng() & 1) side.push_back(v);
    double cg = cut_weight(wg, side);
    if (cg < cutmin) continue;  // below the concentration regime
    double ratio = cut_weight(h, side) / cg;
    CHECK(ratio >= 1.0 - band);
    CHECK(ratio <= 1.0 + band);
  }
}

TEST_CASE("expected output size stays near the sampling budget") {
  double target = 0.0, got = 0.0;
  UnweightedGraph g = gnp(60, 0.4, 21);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    SparsifierParams params;
    params.seed = seed;
    got += static_cast<double>(spectral_sparsify(g, params).m());
    target += params.oversample * std::pow(params.eps, -2.0) *
              static_cast<double>(g.n()) * std::log2(static_cast<double>(g.n()));
  }
  CHECK(got <= 2.0 * target);
}

TEST_CASE("unweight keeps the edge set") {
  WeightedGraph h(5);
  h.set_weight(0, 1, 2.5);
  h.set_weight(3, 4, 7.0);
  UnweightedGraph u = unweight(h);
  CHECK(u.m() == 2);
  CHECK(u.has_edge(0, 1));
  CHECK(u.has_edge(3, 4));
  CHECK(unweight(WeightedGraph(4)).m() == 0);
}

TEST_CASE("high sparsifier distance forces high resistance") {
  // frozen constants: R >= c*s^3/(n^2 log^2 n) and R >= c*s^2/(m log n)
  double c3 = *RegressionStore::bound("sparsify/resistance/cube_c");
  double c2 = *RegressionStore::bound("sparsify/resistance/square_c");
  UnweightedGraph g = gnp(120, 0.05, 31);
  WeightedGraph wg = WeightedGraph::from_unweighted(g);
  SparsifierParams params;
  params.seed = 7;
  UnweightedGraph hu = unweight(spectral_sparsify(g, params));
  ResistanceOracle oracle(wg);
  double n = static_cast<double>(g.n());
  double m = static_cast<double>(g.m());
  double ln = std::log2(n);
  for (const Edge& e : g.edges()) {
    DistanceMap d = bfs_distances(hu, e.u);
    if (d.dist[e.v] == kUnreachable) continue;
    double s = static_cast<double>(d.dist[e.v]);
    double r = oracle.resistance(e.u, e.v);
    CHECK(r >= c3 * s * s * s / (n * n * ln * ln) - 1e-12);
    CHECK(r >= c2 * s * s / (m * ln) - 1e-12);
  }
}
