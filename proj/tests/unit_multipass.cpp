#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spanstream/instances.hpp"
#include "spanstream/spanner_multipass.hpp"

using namespace spanstream;

namespace {

UnweightedGraph cycle(std::size_t n) {
  UnweightedGraph g(n);
  for (Vertex v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  g.add_edge(0, static_cast<Vertex>(n - 1));
  return g;
}

UnweightedGraph complete(std::size_t n) {
  UnweightedGraph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

// max BFS distance inside the cluster, paths restricted to h
std::int64_t cluster_diameter(const UnweightedGraph& h,
                              const std::vector<Vertex>& cluster) {
  std::vector<bool> in(h.n(), false);
  for (Vertex v : cluster) in[v] = true;
  UnweightedGraph sub(h.n());
  for (const Edge& e : h.edges())
    if (in[e.u] && in[e.v]) sub.add_edge(e.u, e.v);
  std::int64_t diam = 0;
  for (Vertex s : cluster) {
    DistanceMap d = bfs_distances(sub, s);
    for (Vertex t : cluster) {
      REQUIRE(d.dist[t] != kUnreachable);  // clusters must be h-connected
      diam = std::max(diam, d.dist[t]);
    }
  }
  return diam;
}

}  // namespace

TEST_CASE("bs clustering at i=0 is all singletons with empty h") {
  StreamSource src = StreamSource::from_graph(gnp(30, 0.2, 1));
  ClusteringResult r = bs_clustering(src, 0.5, 0, 7);
  CHECK(r.partition.clusters.size() == 30);
  for (const auto& c : r.partition.clusters) CHECK(c.size() == 1);
  CHECK(r.h.m() == 0);
  CHECK(r.meters.pass.passes == 1);
}

TEST_CASE("bs clustering at p=1 keeps everyone clustered") {
  StreamSource src = StreamSource::from_graph(gnp(24, 0.3, 2));
  ClusteringResult r = bs_clustering(src, 1.0, 2, 8);
  std::size_t covered = 0;
  for (const auto& c : r.partition.clusters) {
    covered += c.size();
    CHECK(cluster_diameter(r.h, c) <= 4);
  }
  CHECK(covered == 24);
  CHECK(r.partition.sampled_count == 24);
}

TEST_CASE("bs clustering certificates on gnp") {
  StreamSource src = StreamSource::from_graph(gnp(64, 0.2, 3));
  double p = std::pow(64.0, -1.0 / 3.0);
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    ClusteringResult r = bs_clustering(src, p, 2, seed);
    CHECK(r.meters.pass.passes == 3);
    for (const auto& c : r.partition.clusters)
      CHECK(cluster_diameter(r.h, c) <= 4);
  }
}

TEST_CASE("kw clustering takes two passes and respects its diameter bound") {
  StreamSource src = StreamSource::from_graph(gnp(64, 0.2, 4));
  double p = std::pow(64.0, -1.0 / 3.0);
  for (std::uint64_t seed : {21ull, 22ull, 23ull}) {
    ClusteringResult r = kw_clustering(src, p, 2, seed);
    CHECK(r.meters.pass.passes == 2);
    for (const auto& c : r.partition.clusters)
      CHECK(cluster_diameter(r.h, c) <= 6);  // 2^(i+1)-2
  }
}

TEST_CASE("kw clustering at i=1 has star diameter") {
  StreamSource src = StreamSource::from_graph(gnp(40, 0.3, 5));
  ClusteringResult r = kw_clustering(src, 0.4, 1, 31);
  for (const auto& c : r.partition.clusters)
    CHECK(cluster_diameter(r.h, c) <= 2);
}

TEST_CASE("clustering rejects bad parameters") {
  StreamSource src = StreamSource::from_graph(gnp(10, 0.5, 6));
  CHECK_THROWS_AS(bs_clustering(src, 0.0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(bs_clustering(src, 1.5, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(kw_clustering(src, 0.5, -1, 1), std::invalid_argument);
}

TEST_CASE("baswana-sen on a cycle returns the cycle") {
  StreamSource src = to_stream(cycle(50), 0.2, 9);
  SpannerResult r = baswana_sen(src, 2, 41);
  CHECK(r.spanner == cycle(50));  // any 3-spanner of a cycle is the cycle
  CHECK(r.report.passes == 2);
  CHECK(r.report.max_stretch == 1);
  CHECK(r.report.declared_bound == 3);
  CHECK(r.report.verified);
}

TEST_CASE("baswana-sen on K16 is a 3-spanner") {
  StreamSource src = StreamSource::from_graph(complete(16));
  SpannerResult r = baswana_sen(src, 2, 51);
  CHECK(r.report.max_stretch <= 3);
  CHECK(r.report.passes == 2);
  CHECK(r.spanner.is_subgraph_of(complete(16)));
}

TEST_CASE("kapralov-woodruff at k=1 recovers the graph") {
  UnweightedGraph g = gnp(32, 0.15, 10);
  SpannerResult r = kapralov_woodruff(StreamSource::from_graph(g), 1, 61);
  CHECK(r.report.max_stretch == 1);
  CHECK(r.report.declared_bound == 1);
  CHECK(r.spanner == g);
}

TEST_CASE("kapralov-woodruff on K16 is a 7-spanner in two passes") {
  StreamSource src = StreamSource::from_graph(complete(16));
  SpannerResult r = kapralov_woodruff(src, 3, 71);
  CHECK(r.report.passes == 2);
  CHECK(r.report.max_stretch <= 7);
  CHECK(r.report.verified);
}

TEST_CASE("multipass spanners verify on gnp") {
  UnweightedGraph g = gnp(96, 0.12, 12);
  StreamSource src = to_stream(g, 0.25, 13);
  SpannerResult bs = baswana_sen(src, 3, 81);
  CHECK(bs.report.passes == 3);
  CHECK(bs.report.max_stretch <= 5);
  CHECK(bs.spanner.is_subgraph_of(g));
  SpannerResult kw = kapralov_woodruff(src, 3, 82);
  CHECK(kw.report.passes == 2);
  CHECK(kw.report.max_stretch <= 7);
  CHECK(kw.spanner.is_subgraph_of(g));
}

TEST_CASE("recursion parameter arithmetic") {
  for (double k : {3.0, 7.0, 15.0, 31.0}) {
    for (int g = 1; g <= 2; ++g) {
      RecursionParams rp = RecursionParams::make(k, g);
      CHECK(rp.r ==
            static_cast<int>(std::ceil(std::pow((k + 1) / 2.0, 1.0 / g) -
                                       1e-9)) -
                1);
      REQUIRE(rp.d.size() == static_cast<std::size_t>(g + 1));
      for (int i = 0; i + 1 <= g; ++i)
        CHECK(rp.d[i + 1] == doctest::Approx((rp.r + 1) * rp.d[i]));
      CHECK(rp.d[0] == doctest::Approx(1.0 / k));
    }
  }
}

TEST_CASE("closed-form stretch and pass bounds") {
  CHECK(stretch_bound(7, 1, Scheme::kKW) == 29);
  CHECK(pass_bound(7, 1, Scheme::kKW) == 2);
  CHECK(stretch_bound(7, 1, Scheme::kBS) == 13);
  CHECK(pass_bound(7, 1, Scheme::kBS) == 4);
  CHECK(stretch_bound(31, 2, Scheme::kBS) == 97);
  CHECK(stretch_bound(31, 2, Scheme::kKW) == 449);
  CHECK(stretch_bound(31, 1, Scheme::kKW) == (1 << 17) - 3);
  CHECK(stretch_bound(3, 1, Scheme::kKW) == 5);
  CHECK(pass_bound(31, 2, Scheme::kBS) == 7);  // g*r+1 with r=3
  CHECK(pass_bound(31, 2, Scheme::kKW) == 3);
}

TEST_CASE("recursive spanner runs within its declared bounds") {
  UnweightedGraph g = gnp(128, 0.1, 14);
  StreamSource src = to_stream(g, 0.2, 15);
  for (Scheme scheme : {Scheme::kKW, Scheme::kBS}) {
    SpannerResult r = recursive_spanner(src, 3, 1, scheme, 91);
    CHECK(r.report.passes == pass_bound(3, 1, scheme));
    CHECK(r.report.declared_bound == stretch_bound(3, 1, scheme));
    CHECK(r.report.max_stretch <= r.report.declared_bound);
    CHECK(r.report.verified);
    CHECK(r.spanner.is_subgraph_of(g));
  }
}

TEST_CASE("recursive spanner validates parameters") {
  StreamSource src = StreamSource::from_graph(gnp(16, 0.4, 16));
  CHECK_THROWS_AS(recursive_spanner(src, 1.0, 1, Scheme::kKW, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(recursive_spanner(src, 7.0, 9, Scheme::kKW, 1),
                  std::invalid_argument);
}

TEST_CASE("multipass determinism per seed") {
  StreamSource src = to_stream(gnp(48, 0.2, 17), 0.3, 18);
  SpannerResult a = baswana_sen(src, 2, 123);
  SpannerResult b = baswana_sen(src, 2, 123);
  CHECK(a.spanner == b.spanner);
  a.report.wall_ms = b.report.wall_ms = 0.0;
  CHECK(a.report.to_json() == b.report.to_json());
}
