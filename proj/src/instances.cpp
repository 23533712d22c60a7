#include "spanstream/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace spanstream {

LayeredInstance layered_custom(std::size_t a, std::size_t N) {
  if (a < 2 || N < 2)
    throw std::invalid_argument("layered_custom: need a >= 2 and N >= 2");
  LayeredInstance inst;
  inst.a = a;
  inst.N = N;
  inst.graph = UnweightedGraph(2 + a * N);
  inst.layers.resize(N);
  auto vid = [a](std::size_t layer, std::size_t j) {
    return static_cast<Vertex>(2 + layer * a + j);
  };
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < a; ++j) inst.layers[i].push_back(vid(i, j));
  inst.graph.add_edge(inst.u, inst.v);
  for (std::size_t j = 0; j < a; ++j) {
    inst.graph.add_edge(inst.u, vid(0, j));
    inst.graph.add_edge(inst.v, vid(N - 1, j));
  }
  for (std::size_t i = 0; i + 1 < N; ++i)
    for (std::size_t j = 0; j < a; ++j)
      for (std::size_t j2 = 0; j2 < a; ++j2)
        inst.graph.add_edge(vid(i, j), vid(i + 1, j2));
  return inst;
}

LayeredInstance layered_instance(std::size_t n) {
  if (n < 2) throw std::invalid_argument("layered_instance: n too small");
  double c = std::log2(static_cast<double>(n));
  std::size_t a = static_cast<std::size_t>(
      std::ceil(c * std::cbrt(static_cast<double>(n))));
  std::size_t N = static_cast<std::size_t>(
      std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0) / c));
  if (a < 2 || N < 2)
    throw std::invalid_argument("layered_instance: degenerate parameters");
  return layered_custom(a, N);
}

LayeredInstance cut_bad_instance(std::size_t n) {
  if (n < 4) throw std::invalid_argument("cut_bad_instance: n too small");
  std::size_t a = static_cast<std::size_t>(
      std::ceil(std::log2(static_cast<double>(n))));
  std::size_t N = (n + a - 1) / a;
  if (a < 2 || N < 2)
    throw std::invalid_argument("cut_bad_instance: degenerate parameters");
  return layered_custom(a, N);
}

CutBadDemo cut_bad_demo(std::size_t n, double eps, std::size_t cuts,
                        std::uint64_t seed) {
  CutBadDemo demo;
  demo.inst = cut_bad_instance(n);
  const UnweightedGraph& g = demo.inst.graph;
  // Dropping the terminal edge loses exactly 1 from every u-v separating
  // cut; scaling the a edges at each terminal by (a+1)/a restores the
  // singleton cuts exactly and leaves only an O(1) absolute error elsewhere.
  double factor =
      (static_cast<double>(demo.inst.a) + 1.0) / static_cast<double>(demo.inst.a);
  demo.h = WeightedGraph(g.n());
  for (const Edge& e : g.edges()) {
    if (e.u == demo.inst.u && e.v == demo.inst.v) continue;  // drop terminal edge
    bool at_terminal = e.u == demo.inst.u || e.v == demo.inst.v ||
                       e.u == demo.inst.v;
    demo.h.set_weight(e.u, e.v, at_terminal ? factor : 1.0);
  }
  // random cut scan
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  demo.cuts_checked = cuts;
  for (std::size_t c = 0; c < cuts; ++c) {
    std::vector<char> side(g.n(), 0);
    for (std::size_t v = 0; v < g.n(); ++v) side[v] = coin(rng) ? 1 : 0;
    double wg = 0.0, wh = 0.0;
    for (const Edge& e : g.edges())
      if (side[e.u] != side[e.v]) {
        wg += 1.0;
        wh += demo.h.weight(e.u, e.v);
      }
    if (wg > 0.0 && std::abs(wh - wg) > eps * wg) ++demo.cut_violations;
  }
  DistanceMap dm = bfs_distances(demo.h.unweight(), demo.inst.u);
  demo.spanner_distance = dm.dist[demo.inst.v];
  return demo;
}

HardInstance conjectured_hard(std::size_t n, std::size_t d,
                              std::uint64_t seed) {
  if (d <= 1 || d >= (n + 3) / 4)
    throw std::invalid_argument("conjectured_hard: need 1 < d < n/4");
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * attempt));
    HardInstance inst;
    inst.perm.resize(n);
    std::iota(inst.perm.begin(), inst.perm.end(), 0);
    std::shuffle(inst.perm.begin(), inst.perm.end(), rng);
    inst.graph = UnweightedGraph(n);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t off = 1; off <= d; ++off)
        if (coin(rng)) inst.graph.add_edge(inst.perm[i], inst.perm[(i + off) % n]);
    if (inst.graph.m() < 2) continue;  // too few edges to swap
    // plant one two-edge swap, resampling to keep the graph simple
    bool planted = false;
    for (int trial = 0; trial < 100 && !planted; ++trial) {
      const auto& es = inst.graph.edges();
      std::uniform_int_distribution<std::size_t> pick(0, es.size() - 1);
      std::size_t i1 = pick(rng), i2 = pick(rng);
      if (i1 == i2) continue;
      Edge e1 = es[i1], e2 = es[i2];
      Vertex a = e1.u, b = e1.v, c = e2.u, dd = e2.v;
      if (a == c || a == dd || b == c || b == dd) continue;
      if (inst.graph.has_edge(a, c) || inst.graph.has_edge(b, dd)) continue;
      inst.graph.remove_edge(a, b);
      inst.graph.remove_edge(c, dd);
      inst.graph.add_edge(a, c);
      inst.graph.add_edge(b, dd);
      inst.removed1 = e1;
      inst.removed2 = e2;
      inst.planted1 = Edge(a, c);
      inst.planted2 = Edge(b, dd);
      planted = true;
    }
    if (planted) return inst;
  }
  throw std::runtime_error("conjectured_hard: swap retries exhausted");
}

UnweightedGraph gnp(std::size_t n, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("gnp: p in [0,1]");
  UnweightedGraph g(n);
  if (p == 0.0) return g;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (p >= 1.0 || unif(rng) < p) g.add_edge(u, v);
  return g;
}

StreamSource to_stream(const UnweightedGraph& g, double deletion_ratio,
                       std::uint64_t seed) {
  if (deletion_ratio < 0.0 || deletion_ratio >= 1.0)
    throw std::invalid_argument("to_stream: deletion_ratio in [0,1)");
  std::mt19937_64 rng(seed);
  std::vector<UpdateEvent> events;
  events.reserve(g.m());
  std::vector<Edge> edges = g.edges();
  std::sort(edges.begin(), edges.end());
  std::shuffle(edges.begin(), edges.end(), rng);
  for (const Edge& e : edges) events.push_back({StreamOp::kInsert, e});

  std::size_t decoys = static_cast<std::size_t>(
      std::floor(deletion_ratio * static_cast<double>(g.m()) + 0.5));
  std::unordered_set<std::uint64_t> used;
  for (std::size_t k = 0; k < decoys; ++k) {
    // prefer churn on a fresh non-edge: insert then delete
    bool found = false;
    Edge f(0, 1);
    std::uniform_int_distribution<Vertex> pick(
        0, static_cast<Vertex>(g.n() - 1));
    for (int tries = 0; tries < 1000 && !found; ++tries) {
      Vertex a = pick(rng), b = pick(rng);
      if (a == b) continue;
      Edge cand(a, b);
      if (g.has_edge(cand.u, cand.v) || used.count(cand.key())) continue;
      f = cand;
      found = true;
    }
    if (found) {
      used.insert(f.key());
      std::uniform_int_distribution<std::size_t> pos(0, events.size());
      std::size_t p1 = pos(rng);
      events.insert(events.begin() + p1, {StreamOp::kInsert, f});
      std::uniform_int_distribution<std::size_t> pos2(p1 + 1, events.size());
      events.insert(events.begin() + pos2(rng), {StreamOp::kDelete, f});
    } else {
      // complete graph: delete a live edge and reinsert it later
      std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
      Edge f = edges[pick(rng)];
      std::size_t after = 0;
      for (std::size_t i = 0; i < events.size(); ++i)
        if (events[i].edge == f) after = i;  // last touch of f
      std::uniform_int_distribution<std::size_t> pos(after + 1, events.size());
      std::size_t p1 = pos(rng);
      events.insert(events.begin() + p1, {StreamOp::kDelete, f});
      std::uniform_int_distribution<std::size_t> pos2(p1 + 1, events.size());
      events.insert(events.begin() + pos2(rng), {StreamOp::kInsert, f});
    }
  }
  return StreamSource(g.n(), std::move(events));
}

}  // namespace spanstream
