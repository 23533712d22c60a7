#include "spanstream/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace spanstream {

DistanceMap bfs_distances(const UnweightedGraph& g, Vertex src) {
  g.check_vertex(src);
  DistanceMap dm;
  dm.source = src;
  dm.dist.assign(g.n(), kUnreachable);
  auto adj = g.adjacency();
  std::deque<Vertex> q;
  dm.dist[src] = 0;
  q.push_back(src);
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (Vertex w : adj[u]) {
      if (dm.dist[w] == kUnreachable) {
        dm.dist[w] = dm.dist[u] + 1;
        q.push_back(w);
      }
    }
  }
  return dm;
}

namespace {

// BFS over a prebuilt adjacency, early exit once all targets are reached.
std::vector<std::int64_t> bfs_adj(const std::vector<std::vector<Vertex>>& adj,
                                  Vertex src) {
  std::vector<std::int64_t> dist(adj.size(), kUnreachable);
  std::deque<Vertex> q;
  dist[src] = 0;
  q.push_back(src);
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (Vertex w : adj[u]) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        q.push_back(w);
      }
    }
  }
  return dist;
}

}  // namespace

StretchReport spanner_stretch(const UnweightedGraph& g,
                              const UnweightedGraph& h) {
  if (g.n() != h.n())
    throw std::invalid_argument("spanner_stretch: vertex count mismatch");
  if (!h.is_subgraph_of(g))
    throw std::invalid_argument("spanner_stretch: h is not a subgraph of g");

  // Group g's edges by smaller endpoint so each BFS in h is reused.
  std::vector<std::vector<Vertex>> targets(g.n());
  for (const Edge& e : g.edges()) targets[e.u].push_back(e.v);

  auto hadj = h.adjacency();
  StretchReport rep;
  rep.max_stretch = g.m() == 0 ? 1 : 0;
  for (Vertex u = 0; u < g.n(); ++u) {
    if (targets[u].empty()) continue;
    auto dist = bfs_adj(hadj, u);
    for (Vertex v : targets[u]) {
      if (dist[v] == kUnreachable) {
        rep.max_stretch = kUnreachable;
        rep.witness_edge = Edge(u, v);
        return rep;
      }
      if (dist[v] > rep.max_stretch) {
        rep.max_stretch = dist[v];
        rep.witness_edge = Edge(u, v);
      }
    }
  }
  if (rep.max_stretch == 0) rep.max_stretch = 1;
  return rep;
}

double cut_weight(const WeightedGraph& g, const std::vector<Vertex>& side) {
  std::vector<char> in(g.n(), 0);
  for (Vertex v : side) {
    if (v >= g.n()) throw std::invalid_argument("cut side vertex out of range");
    in[v] = 1;
  }
  double total = 0.0;
  for (const auto& [e, w] : g.edges())
    if (in[e.u] != in[e.v]) total += w;
  return total;
}

std::vector<Vertex> components(const UnweightedGraph& g) {
  std::vector<Vertex> comp(g.n(), std::numeric_limits<Vertex>::max());
  auto adj = g.adjacency();
  Vertex next = 0;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (comp[s] != std::numeric_limits<Vertex>::max()) continue;
    comp[s] = next;
    std::deque<Vertex> q{s};
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop_front();
      for (Vertex w : adj[u]) {
        if (comp[w] == std::numeric_limits<Vertex>::max()) {
          comp[w] = next;
          q.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

LayerCutReport layer_cut_check(const UnweightedGraph& g,
                               const WeightedGraph& h, Vertex src, double eps) {
  if (g.n() != h.n())
    throw std::invalid_argument("layer_cut_check: vertex count mismatch");
  UnweightedGraph hu = h.unweight();
  if (!hu.is_subgraph_of(g))
    throw std::invalid_argument("layer_cut_check: h is not a subgraph of g");

  DistanceMap dm = bfs_distances(hu, src);
  std::int64_t s = 0;
  for (auto d : dm.dist) s = std::max(s, d);
  LayerCutReport rep;
  rep.layers = static_cast<std::size_t>(s) + 1;
  if (s == 0) return rep;

  // W_i = weight between layer i and layer i+1; sentinel 0 outside range.
  std::vector<double> wg(rep.layers, 0.0), wh(rep.layers, 0.0);
  auto layer = [&](Vertex v) { return dm.dist[v]; };
  for (const Edge& e : g.edges()) {
    auto a = layer(e.u), b = layer(e.v);
    if (a == kUnreachable || b == kUnreachable) continue;
    if (std::abs(a - b) == 1) wg[std::min(a, b)] += 1.0;
  }
  for (const auto& [e, w] : h.edges()) {
    auto a = layer(e.u), b = layer(e.v);
    if (a == kUnreachable || b == kUnreachable) continue;
    if (std::abs(a - b) == 1) wh[std::min(a, b)] += w;
  }
  for (std::size_t i = 0; i + 1 < rep.layers; ++i) {
    double prev = i > 0 ? wh[i - 1] : 0.0;
    double next = i + 2 < rep.layers ? wh[i + 1] : 0.0;
    double margin = eps * (prev + wh[i] + next);
    if (wg[i] < wh[i] - margin - 1e-9 || wg[i] > wh[i] + margin + 1e-9)
      rep.violations.push_back(i);
  }
  return rep;
}

}  // namespace spanstream
