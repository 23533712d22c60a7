#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace spanstream {

using Vertex = std::uint32_t;

// Canonical unordered pair, u < v always.
struct Edge {
  Vertex u;
  Vertex v;
  Edge() : u(0), v(0) {}
  Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {
    if (a == b) throw std::invalid_argument("self-loop");
  }
  bool operator==(const Edge& o) const { return u == o.u && v == o.v; }
  bool operator<(const Edge& o) const {
    return u < o.u || (u == o.u && v < o.v);
  }
  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }
};

inline constexpr std::int64_t kUnreachable = -1;

class UnweightedGraph {
 public:
  UnweightedGraph() : n_(0) {}
  explicit UnweightedGraph(std::size_t n) : n_(n) {}

  std::size_t n() const { return n_; }
  std::size_t m() const { return edges_.size(); }

  void check_vertex(Vertex v) const {
    if (v >= n_) throw std::invalid_argument("vertex out of range");
  }

  // Returns false if the edge was already present.
  bool add_edge(Vertex a, Vertex b) {
    Edge e(a, b);
    check_vertex(e.v);
    if (!keys_.insert(e.key()).second) return false;
    edges_.push_back(e);
    return true;
  }

  // Returns false if the edge was absent.
  bool remove_edge(Vertex a, Vertex b) {
    Edge e(a, b);
    check_vertex(e.v);
    if (keys_.erase(e.key()) == 0) return false;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (edges_[i] == e) {
        edges_[i] = edges_.back();
        edges_.pop_back();
        break;
      }
    }
    return true;
  }

  bool has_edge(Vertex a, Vertex b) const {
    if (a == b) return false;
    return keys_.count(Edge(a, b).key()) != 0;
  }

  const std::vector<Edge>& edges() const { return edges_; }

  std::vector<std::vector<Vertex>> adjacency() const {
    std::vector<std::vector<Vertex>> adj(n_);
    for (const Edge& e : edges_) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    return adj;
  }

  bool is_subgraph_of(const UnweightedGraph& g) const {
    if (n_ != g.n_) return false;
    for (const Edge& e : edges_)
      if (!g.has_edge(e.u, e.v)) return false;
    return true;
  }

  bool operator==(const UnweightedGraph& o) const {
    if (n_ != o.n_ || edges_.size() != o.edges_.size()) return false;
    for (const Edge& e : edges_)
      if (!o.has_edge(e.u, e.v)) return false;
    return true;
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::unordered_set<std::uint64_t> keys_;
};

class WeightedGraph {
 public:
  WeightedGraph() : n_(0) {}
  explicit WeightedGraph(std::size_t n) : n_(n) {}

  std::size_t n() const { return n_; }
  std::size_t m() const { return w_.size(); }

  void set_weight(Vertex a, Vertex b, double w) {
    Edge e(a, b);
    if (e.v >= n_) throw std::invalid_argument("vertex out of range");
    if (w <= 0.0) throw std::invalid_argument("weights must be positive");
    w_[e.key()] = w;
  }

  void add_weight(Vertex a, Vertex b, double w) {
    Edge e(a, b);
    if (e.v >= n_) throw std::invalid_argument("vertex out of range");
    w_[e.key()] += w;
  }

  bool has_edge(Vertex a, Vertex b) const {
    if (a == b) return false;
    return w_.count(Edge(a, b).key()) != 0;
  }

  double weight(Vertex a, Vertex b) const {
    auto it = w_.find(Edge(a, b).key());
    return it == w_.end() ? 0.0 : it->second;
  }

  // (edge, weight) pairs in unspecified order.
  std::vector<std::pair<Edge, double>> edges() const {
    std::vector<std::pair<Edge, double>> out;
    out.reserve(w_.size());
    for (const auto& [k, w] : w_)
      out.emplace_back(Edge(static_cast<Vertex>(k >> 32),
                            static_cast<Vertex>(k & 0xffffffffu)),
                       w);
    return out;
  }

  UnweightedGraph unweight() const {
    UnweightedGraph g(n_);
    for (const auto& [e, w] : edges()) g.add_edge(e.u, e.v);
    return g;
  }

  static WeightedGraph from_unweighted(const UnweightedGraph& g) {
    WeightedGraph h(g.n());
    for (const Edge& e : g.edges()) h.set_weight(e.u, e.v, 1.0);
    return h;
  }

 private:
  std::size_t n_;
  std::unordered_map<std::uint64_t, double> w_;
};

struct DistanceMap {
  Vertex source = 0;
  std::vector<std::int64_t> dist;  // hop counts, kUnreachable if disconnected
};

struct StretchReport {
  std::int64_t max_stretch = 0;  // kUnreachable if some edge is disconnected in h
  Edge witness_edge;
};

DistanceMap bfs_distances(const UnweightedGraph& g, Vertex src);

// Max over edges (u,v) of g of d_h(u,v). By the triangle inequality this
// equals the all-pairs maximum stretch. Throws if h is not a subgraph of g.
StretchReport spanner_stretch(const UnweightedGraph& g,
                              const UnweightedGraph& h);

double cut_weight(const WeightedGraph& g, const std::vector<Vertex>& side);

// Connected components labelling, 0-based component ids.
std::vector<Vertex> components(const UnweightedGraph& g);

struct LayerCutReport {
  std::vector<std::size_t> violations;  // layer indices failing the bound
  std::size_t layers = 0;
  bool ok() const { return violations.empty(); }
};

// BFS-layer cut diagnostic: layers A_0..A_s of unweight(h) from src; checks
// W_i^G within W_i^H +- eps*(W_{i-1}^H + W_i^H + W_{i+1}^H) for every i.
LayerCutReport layer_cut_check(const UnweightedGraph& g,
                               const WeightedGraph& h, Vertex src, double eps);

}  // namespace spanstream
