#pragma once

#include <cstdint>
#include <vector>

#include "spanstream/graph.hpp"
#include "spanstream/stream.hpp"

namespace spanstream {

// Two terminals u,v joined by a direct edge and by a chain of N fully
// bipartite layers of width a: 2 + a*N vertices, 2a + (N-1)a^2 + 1 edges.
struct LayeredInstance {
  std::size_t a = 0;
  std::size_t N = 0;
  Vertex u = 0;
  Vertex v = 1;
  UnweightedGraph graph;
  std::vector<std::vector<Vertex>> layers;
};

// Asymptotic parameters a = ceil(c*n^(1/3)), N = ceil(n^(2/3)/c), c = log2 n.
LayeredInstance layered_instance(std::size_t n);
// Direct (a, N) constructor for small tests.
LayeredInstance layered_custom(std::size_t a, std::size_t N);
// Wide-N variant: a = ceil(log2 n), N = ceil(n/a).
LayeredInstance cut_bad_instance(std::size_t n);

// Explicit cut-preserving sparsifier of the layered instance that excludes
// the terminal edge: the a edges at each terminal are scaled by (a+1)/a.
// Checked on `cuts` random cuts; spanner_distance is the resulting hop
// distance between the terminals.
struct CutBadDemo {
  LayeredInstance inst;
  WeightedGraph h;
  std::size_t cuts_checked = 0;
  std::size_t cut_violations = 0;  // cuts outside (1 +- eps)
  std::int64_t spanner_distance = 0;
};
CutBadDemo cut_bad_demo(std::size_t n, double eps, std::size_t cuts,
                        std::uint64_t seed);

// Random circulant-like distribution: pairs within circular distance d of a
// random permutation kept with probability 1/2, then one two-edge swap
// planted. The planted pair records the swapped-in edges.
struct HardInstance {
  UnweightedGraph graph;
  std::vector<Vertex> perm;
  Edge removed1, removed2;
  Edge planted1, planted2;
};
HardInstance conjectured_hard(std::size_t n, std::size_t d,
                              std::uint64_t seed);

UnweightedGraph gnp(std::size_t n, double p, std::uint64_t seed);

// Insert stream for g with floor(ratio*m + 1/2) decoy insert+delete pairs
// mixed in; always materializes back to g.
StreamSource to_stream(const UnweightedGraph& g, double deletion_ratio,
                       std::uint64_t seed);

}  // namespace spanstream
