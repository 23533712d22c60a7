#pragma once

#include <cstdint>
#include <vector>

#include "spanstream/graph.hpp"
#include "spanstream/spanner_one_pass.hpp"
#include "spanstream/stream.hpp"

namespace spanstream {

enum class Scheme { kKW, kBS };

// Clusters over the base vertex set with designated centers. `sampled_count`
// is the number of sampled level-i centers (the Binomial(|V|, p^i)
// statistic); empty clusters are dropped from `clusters` but still counted
// there.
struct PartialPartition {
  int level = 0;
  std::vector<std::vector<Vertex>> clusters;
  std::vector<Vertex> centers;  // parallel to clusters
  std::size_t sampled_count = 0;
};

struct ClusteringResult {
  PartialPartition partition;
  UnweightedGraph h;
  Meters meters;
  int retries = 0;
};

// i+1 passes; cluster diameter <= 2i w.r.t. h; edges with an endpoint
// outside the partition are satisfied within 2i-1.
ClusteringResult bs_clustering(const StreamSource& src, double p, int i,
                               std::uint64_t seed);

// 2 passes; the partition is known at the end of the first; cluster
// diameter <= 2^(i+1)-2; outside-edge guarantee 2^i-1.
ClusteringResult kw_clustering(const StreamSource& src, double p, int i,
                               std::uint64_t seed);

// k passes, stretch <= 2k-1, Õ(n^(1+1/k)) edges.
SpannerResult baswana_sen(const StreamSource& src, int k, std::uint64_t seed);

// 2 passes, stretch <= 2^k-1.
SpannerResult kapralov_woodruff(const StreamSource& src, int k,
                                std::uint64_t seed);

struct RecursionParams {
  double k = 1.0;
  int g = 1;
  int r = 0;               // ceil(((k+1)/2)^(1/g)) - 1
  std::vector<double> d;   // d[i] = (r+1)^i / k for i in [0, g], i.e. d_(i+1)
  static RecursionParams make(double k, int g);
};

// Closed forms: KW 2*(2^(r+1)-1)^g - 1, BS 2*(2(r+1)-1)^g - 1;
// passes g+1 (KW) or g*r+1 (BS).
std::int64_t stretch_bound(double k, int g, Scheme scheme);
std::size_t pass_bound(double k, int g, Scheme scheme);

// g contraction rounds over supergraphs with fused passes, then one edge
// sampled per final cluster pair. Throws on RANDOMNESS_EXHAUSTED (after 3
// fresh-lineage retries) or BUDGET_EXCEEDED.
SpannerResult recursive_spanner(const StreamSource& src, double k, int g,
                                Scheme scheme, std::uint64_t seed);

}  // namespace spanstream
