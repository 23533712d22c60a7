#pragma once

#include <cstdint>
#include <vector>

#include "spanstream/graph.hpp"
#include "spanstream/report.hpp"
#include "spanstream/sparsify.hpp"
#include "spanstream/stream.hpp"

namespace spanstream {

struct SpannerResult {
  UnweightedGraph spanner;
  RunReport report;
};

// Unweighted spectral sparsifier as a one-pass spanner. The sparsifier
// subroutine is charged its cited one-pass budget of
// ceil(C * eps^-2 * n * log2 n) retained words.
SpannerResult sparsifier_spanner(const StreamSource& src,
                                 const SparsifierParams& params = {});

// Random subset family covering all vertex pairs: count <= ceil(8*n^(2a)*ln n)
// subsets of size <= ceil(2*n^(1-a)); construction retried (up to 8 times)
// until every pair is covered.
struct SubsetCover {
  std::vector<std::vector<Vertex>> parts;
  double alpha = 0.0;
  std::uint64_t seed = 0;
};
SubsetCover build_subset_cover(std::size_t n, double alpha,
                               std::uint64_t seed);

// One pass, one sparsifier spanner per cover subset (all fed concurrently),
// union of the unweightings.
SpannerResult tradeoff_spanner(const StreamSource& src, double alpha,
                               const SparsifierParams& params = {});

// Two concurrent branches in one pass: (a) sparse recovery of up to
// ceil(n^(1+a) * log2 n) edges added outright, (b) ceil(8*p^-2*ln n) random
// vertex subsets with inclusion probability p = n^-a, a sparsifier per
// induced subgraph. Union of everything that decodes.
SpannerResult sparse_tradeoff_spanner(const StreamSource& src, double alpha,
                                      const SparsifierParams& params = {});

}  // namespace spanstream
