#pragma once

#include <cstdint>

#include "spanstream/graph.hpp"

namespace spanstream {

struct SparsifierParams {
  double eps = 1.0 / 18.0;  // must lie in (0, 1/18]
  double oversample = 4.0;  // constant C in p_e = min{C * eps^-2 * R_e * log2 n, 1}
  std::uint64_t seed = 0;
};

// Effective-resistance sampling: each edge kept independently with
// p_e = min{C * eps^-2 * R_e * log2(n), 1} and weight 1/p_e. All kept
// weights are >= 1.
WeightedGraph spectral_sparsify(const UnweightedGraph& g,
                                const SparsifierParams& params);

struct SpectralVerdict {
  bool pass = false;
  double worst_ratio = 1.0;  // x'L_h x / x'L_g x farthest from 1
  double margin = 0.0;       // pinned at 1.2 * eps
};

// Quadratic-form sampling check of (1-m)L_g <= L_h <= (1+m)L_g with
// m = 1.2*eps: `trials` random unit vectors plus every b_uv for an edge of g.
SpectralVerdict verify_spectral(const WeightedGraph& g, const WeightedGraph& h,
                                double eps, int trials = 100,
                                std::uint64_t seed = 1);

// Exact generalized-eigenvalue bounds of the pencil (L_h, L_g) on the
// complement of the all-ones kernel. Connected g only; intended for n <= 300.
struct SpectralBounds {
  double lo = 0.0;
  double hi = 0.0;
};
SpectralBounds verify_spectral_exact(const WeightedGraph& g,
                                     const WeightedGraph& h);

UnweightedGraph unweight(const WeightedGraph& h);

}  // namespace spanstream
