#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "spanstream/graph.hpp"

namespace spanstream {

inline constexpr double kInfiniteResistance =
    std::numeric_limits<double>::infinity();

// Exact pairwise effective resistance via a Laplacian pseudoinverse solve,
// per connected component. Dense factorization below kDenseLimit vertices,
// Jacobi-preconditioned CG above.
class ResistanceOracle {
 public:
  static constexpr std::size_t kDenseLimit = 2000;

  explicit ResistanceOracle(const WeightedGraph& g);
  ~ResistanceOracle();
  ResistanceOracle(ResistanceOracle&&) noexcept;
  ResistanceOracle& operator=(ResistanceOracle&&) noexcept;

  // kInfiniteResistance when u, v are in different components.
  double resistance(Vertex u, Vertex v) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double effective_resistance(const WeightedGraph& g, Vertex u, Vertex v);

// Sum of w_e * R_e over edges; equals n - #components exactly.
double sum_weighted_resistances(const WeightedGraph& g);

}  // namespace spanstream
