#include "spanstream/resistance.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

namespace spanstream {

struct ResistanceOracle::Impl {
  std::vector<Vertex> comp;        // component id per vertex
  std::vector<Vertex> local;       // index within component
  std::vector<std::size_t> csize;  // component sizes

  // Dense mode: per component, inverse of the grounded Laplacian (last local
  // vertex grounded; its row/col treated as zero).
  bool dense = false;
  std::vector<Eigen::MatrixXd> inv;

  // CG mode: per component, sparse Laplacian + solver state.
  std::vector<Eigen::SparseMatrix<double>> lap;
};

ResistanceOracle::ResistanceOracle(const WeightedGraph& g)
    : impl_(std::make_unique<Impl>()) {
  UnweightedGraph skel = g.unweight();
  impl_->comp = components(skel);
  std::size_t ncomp = 0;
  for (Vertex c : impl_->comp) ncomp = std::max<std::size_t>(ncomp, c + 1);
  if (g.n() == 0) ncomp = 0;
  impl_->csize.assign(ncomp, 0);
  impl_->local.assign(g.n(), 0);
  for (Vertex v = 0; v < g.n(); ++v)
    impl_->local[v] = static_cast<Vertex>(impl_->csize[impl_->comp[v]]++);

  std::size_t maxc = 0;
  for (auto s : impl_->csize) maxc = std::max(maxc, s);
  impl_->dense = maxc <= kDenseLimit;

  if (impl_->dense) {
    std::vector<Eigen::MatrixXd> L(ncomp);
    for (std::size_t c = 0; c < ncomp; ++c)
      L[c] = Eigen::MatrixXd::Zero(impl_->csize[c], impl_->csize[c]);
    for (const auto& [e, w] : g.edges()) {
      Vertex c = impl_->comp[e.u];
      Vertex a = impl_->local[e.u], b = impl_->local[e.v];
      L[c](a, a) += w;
      L[c](b, b) += w;
      L[c](a, b) -= w;
      L[c](b, a) -= w;
    }
    impl_->inv.resize(ncomp);
    for (std::size_t c = 0; c < ncomp; ++c) {
      std::size_t s = impl_->csize[c];
      if (s <= 1) {
        impl_->inv[c] = Eigen::MatrixXd::Zero(1, 1);
        continue;
      }
      Eigen::MatrixXd reduced = L[c].topLeftCorner(s - 1, s - 1);
      Eigen::MatrixXd rinv = reduced.ldlt().solve(
          Eigen::MatrixXd::Identity(s - 1, s - 1));
      impl_->inv[c] = Eigen::MatrixXd::Zero(s, s);
      impl_->inv[c].topLeftCorner(s - 1, s - 1) = rinv;
    }
  } else {
    std::vector<std::vector<Eigen::Triplet<double>>> trip(ncomp);
    for (const auto& [e, w] : g.edges()) {
      Vertex c = impl_->comp[e.u];
      int a = static_cast<int>(impl_->local[e.u]);
      int b = static_cast<int>(impl_->local[e.v]);
      trip[c].emplace_back(a, a, w);
      trip[c].emplace_back(b, b, w);
      trip[c].emplace_back(a, b, -w);
      trip[c].emplace_back(b, a, -w);
    }
    impl_->lap.resize(ncomp);
    for (std::size_t c = 0; c < ncomp; ++c) {
      impl_->lap[c].resize(static_cast<int>(impl_->csize[c]),
                           static_cast<int>(impl_->csize[c]));
      impl_->lap[c].setFromTriplets(trip[c].begin(), trip[c].end());
    }
  }
}

ResistanceOracle::~ResistanceOracle() = default;
ResistanceOracle::ResistanceOracle(ResistanceOracle&&) noexcept = default;
ResistanceOracle& ResistanceOracle::operator=(ResistanceOracle&&) noexcept =
    default;

double ResistanceOracle::resistance(Vertex u, Vertex v) const {
  if (u == v) return 0.0;
  if (impl_->comp[u] != impl_->comp[v]) return kInfiniteResistance;
  Vertex c = impl_->comp[u];
  Vertex a = impl_->local[u], b = impl_->local[v];
  if (impl_->dense) {
    const Eigen::MatrixXd& M = impl_->inv[c];
    return M(a, a) + M(b, b) - 2.0 * M(a, b);
  }
  const auto& L = impl_->lap[c];
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(L.rows());
  rhs(a) = 1.0;
  rhs(b) = -1.0;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                           Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(1e-10);
  cg.setMaxIterations(20000);
  cg.compute(L);
  Eigen::VectorXd x = cg.solve(rhs);
  x.array() -= x.mean();  // project out the nullspace
  return x(a) - x(b);
}

double effective_resistance(const WeightedGraph& g, Vertex u, Vertex v) {
  if (u >= g.n() || v >= g.n())
    throw std::invalid_argument("effective_resistance: vertex out of range");
  return ResistanceOracle(g).resistance(u, v);
}

double sum_weighted_resistances(const WeightedGraph& g) {
  ResistanceOracle oracle(g);
  double total = 0.0;
  for (const auto& [e, w] : g.edges())
    total += w * oracle.resistance(e.u, e.v);
  return total;
}

}  // namespace spanstream
