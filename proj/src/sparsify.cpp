#include "spanstream/sparsify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "spanstream/resistance.hpp"

namespace spanstream {

WeightedGraph spectral_sparsify(const UnweightedGraph& g,
                                const SparsifierParams& params) {
  if (params.eps <= 0.0 || params.eps > 1.0 / 18.0 + 1e-12)
    throw std::invalid_argument("spectral_sparsify: eps must be in (0, 1/18]");
  WeightedGraph h(g.n());
  if (g.m() == 0) return h;
  ResistanceOracle oracle(WeightedGraph::from_unweighted(g));
  double factor = params.oversample / (params.eps * params.eps) *
                  std::log2(std::max<std::size_t>(g.n(), 2));
  std::vector<Edge> es = g.edges();
  std::sort(es.begin(), es.end());
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const Edge& e : es) {
    double p = std::min(factor * oracle.resistance(e.u, e.v), 1.0);
    if (unif(rng) < p) h.set_weight(e.u, e.v, 1.0 / p);
  }
  return h;
}

namespace {

// x' L x = sum over edges w * (x_u - x_v)^2.
double quad_form(const std::vector<std::pair<Edge, double>>& edges,
                 const Eigen::VectorXd& x) {
  double q = 0.0;
  for (const auto& [e, w] : edges) {
    double d = x(e.u) - x(e.v);
    q += w * d * d;
  }
  return q;
}

}  // namespace

SpectralVerdict verify_spectral(const WeightedGraph& g, const WeightedGraph& h,
                                double eps, int trials, std::uint64_t seed) {
  if (g.n() != h.n())
    throw std::invalid_argument("verify_spectral: vertex count mismatch");
  SpectralVerdict out;
  out.margin = 1.2 * eps;
  out.pass = true;
  auto ge = g.edges();
  auto he = h.edges();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto check = [&](const Eigen::VectorXd& x) {
    double qg = quad_form(ge, x);
    double qh = quad_form(he, x);
    if (qg < 1e-12) return;  // x in (or near) the kernel of L_g
    double ratio = qh / qg;
    if (std::abs(ratio - 1.0) > std::abs(out.worst_ratio - 1.0))
      out.worst_ratio = ratio;
    if (ratio < 1.0 - out.margin || ratio > 1.0 + out.margin) out.pass = false;
  };
  Eigen::VectorXd x(g.n());
  for (int t = 0; t < trials; ++t) {
    for (std::size_t v = 0; v < g.n(); ++v) x(v) = gauss(rng);
    x.array() -= x.mean();
    if (x.norm() > 0) x /= x.norm();
    check(x);
  }
  for (const auto& [e, w] : ge) {
    x.setZero();
    x(e.u) = 1.0;
    x(e.v) = -1.0;
    check(x);
  }
  return out;
}

SpectralBounds verify_spectral_exact(const WeightedGraph& g,
                                     const WeightedGraph& h) {
  std::size_t n = g.n();
  if (n != h.n() || n == 0)
    throw std::invalid_argument("verify_spectral_exact: bad inputs");
  auto lap = [n](const WeightedGraph& w) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [e, wt] : w.edges()) {
      L(e.u, e.u) += wt;
      L(e.v, e.v) += wt;
      L(e.u, e.v) -= wt;
      L(e.v, e.u) -= wt;
    }
    return L;
  };
  // Complete the all-ones kernel in both pencils so L_g becomes PD; the added
  // rank-one piece contributes ratio exactly 1 in that direction.
  Eigen::MatrixXd J = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  Eigen::MatrixXd Lg = lap(g) + J;
  Eigen::MatrixXd Lh = lap(h) + J;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Lh, Lg);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("verify_spectral_exact: eigensolver failed");
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

UnweightedGraph unweight(const WeightedGraph& h) { return h.unweight(); }

}  // namespace spanstream
