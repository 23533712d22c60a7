#include "spanstream/spanner_one_pass.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "spanstream/sketch.hpp"

namespace spanstream {

namespace {

using Clock = std::chrono::steady_clock;

double log2n(std::size_t n) { return std::log2(std::max<std::size_t>(n, 2)); }

std::size_t charged_sparsifier_words(std::size_t n,
                                     const SparsifierParams& p) {
  return static_cast<std::size_t>(
      std::ceil(p.oversample / (p.eps * p.eps) * n * log2n(n)));
}

// Stretch oracle + shared report fields.
void finish_report(RunReport& r, const UnweightedGraph& g,
                   const UnweightedGraph& spanner, const Meters& meters,
                   std::int64_t declared_bound, Clock::time_point t0) {
  StretchReport sr = spanner_stretch(g, spanner);
  r.n = g.n();
  r.m = g.m();
  r.passes = meters.pass.passes;
  r.spanner_edges = spanner.m();
  r.max_stretch = sr.max_stretch;
  r.witness_edge = sr.witness_edge;
  r.declared_bound = declared_bound;
  r.peak_words = meters.space.peak_words;
  r.verified = sr.max_stretch != kUnreachable &&
               (declared_bound < 0 || sr.max_stretch <= declared_bound);
  r.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::int64_t regression_stretch(const std::string& key, double scale) {
  auto c = RegressionStore::bound(key);
  if (!c) return -1;
  return static_cast<std::int64_t>(std::ceil(*c * scale));
}

}  // namespace

SpannerResult sparsifier_spanner(const StreamSource& src,
                                 const SparsifierParams& params) {
  auto t0 = Clock::now();
  Meters meters;
  UnweightedGraph g(src.n());
  open_pass(src, meters, [&](const UpdateEvent& ev) {
    if (ev.op == StreamOp::kInsert)
      g.add_edge(ev.edge.u, ev.edge.v);
    else
      g.remove_edge(ev.edge.u, ev.edge.v);
  });
  meters.space.checkpoint(charged_sparsifier_words(src.n(), params));

  SpannerResult res;
  res.spanner = unweight(spectral_sparsify(g, params));
  res.report.algo = "sparsifier";
  res.report.params = {{"eps", params.eps},
                       {"oversample", params.oversample},
                       {"seed", static_cast<double>(params.seed)}};
  res.report.space_accounting = "charged";
  double l = log2n(g.n());
  finish_report(res.report, g, res.spanner, meters,
                regression_stretch("gnp/sparsifier/stretch_c",
                                   std::pow(g.n(), 2.0 / 3.0) * l * l),
                t0);
  return res;
}

SubsetCover build_subset_cover(std::size_t n, double alpha,
                               std::uint64_t seed) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("build_subset_cover: alpha must be in (0,1)");
  if (n == 0) throw std::invalid_argument("build_subset_cover: empty range");
  SubsetCover cover;
  cover.alpha = alpha;
  cover.seed = seed;

  std::size_t size = static_cast<std::size_t>(
      std::ceil(2.0 * std::pow(static_cast<double>(n), 1.0 - alpha)));
  if (size >= n) {
    // Degenerate cover: one subset is the whole vertex set.
    std::vector<Vertex> all(n);
    for (std::size_t v = 0; v < n; ++v) all[v] = static_cast<Vertex>(v);
    cover.parts.push_back(std::move(all));
    return cover;
  }
  std::size_t count = static_cast<std::size_t>(std::ceil(
      8.0 * std::pow(static_cast<double>(n), 2.0 * alpha) * std::log(n)));

  std::mt19937_64 rng(seed);
  std::vector<Vertex> pool(n);
  for (std::size_t v = 0; v < n; ++v) pool[v] = static_cast<Vertex>(v);
  for (int attempt = 0; attempt < 8; ++attempt) {
    cover.parts.clear();
    for (std::size_t i = 0; i < count; ++i) {
      // Partial Fisher-Yates: first `size` entries are a uniform subset.
      for (std::size_t j = 0; j < size; ++j) {
        std::uniform_int_distribution<std::size_t> pick(j, n - 1);
        std::swap(pool[j], pool[pick(rng)]);
      }
      std::vector<Vertex> part(pool.begin(), pool.begin() + size);
      std::sort(part.begin(), part.end());
      cover.parts.push_back(std::move(part));
    }
    // Pair coverage: exhaustive up to n=500, sampled above.
    std::vector<std::vector<std::uint32_t>> member(n);
    for (std::uint32_t i = 0; i < cover.parts.size(); ++i)
      for (Vertex v : cover.parts[i]) member[v].push_back(i);
    auto covered = [&](Vertex a, Vertex b) {
      const auto& ma = member[a];
      const auto& mb = member[b];
      std::size_t x = 0, y = 0;
      while (x < ma.size() && y < mb.size()) {
        if (ma[x] == mb[y]) return true;
        if (ma[x] < mb[y]) ++x; else ++y;
      }
      return false;
    };
    bool ok = true;
    if (n <= 500) {
      for (Vertex a = 0; a < n && ok; ++a)
        for (Vertex b = a + 1; b < n && ok; ++b) ok = covered(a, b);
    } else {
      std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
      for (int t = 0; t < 100000 && ok; ++t) {
        Vertex a = pick(rng), b = pick(rng);
        if (a != b) ok = covered(a, b);
      }
    }
    if (ok) return cover;
  }
  throw std::runtime_error("build_subset_cover: coverage retries exhausted");
}

SpannerResult tradeoff_spanner(const StreamSource& src, double alpha,
                               const SparsifierParams& params) {
  auto t0 = Clock::now();
  std::size_t n = src.n();
  SubsetCover cover = build_subset_cover(n, alpha, params.seed ^ 0x5c0f);

  std::vector<std::vector<std::uint32_t>> member(n);
  for (std::uint32_t i = 0; i < cover.parts.size(); ++i)
    for (Vertex v : cover.parts[i]) member[v].push_back(i);

  Meters meters;
  UnweightedGraph g(n);
  std::vector<UnweightedGraph> induced(cover.parts.size(), UnweightedGraph(n));
  open_pass(src, meters, [&](const UpdateEvent& ev) {
    Vertex u = ev.edge.u, v = ev.edge.v;
    bool ins = ev.op == StreamOp::kInsert;
    if (ins) g.add_edge(u, v); else g.remove_edge(u, v);
    const auto& mu = member[u];
    const auto& mv = member[v];
    std::size_t x = 0, y = 0;
    while (x < mu.size() && y < mv.size()) {
      if (mu[x] == mv[y]) {
        if (ins) induced[mu[x]].add_edge(u, v);
        else induced[mu[x]].remove_edge(u, v);
        ++x; ++y;
      } else if (mu[x] < mv[y]) ++x; else ++y;
    }
  });
  std::size_t charged = 0;
  for (const auto& part : cover.parts)
    charged += charged_sparsifier_words(part.size(), params);
  meters.space.checkpoint(charged);

  SpannerResult res;
  res.spanner = UnweightedGraph(n);
  for (std::size_t i = 0; i < induced.size(); ++i) {
    SparsifierParams sub = params;
    sub.seed = params.seed ^ (0x9e3779b97f4a7c15ull * (i + 1));
    UnweightedGraph kept = unweight(spectral_sparsify(induced[i], sub));
    for (const Edge& e : kept.edges())
      res.spanner.add_edge(e.u, e.v);
  }
  res.report.algo = "tradeoff";
  res.report.params = {{"alpha", alpha},
                       {"eps", params.eps},
                       {"oversample", params.oversample},
                       {"seed", static_cast<double>(params.seed)}};
  res.report.space_accounting = "charged";
  double l = log2n(n);
  double sub_n = std::pow(static_cast<double>(n), 1.0 - alpha);
  finish_report(res.report, g, res.spanner, meters,
                regression_stretch("gnp/tradeoff/stretch_c",
                                   std::pow(sub_n, 2.0 / 3.0) * l * l),
                t0);
  return res;
}

SpannerResult sparse_tradeoff_spanner(const StreamSource& src, double alpha,
                                      const SparsifierParams& params) {
  auto t0 = Clock::now();
  std::size_t n = src.n();
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("sparse_tradeoff_spanner: alpha in (0,1)");
  double p = std::pow(static_cast<double>(n), -alpha);
  std::size_t subsets = static_cast<std::size_t>(
      std::ceil(8.0 / (p * p) * std::log(std::max<std::size_t>(n, 2))));
  std::uint64_t recover_budget = static_cast<std::uint64_t>(
      std::ceil(std::pow(static_cast<double>(n), 1.0 + alpha) * log2n(n)));

  std::mt19937_64 rng(params.seed ^ 0x7a3d);
  std::bernoulli_distribution keep(p);
  std::vector<std::vector<std::uint32_t>> member(n);
  for (std::uint32_t i = 0; i < subsets; ++i)
    for (std::size_t v = 0; v < n; ++v)
      if (keep(rng)) member[v].push_back(i);

  Meters meters;
  UnweightedGraph g(n);
  std::vector<UnweightedGraph> induced(subsets, UnweightedGraph(n));
  SparseRecoverySketch whole(static_cast<std::uint64_t>(n) * n, recover_budget,
                             SketchSeed::derive(params.seed, 0xedc0));
  open_pass(src, meters, [&](const UpdateEvent& ev) {
    Vertex u = ev.edge.u, v = ev.edge.v;
    bool ins = ev.op == StreamOp::kInsert;
    if (ins) g.add_edge(u, v); else g.remove_edge(u, v);
    whole.update(pair_index(u, v, n), ins ? 1 : -1);
    const auto& mu = member[u];
    const auto& mv = member[v];
    std::size_t x = 0, y = 0;
    while (x < mu.size() && y < mv.size()) {
      if (mu[x] == mv[y]) {
        if (ins) induced[mu[x]].add_edge(u, v);
        else induced[mu[x]].remove_edge(u, v);
        ++x; ++y;
      } else if (mu[x] < mv[y]) ++x; else ++y;
    }
  });
  // Recovery sketch words are exact; each subset sparsifier is charged its
  // cited budget on the expected subset size.
  std::size_t charged = whole.word_count();
  charged += subsets * charged_sparsifier_words(
                           std::max<std::size_t>(
                               1, static_cast<std::size_t>(n * p)),
                           params);
  meters.space.checkpoint(charged);

  SpannerResult res;
  res.spanner = UnweightedGraph(n);
  SparseDecodeResult whole_decode = whole.decode();
  bool recovered_all = whole_decode.status == DecodeStatus::kOk ||
                       whole_decode.status == DecodeStatus::kEmpty;
  if (recovered_all)
    for (const SparseEntry& e : whole_decode.entries) {
      auto [u, v] = pair_from_index(e.index, n);
      res.spanner.add_edge(u, v);
    }
  for (std::size_t i = 0; i < induced.size(); ++i) {
    if (induced[i].m() == 0) continue;
    SparsifierParams sub = params;
    sub.seed = params.seed ^ (0xc2b2ae3d27d4eb4full * (i + 1));
    UnweightedGraph kept = unweight(spectral_sparsify(induced[i], sub));
    for (const Edge& e : kept.edges())
      res.spanner.add_edge(e.u, e.v);
  }
  res.report.algo = "sparse-tradeoff";
  res.report.params = {{"alpha", alpha},
                       {"eps", params.eps},
                       {"oversample", params.oversample},
                       {"seed", static_cast<double>(params.seed)}};
  res.report.space_accounting = "charged";
  double l = log2n(n);
  std::int64_t bound =
      recovered_all
          ? 1
          : regression_stretch("gnp/sparse-tradeoff/stretch_c",
                               std::sqrt(static_cast<double>(g.m())) * p * l * l);
  finish_report(res.report, g, res.spanner, meters, bound, t0);
  return res;
}

}  // namespace spanstream
