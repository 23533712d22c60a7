#include "spanstream/spanner_multipass.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>

#include "spanstream/sketch.hpp"

namespace spanstream {

namespace {

using Clock = std::chrono::steady_clock;
using Consumer = std::function<void(const UpdateEvent&)>;

double ln_n(std::size_t n) {
  return std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
}

std::int64_t ipow64(std::int64_t base, int exp) {
  std::int64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

// Ceiling with a guard band so that values a rounding error below an integer
// still land on it.
int ceil_guarded(double x) {
  double r = std::round(x);
  if (std::abs(x - r) < 1e-9) return static_cast<int>(r);
  return static_cast<int>(std::ceil(x));
}

// Maps base vertices onto supergraph nodes; -1 marks vertices removed from
// the contraction. Every sketch coordinate stays in the base pair space so a
// decoded coordinate is itself a representative base edge.
struct NodeView {
  std::vector<std::int32_t> node_of;
  std::size_t nodes = 0;
  static NodeView identity(std::size_t n) {
    NodeView v;
    v.node_of.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      v.node_of[i] = static_cast<std::int32_t>(i);
    v.nodes = n;
    return v;
  }
};

void finish_spanner_report(RunReport& r, const UnweightedGraph& g,
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
  r.wall_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Nested-center clustering: centers survive level by level with probability
// p; each stage, members of dying clusters sample one edge toward the
// surviving clusters, and vertices that find none get a star sketch on the
// following pass. i+1 passes.
class BSCluster {
 public:
  BSCluster(std::size_t nbase, NodeView view, double p, int i,
            std::uint64_t run_seed, bool final_stars)
      : nbase_(nbase),
        view_(std::move(view)),
        p_(p),
        i_(i),
        run_seed_(run_seed),
        final_stars_(final_stars) {
    std::mt19937_64 rng(run_seed ^ 0xb5c1u);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    nlevel_.assign(view_.nodes, 0);
    for (std::size_t v = 0; v < view_.nodes; ++v) {
      int lvl = 0;
      while (lvl < i_ && unif(rng) < p_) ++lvl;
      nlevel_[v] = lvl;
    }
    assign_.assign(i_ + 1, {});
    assign_[0].resize(view_.nodes);
    for (std::size_t v = 0; v < view_.nodes; ++v)
      assign_[0][v] = static_cast<std::int32_t>(v);
    star_of_.assign(view_.nodes, -1);
  }

  int passes() const { return i_ + 1; }
  bool failed() const { return failed_; }

  Consumer begin_pass(int t) {
    join_.clear();
    if (t <= i_) {
      for (std::uint32_t v = 0; v < view_.nodes; ++v) {
        std::int32_t c = assign_[t - 1][v];
        if (c >= 0 && nlevel_[c] < t)
          join_.emplace(
              v, L0Sketch(pair_dim(),
                          SketchSeed::derive(
                              run_seed_, 0xb50a000000000000ull ^
                                             (static_cast<std::uint64_t>(t)
                                              << 40) ^
                                             v)));
      }
    }
    stars_.clear();
    star_of_.assign(view_.nodes, -1);
    if (t >= 2 && !dropouts_.empty()) make_stars(dropouts_, t - 2, t);
    if (final_stars_ && t == i_ + 1) {
      std::vector<std::uint32_t> live;
      for (std::uint32_t v = 0; v < view_.nodes; ++v)
        if (assign_[i_][v] >= 0) live.push_back(v);
      make_stars(live, i_, t);
    }
    return [this, t](const UpdateEvent& ev) {
      std::int32_t x = view_.node_of[ev.edge.u];
      std::int32_t y = view_.node_of[ev.edge.v];
      if (x < 0 || y < 0 || x == y) return;
      std::int64_t d = ev.op == StreamOp::kInsert ? 1 : -1;
      std::uint64_t coord = pair_index(ev.edge.u, ev.edge.v, nbase_);
      if (t <= i_) {
        auto feed = [&](std::int32_t v, std::int32_t w) {
          auto it = join_.find(v);
          if (it == join_.end()) return;
          std::int32_t c = assign_[t - 1][w];
          if (c >= 0 && nlevel_[c] >= t) it->second.update(coord, d);
        };
        feed(x, y);
        feed(y, x);
      }
      auto feed_star = [&](std::int32_t v, std::int32_t w) {
        std::int32_t s = star_of_[v];
        if (s < 0 || (*stars_[s].parts)[w] < 0) return;
        stars_[s].sk.update(coord, d);
      };
      feed_star(x, y);
      feed_star(y, x);
    };
  }

  void end_pass(int t) {
    for (const Star& s : stars_) {
      SubsetRecoverResult r = s.sk.recover();
      if (r.status != DecodeStatus::kOk) {
        failed_ = true;
        continue;
      }
      for (std::uint64_t c : r.coords) push_edge(c);
    }
    stars_.clear();
    star_of_.assign(view_.nodes, -1);
    if (t > i_) return;
    std::vector<std::uint32_t> next_drop;
    assign_[t].assign(view_.nodes, -1);
    for (std::uint32_t v = 0; v < view_.nodes; ++v) {
      std::int32_t c = assign_[t - 1][v];
      if (c >= 0 && nlevel_[c] >= t) assign_[t][v] = c;
    }
    for (auto& [v, sk] : join_) {
      L0Sample s = sk.sample();
      if (s.status == DecodeStatus::kEmpty) {
        next_drop.push_back(v);
        continue;
      }
      if (s.status != DecodeStatus::kOk) {
        failed_ = true;
        continue;
      }
      auto [a, b] = pair_from_index(s.index, nbase_);
      std::int32_t other = view_.node_of[a] == static_cast<std::int32_t>(v)
                               ? view_.node_of[b]
                               : view_.node_of[a];
      assign_[t][v] = assign_[t - 1][other];
      h_edges.push_back(Edge(a, b));
    }
    join_.clear();
    dropouts_ = std::move(next_drop);
  }

  std::size_t retained_words() const {
    std::size_t w = view_.node_of.size() + nlevel_.size() + 2 * h_edges.size();
    for (const auto& a : assign_) w += a.size();
    for (const auto& [v, sk] : join_) w += sk.word_count();
    for (const Star& s : stars_) w += s.sk.word_count();
    return w;
  }

  PartialPartition partition() const {
    PartialPartition p;
    p.level = i_;
    std::vector<std::int32_t> cidx(view_.nodes, -1);
    for (std::uint32_t c = 0; c < view_.nodes; ++c)
      if (nlevel_[c] >= i_) {
        cidx[c] = static_cast<std::int32_t>(p.centers.size());
        p.centers.push_back(c);
        p.clusters.emplace_back();
      }
    p.sampled_count = p.centers.size();
    for (std::uint32_t v = 0; v < view_.nodes; ++v) {
      std::int32_t c = assign_[i_][v];
      if (c >= 0) p.clusters[cidx[c]].push_back(v);
    }
    return p;
  }

  // node -> compact level-i cluster index (-1 outside), with cluster count
  std::pair<std::vector<std::int32_t>, std::size_t> super_map() const {
    std::vector<std::int32_t> cidx(view_.nodes, -1);
    std::size_t cnt = 0;
    for (std::uint32_t c = 0; c < view_.nodes; ++c)
      if (nlevel_[c] >= i_) cidx[c] = static_cast<std::int32_t>(cnt++);
    std::vector<std::int32_t> m(view_.nodes, -1);
    for (std::uint32_t v = 0; v < view_.nodes; ++v) {
      std::int32_t c = assign_[i_][v];
      if (c >= 0) m[v] = cidx[c];
    }
    return {std::move(m), cnt};
  }

  std::vector<Edge> h_edges;

 private:
  struct Star {
    std::uint32_t node;
    std::shared_ptr<std::vector<std::int32_t>> parts;  // node -> part or -1
    SubsetSketch sk;
  };

  std::uint64_t pair_dim() const {
    return static_cast<std::uint64_t>(nbase_) * nbase_;
  }

  void push_edge(std::uint64_t coord) {
    auto [a, b] = pair_from_index(coord, nbase_);
    h_edges.push_back(Edge(a, b));
  }

  // One subset sketch per listed node, parts = level-`lvl` clusters.
  void make_stars(const std::vector<std::uint32_t>& who, int lvl, int t) {
    auto parts = std::make_shared<std::vector<std::int32_t>>(view_.nodes, -1);
    std::vector<std::int32_t> center_part(view_.nodes, -1);
    std::uint32_t np = 0;
    for (std::uint32_t c = 0; c < view_.nodes; ++c)
      if (nlevel_[c] >= lvl) center_part[c] = static_cast<std::int32_t>(np++);
    for (std::uint32_t v = 0; v < view_.nodes; ++v) {
      std::int32_t c = assign_[lvl][v];
      if (c >= 0) (*parts)[v] = center_part[c];
    }
    std::uint64_t budget = static_cast<std::uint64_t>(
        std::min<double>(np, std::ceil(8.0 * ln_n(nbase_) / p_)));
    budget = std::max<std::uint64_t>(budget, 1);
    for (std::uint32_t v : who) {
      SubsetSketch::PartFn fn = [nb = nbase_, nodeof = &view_.node_of, parts,
                                 v](std::uint64_t coord) -> std::uint32_t {
        auto [a, b] = pair_from_index(coord, nb);
        std::int32_t x = (*nodeof)[a];
        std::int32_t y = (*nodeof)[b];
        std::int32_t other = x == static_cast<std::int32_t>(v) ? y : x;
        return static_cast<std::uint32_t>((*parts)[other]);
      };
      star_of_[v] = static_cast<std::int32_t>(stars_.size());
      stars_.push_back(Star{
          v, parts,
          SubsetSketch(pair_dim(), np, std::move(fn), budget,
                       SketchSeed::derive(
                           run_seed_,
                           0xb557000000000000ull ^
                               (static_cast<std::uint64_t>(t) << 40) ^ v),
                       12)});
    }
  }

  std::size_t nbase_;
  NodeView view_;
  double p_;
  int i_;
  std::uint64_t run_seed_;
  bool final_stars_;
  bool failed_ = false;

  std::vector<int> nlevel_;  // node -> highest surviving center level
  std::vector<std::vector<std::int32_t>> assign_;  // level -> node -> center
  std::vector<std::uint32_t> dropouts_;
  std::map<std::uint32_t, L0Sketch> join_;
  std::vector<Star> stars_;
  std::vector<std::int32_t> star_of_;
};

// Independent-center clustering: level-j centers sampled with probability
// p^j; pass 1 stores per-node per-level samplers whose sums drive the whole
// clustering offline, pass 2 carries one subset sketch per terminal cluster.
class KWCluster {
 public:
  KWCluster(std::size_t nbase, NodeView view, double p, int i,
            std::uint64_t run_seed, bool final_stars)
      : nbase_(nbase),
        view_(std::move(view)),
        p_(p),
        i_(i),
        run_seed_(run_seed),
        final_stars_(final_stars) {
    std::mt19937_64 rng(run_seed ^ 0x4b57u);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // The level sets must be nested (N_1 >= N_2 >= ...): a join target at
    // level j keeps its own cluster at every earlier level, which is what
    // makes the merged cluster connected. Marginals stay p^j.
    in_n_.assign(i_, std::vector<char>(view_.nodes, 0));
    for (std::size_t v = 0; v < view_.nodes; ++v) {
      int lvl = 0;
      while (lvl < i_ && unif(rng) < p_) ++lvl;
      for (int j = 1; j <= lvl; ++j) in_n_[j - 1][v] = 1;
    }
  }

  int passes() const { return 2; }
  bool failed() const { return failed_; }

  Consumer begin_pass(int t) {
    if (t == 1) {
      sk_.clear();
      sk_.reserve(view_.nodes * i_);
      for (std::uint32_t v = 0; v < view_.nodes; ++v)
        for (int j = 1; j <= i_; ++j)
          // One lineage per level so member sketches sum into a cluster
          // sketch.
          sk_.emplace_back(
              pair_dim(),
              SketchSeed::derive(run_seed_, 0x4b57000000000000ull ^ j));
      return [this](const UpdateEvent& ev) {
        std::int32_t x = view_.node_of[ev.edge.u];
        std::int32_t y = view_.node_of[ev.edge.v];
        if (x < 0 || y < 0 || x == y) return;
        std::int64_t d = ev.op == StreamOp::kInsert ? 1 : -1;
        std::uint64_t coord = pair_index(ev.edge.u, ev.edge.v, nbase_);
        for (int j = 1; j <= i_; ++j) {
          if (in_n_[j - 1][y]) sk_[x * i_ + j - 1].update(coord, d);
          if (in_n_[j - 1][x]) sk_[y * i_ + j - 1].update(coord, d);
        }
      };
    }
    // pass 2: terminal stars
    term_of_.assign(view_.nodes, -1);
    for (std::size_t ti = 0; ti < terminals_.size(); ++ti)
      for (std::uint32_t m : terminals_[ti].members)
        term_of_[m] = static_cast<std::int32_t>(ti);
    stars_.clear();
    for (std::size_t ti = 0; ti < terminals_.size(); ++ti) {
      const Terminal& term = terminals_[ti];
      double cited =
          std::ceil(8.0 * ln_n(nbase_) *
                    std::pow(p_, -static_cast<double>(term.level + 1)));
      std::uint64_t budget = static_cast<std::uint64_t>(
          std::min<double>(static_cast<double>(view_.nodes), cited));
      budget = std::max<std::uint64_t>(budget, 1);
      SubsetSketch::PartFn fn = [this,
                                 ti](std::uint64_t coord) -> std::uint32_t {
        auto [a, b] = pair_from_index(coord, nbase_);
        std::int32_t x = view_.node_of[a];
        std::int32_t y = view_.node_of[b];
        return static_cast<std::uint32_t>(
            term_of_[x] == static_cast<std::int32_t>(ti) ? y : x);
      };
      stars_.push_back(Star{
          SubsetSketch(pair_dim(), static_cast<std::uint32_t>(view_.nodes),
                       std::move(fn), budget,
                       SketchSeed::derive(run_seed_,
                                          0x4b53000000000000ull ^ ti),
                       12)});
    }
    return [this](const UpdateEvent& ev) {
      std::int32_t x = view_.node_of[ev.edge.u];
      std::int32_t y = view_.node_of[ev.edge.v];
      if (x < 0 || y < 0 || x == y) return;
      std::int64_t d = ev.op == StreamOp::kInsert ? 1 : -1;
      std::uint64_t coord = pair_index(ev.edge.u, ev.edge.v, nbase_);
      std::int32_t t1 = term_of_[x];
      std::int32_t t2 = term_of_[y];
      if (t1 >= 0 && t1 != t2) stars_[t1].sk.update(coord, d);
      if (t2 >= 0 && t2 != t1) stars_[t2].sk.update(coord, d);
    };
  }

  void end_pass(int t) {
    if (t == 1) {
      cluster_offline();
      sk_.clear();
      sk_.shrink_to_fit();
      return;
    }
    for (const Star& s : stars_) {
      SubsetRecoverResult r = s.sk.recover();
      if (r.status != DecodeStatus::kOk) {
        failed_ = true;
        continue;
      }
      for (std::uint64_t c : r.coords) {
        auto [a, b] = pair_from_index(c, nbase_);
        h_edges.push_back(Edge(a, b));
      }
    }
    stars_.clear();
  }

  std::size_t retained_words() const {
    std::size_t w = view_.node_of.size() + 2 * h_edges.size() +
                    in_n_.size() * view_.nodes;
    for (const L0Sketch& s : sk_) w += s.word_count();
    for (const Star& s : stars_) w += s.sk.word_count();
    for (const Terminal& t : terminals_) w += t.members.size();
    return w;
  }

  PartialPartition partition() const {
    PartialPartition p;
    p.level = i_;
    p.sampled_count = final_centers.size();
    for (std::size_t idx = 0; idx < final_centers.size(); ++idx)
      if (!final_members[idx].empty()) {
        p.centers.push_back(final_centers[idx]);
        p.clusters.push_back(
            std::vector<Vertex>(final_members[idx].begin(),
                                final_members[idx].end()));
      }
    return p;
  }

  std::vector<std::int32_t> final_of;  // node -> final cluster idx or -1
  std::vector<std::uint32_t> final_centers;
  std::vector<std::vector<std::uint32_t>> final_members;
  std::vector<Edge> h_edges;
  std::size_t sampled_count = 0;

 private:
  struct Terminal {
    int level;
    std::uint32_t center;
    std::vector<std::uint32_t> members;
  };
  struct Star {
    SubsetSketch sk;
  };
  struct Cl {
    std::uint32_t center;
    std::vector<std::uint32_t> members;
  };

  std::uint64_t pair_dim() const {
    return static_cast<std::uint64_t>(nbase_) * nbase_;
  }

  void cluster_offline() {
    std::vector<Cl> cur;
    cur.reserve(view_.nodes);
    for (std::uint32_t v = 0; v < view_.nodes; ++v)
      cur.push_back(Cl{v, {v}});
    for (int j = 1; j <= i_; ++j) {
      std::vector<std::int32_t> idx_of(view_.nodes, -1);
      std::vector<Cl> next;
      for (std::uint32_t c = 0; c < view_.nodes; ++c)
        if (in_n_[j - 1][c]) {
          idx_of[c] = static_cast<std::int32_t>(next.size());
          next.push_back(Cl{c, {}});
        }
      for (Cl& cl : cur) {
        std::int32_t target = -1;
        if (in_n_[j - 1][cl.center]) {
          // a sampled center keeps its own cluster
          target = static_cast<std::int32_t>(cl.center);
        } else {
          if (cl.members.empty()) continue;
          L0Sketch merged = sk_[cl.members[0] * i_ + j - 1];
          for (std::size_t m = 1; m < cl.members.size(); ++m)
            merged.merge(sk_[cl.members[m] * i_ + j - 1]);
          L0Sample s = merged.sample();
          if (s.status == DecodeStatus::kEmpty) {
            terminals_.push_back(
                Terminal{j - 1, cl.center, std::move(cl.members)});
            continue;
          }
          if (s.status != DecodeStatus::kOk) {
            failed_ = true;
            continue;
          }
          auto [a, b] = pair_from_index(s.index, nbase_);
          std::int32_t x = view_.node_of[a];
          std::int32_t y = view_.node_of[b];
          bool xin = in_n_[j - 1][x] != 0;
          bool yin = in_n_[j - 1][y] != 0;
          target = xin && yin ? std::min(x, y) : (xin ? x : y);
          h_edges.push_back(Edge(a, b));
        }
        Cl& tgt = next[idx_of[target]];
        tgt.members.insert(tgt.members.end(), cl.members.begin(),
                           cl.members.end());
      }
      cur = std::move(next);
    }
    sampled_count = cur.size();
    final_of.assign(view_.nodes, -1);
    for (Cl& cl : cur) {
      std::int32_t idx = static_cast<std::int32_t>(final_centers.size());
      final_centers.push_back(cl.center);
      for (std::uint32_t m : cl.members) final_of[m] = idx;
      if (final_stars_ && !cl.members.empty())
        terminals_.push_back(Terminal{i_, cl.center, cl.members});
      final_members.push_back(std::move(cl.members));
    }
  }

  std::size_t nbase_;
  NodeView view_;
  double p_;
  int i_;
  std::uint64_t run_seed_;
  bool final_stars_;
  bool failed_ = false;

  std::vector<std::vector<char>> in_n_;  // [j-1][node]
  std::vector<L0Sketch> sk_;             // node * i_ + (j-1)
  std::vector<Terminal> terminals_;
  std::vector<std::int32_t> term_of_;
  std::vector<Star> stars_;
};

template <class Cluster>
std::optional<std::pair<Cluster, Meters>> run_standalone(
    const StreamSource& src, double p, int i, std::uint64_t run_seed,
    bool final_stars) {
  Meters meters;
  Cluster c(src.n(), NodeView::identity(src.n()), p, i, run_seed, final_stars);
  for (int t = 1; t <= c.passes(); ++t) {
    open_pass(src, meters, c.begin_pass(t));
    meters.space.checkpoint(c.retained_words());
    c.end_pass(t);
    if (c.failed()) return std::nullopt;
  }
  return std::make_pair(std::move(c), meters);
}

template <class Cluster>
ClusteringResult clustering_driver(const StreamSource& src, double p, int i,
                                   std::uint64_t seed) {
  if (p <= 0.0 || p > 1.0)
    throw std::invalid_argument("clustering: p must be in (0,1]");
  if (i < 0 || i > 63) throw std::invalid_argument("clustering: bad level");
  for (int attempt = 0; attempt < 3; ++attempt) {
    auto got = run_standalone<Cluster>(
        src, p, i, seed ^ (0x9e3779b97f4a7c15ull * attempt), false);
    if (!got) continue;
    ClusteringResult res;
    res.partition = got->first.partition();
    res.h = UnweightedGraph(src.n());
    for (const Edge& e : got->first.h_edges) res.h.add_edge(e.u, e.v);
    res.meters = got->second;
    res.retries = attempt;
    return res;
  }
  throw std::runtime_error("RANDOMNESS_EXHAUSTED");
}

template <class Cluster>
SpannerResult spanner_driver(const StreamSource& src, int k,
                             std::uint64_t seed, const char* algo,
                             std::int64_t declared) {
  if (k < 1 || k > 40)
    throw std::invalid_argument("spanner: k must be in [1,40]");
  auto t0 = Clock::now();
  double p = std::pow(static_cast<double>(std::max<std::size_t>(src.n(), 2)),
                      -1.0 / k);
  for (int attempt = 0; attempt < 3; ++attempt) {
    auto got = run_standalone<Cluster>(
        src, p, k - 1, seed ^ (0x9e3779b97f4a7c15ull * attempt), true);
    if (!got) continue;
    SpannerResult res;
    res.spanner = UnweightedGraph(src.n());
    for (const Edge& e : got->first.h_edges) res.spanner.add_edge(e.u, e.v);
    res.report.algo = algo;
    res.report.params = {{"k", static_cast<double>(k)},
                         {"p", p},
                         {"seed", static_cast<double>(seed)},
                         {"retries", static_cast<double>(attempt)}};
    finish_spanner_report(res.report, src.materialize(), res.spanner,
                          got->second, declared, t0);
    return res;
  }
  throw std::runtime_error("RANDOMNESS_EXHAUSTED");
}

// Shared final stage of the recursive constructions: one l0 sampler per
// cluster pair of the last partition, coordinates in base pair space.
struct PairStage {
  std::size_t nbase = 0;
  std::size_t cp = 0;
  std::vector<std::int32_t> basemap;  // base vertex -> final cluster or -1
  std::vector<L0Sketch> sketches;

  std::size_t tri(std::size_t c1, std::size_t c2) const {  // c1 < c2
    return c1 * cp - c1 * (c1 + 1) / 2 + (c2 - c1 - 1);
  }

  void build(std::size_t n, const RecursionParams& rp,
             std::vector<std::int32_t> map, std::size_t clusters,
             std::uint64_t run_seed) {
    nbase = n;
    cp = clusters;
    basemap = std::move(map);
    double cap = 4.0 * std::pow(static_cast<double>(n),
                                2.0 * (1.0 + 1.0 / rp.k - rp.d[rp.g]));
    if (static_cast<double>(cp) * static_cast<double>(cp) > cap)
      throw std::runtime_error("BUDGET_EXCEEDED");
    std::size_t count = cp >= 2 ? cp * (cp - 1) / 2 : 0;
    sketches.reserve(count);
    for (std::size_t idx = 0; idx < count; ++idx)
      sketches.emplace_back(
          static_cast<std::uint64_t>(n) * n,
          SketchSeed::derive(run_seed, 0x5052000000000000ull ^ idx));
  }

  Consumer consumer() {
    return [this](const UpdateEvent& ev) {
      std::int32_t c1 = basemap[ev.edge.u];
      std::int32_t c2 = basemap[ev.edge.v];
      if (c1 < 0 || c2 < 0 || c1 == c2) return;
      if (c1 > c2) std::swap(c1, c2);
      sketches[tri(c1, c2)].update(
          pair_index(ev.edge.u, ev.edge.v, nbase),
          ev.op == StreamOp::kInsert ? 1 : -1);
    };
  }

  // true on success, false on a decode failure
  bool harvest(std::vector<Edge>& out) const {
    for (const L0Sketch& sk : sketches) {
      L0Sample s = sk.sample();
      if (s.status == DecodeStatus::kEmpty) continue;
      if (s.status != DecodeStatus::kOk) return false;
      auto [a, b] = pair_from_index(s.index, nbase);
      out.push_back(Edge(a, b));
    }
    return true;
  }

  std::size_t retained_words() const {
    std::size_t w = basemap.size();
    for (const L0Sketch& sk : sketches) w += sk.word_count();
    return w;
  }
};

std::optional<UnweightedGraph> run_recursive_kw(const StreamSource& src,
                                                const RecursionParams& rp,
                                                std::uint64_t rs,
                                                Meters& meters) {
  std::size_t n = src.n();
  NodeView view = NodeView::identity(n);
  std::vector<Edge> all_edges;
  std::unique_ptr<KWCluster> prev, cur;
  PairStage pair_stage;
  for (int q = 1; q <= rp.g + 1; ++q) {
    std::vector<Consumer> stages;
    if (prev) stages.push_back(prev->begin_pass(2));
    if (q <= rp.g) {
      double pq = std::pow(static_cast<double>(n), -rp.d[q - 1]);
      cur = std::make_unique<KWCluster>(
          n, view, pq, rp.r, rs + 0x3c6ef372fe94f82aull * q, false);
      stages.push_back(cur->begin_pass(1));
    }
    if (q == rp.g + 1) stages.push_back(pair_stage.consumer());
    open_fused_pass(src, meters, stages);
    {
      std::size_t w = 2 * n + 2 * all_edges.size() +
                      pair_stage.retained_words();
      if (prev) w += prev->retained_words();
      if (cur) w += cur->retained_words();
      meters.space.checkpoint(w);
    }
    if (prev) {
      prev->end_pass(2);
      if (prev->failed()) return std::nullopt;
      all_edges.insert(all_edges.end(), prev->h_edges.begin(),
                       prev->h_edges.end());
      prev.reset();
    }
    if (q <= rp.g) {
      cur->end_pass(1);
      if (cur->failed()) return std::nullopt;
      // contract onto the nonempty clusters of P_q
      std::vector<std::int32_t> remap(cur->final_centers.size(), -1);
      std::size_t cnt = 0;
      for (std::size_t idx = 0; idx < cur->final_centers.size(); ++idx)
        if (!cur->final_members[idx].empty())
          remap[idx] = static_cast<std::int32_t>(cnt++);
      NodeView nv;
      nv.nodes = cnt;
      nv.node_of.assign(n, -1);
      for (std::size_t v = 0; v < n; ++v) {
        std::int32_t node = view.node_of[v];
        if (node < 0) continue;
        std::int32_t f = cur->final_of[node];
        if (f >= 0) nv.node_of[v] = remap[f];
      }
      if (q == rp.g)
        pair_stage.build(n, rp, nv.node_of, cnt,
                         rs + 0x452821e638d01377ull);
      view = std::move(nv);
      prev = std::move(cur);
    } else {
      if (!pair_stage.harvest(all_edges)) return std::nullopt;
    }
  }
  UnweightedGraph h(n);
  for (const Edge& e : all_edges) h.add_edge(e.u, e.v);
  return h;
}

std::optional<UnweightedGraph> run_recursive_bs(const StreamSource& src,
                                                const RecursionParams& rp,
                                                std::uint64_t rs,
                                                Meters& meters) {
  std::size_t n = src.n();
  int r = rp.r;
  int total = rp.g * r + 1;
  NodeView view = NodeView::identity(n);
  std::vector<Edge> all_edges;
  std::vector<std::unique_ptr<BSCluster>> cl(rp.g);
  PairStage pair_stage;
  for (int pass = 1; pass <= total; ++pass) {
    int qh = (pass - 1) / r + 1;
    int sh = (pass - 1) % r + 1;
    std::vector<Consumer> stages;
    // the dropout-star stage of the previous iteration shares this pass
    if (sh == 1 && qh >= 2) stages.push_back(cl[qh - 2]->begin_pass(r + 1));
    if (qh <= rp.g) {
      if (sh == 1) {
        double pq = std::pow(static_cast<double>(n), -rp.d[qh - 1]);
        cl[qh - 1] = std::make_unique<BSCluster>(
            n, view, pq, r, rs + 0x3c6ef372fe94f82aull * qh, false);
      }
      stages.push_back(cl[qh - 1]->begin_pass(sh));
    }
    if (pass == total) stages.push_back(pair_stage.consumer());
    open_fused_pass(src, meters, stages);
    {
      std::size_t w = 2 * n + 2 * all_edges.size() +
                      pair_stage.retained_words();
      for (const auto& c : cl)
        if (c) w += c->retained_words();
      meters.space.checkpoint(w);
    }
    if (sh == 1 && qh >= 2) {
      cl[qh - 2]->end_pass(r + 1);
      if (cl[qh - 2]->failed()) return std::nullopt;
      all_edges.insert(all_edges.end(), cl[qh - 2]->h_edges.begin(),
                       cl[qh - 2]->h_edges.end());
      cl[qh - 2].reset();
    }
    if (qh <= rp.g) {
      cl[qh - 1]->end_pass(sh);
      if (cl[qh - 1]->failed()) return std::nullopt;
      if (sh == r) {
        auto [m, cnt] = cl[qh - 1]->super_map();
        NodeView nv;
        nv.nodes = cnt;
        nv.node_of.assign(n, -1);
        for (std::size_t v = 0; v < n; ++v) {
          std::int32_t node = view.node_of[v];
          if (node >= 0) nv.node_of[v] = m[node];
        }
        if (qh == rp.g)
          pair_stage.build(n, rp, nv.node_of, cnt,
                           rs + 0x452821e638d01377ull);
        view = std::move(nv);
      }
    }
    if (pass == total && !pair_stage.harvest(all_edges)) return std::nullopt;
  }
  UnweightedGraph h(n);
  for (const Edge& e : all_edges) h.add_edge(e.u, e.v);
  return h;
}

}  // namespace

ClusteringResult bs_clustering(const StreamSource& src, double p, int i,
                               std::uint64_t seed) {
  return clustering_driver<BSCluster>(src, p, i, seed);
}

ClusteringResult kw_clustering(const StreamSource& src, double p, int i,
                               std::uint64_t seed) {
  return clustering_driver<KWCluster>(src, p, i, seed);
}

SpannerResult baswana_sen(const StreamSource& src, int k,
                          std::uint64_t seed) {
  return spanner_driver<BSCluster>(src, k, seed, "bs",
                                   2 * static_cast<std::int64_t>(k) - 1);
}

SpannerResult kapralov_woodruff(const StreamSource& src, int k,
                                std::uint64_t seed) {
  return spanner_driver<KWCluster>(src, k, seed, "kw",
                                   (std::int64_t(1) << k) - 1);
}

RecursionParams RecursionParams::make(double k, int g) {
  if (k < 1.0 || g < 1)
    throw std::invalid_argument("RecursionParams: need k >= 1 and g >= 1");
  RecursionParams rp;
  rp.k = k;
  rp.g = g;
  rp.r = ceil_guarded(std::pow((k + 1.0) / 2.0, 1.0 / g)) - 1;
  rp.d.resize(g + 1);
  for (int i = 0; i <= g; ++i)
    rp.d[i] = std::pow(static_cast<double>(rp.r + 1), i) / k;
  return rp;
}

std::int64_t stretch_bound(double k, int g, Scheme scheme) {
  RecursionParams rp = RecursionParams::make(k, g);
  std::int64_t base = scheme == Scheme::kKW
                          ? (std::int64_t(1) << (rp.r + 1)) - 1
                          : 2 * static_cast<std::int64_t>(rp.r + 1) - 1;
  return 2 * ipow64(base, g) - 1;
}

std::size_t pass_bound(double k, int g, Scheme scheme) {
  RecursionParams rp = RecursionParams::make(k, g);
  return scheme == Scheme::kKW ? static_cast<std::size_t>(g) + 1
                               : static_cast<std::size_t>(g) * rp.r + 1;
}

SpannerResult recursive_spanner(const StreamSource& src, double k, int g,
                                Scheme scheme, std::uint64_t seed) {
  if (k <= 1.0) throw std::invalid_argument("recursive_spanner: k > 1");
  int gmax = std::max(1, ceil_guarded(std::log2(k)));
  if (g < 1 || g > gmax)
    throw std::invalid_argument("recursive_spanner: g out of range");
  RecursionParams rp = RecursionParams::make(k, g);
  auto t0 = Clock::now();
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::uint64_t rs = seed ^ (0x9e3779b97f4a7c15ull * attempt);
    Meters meters;
    auto got = scheme == Scheme::kKW ? run_recursive_kw(src, rp, rs, meters)
                                     : run_recursive_bs(src, rp, rs, meters);
    if (!got) continue;
    SpannerResult res;
    res.spanner = std::move(*got);
    res.report.algo =
        scheme == Scheme::kKW ? "recursive-kw" : "recursive-bs";
    res.report.scheme = scheme == Scheme::kKW ? "kw" : "bs";
    res.report.params = {{"k", k},
                         {"g", static_cast<double>(g)},
                         {"r", static_cast<double>(rp.r)},
                         {"seed", static_cast<double>(seed)},
                         {"retries", static_cast<double>(attempt)}};
    finish_spanner_report(res.report, src.materialize(), res.spanner, meters,
                          stretch_bound(k, g, scheme), t0);
    return res;
  }
  throw std::runtime_error("RANDOMNESS_EXHAUSTED");
}

}  // namespace spanstream
