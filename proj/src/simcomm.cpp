#include "spanstream/simcomm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "spanstream/sketch.hpp"
#include "spanstream/spanner_one_pass.hpp"

namespace spanstream {

namespace {

using Clock = std::chrono::steady_clock;

double log2n(std::size_t n) { return std::log2(std::max<std::size_t>(n, 2)); }
double lnn(std::size_t n) {
  return std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
}

// Charged "Õ(1) words" unit for black-box subroutine messages.
std::size_t unit_words(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(log2n(n) * log2n(n)));
}

std::string base64(const std::vector<std::uint64_t>& words) {
  static const char* tbl =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::vector<std::uint8_t> bytes;
  bytes.reserve(words.size() * 8);
  for (std::uint64_t w : words)
    for (int i = 0; i < 8; ++i)
      bytes.push_back(static_cast<std::uint8_t>(w >> (8 * i)));
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    std::uint32_t v = bytes[i] << 16;
    if (i + 1 < bytes.size()) v |= bytes[i + 1] << 8;
    if (i + 2 < bytes.size()) v |= bytes[i + 2];
    out.push_back(tbl[(v >> 18) & 63]);
    out.push_back(tbl[(v >> 12) & 63]);
    out.push_back(i + 1 < bytes.size() ? tbl[(v >> 6) & 63] : '=');
    out.push_back(i + 2 < bytes.size() ? tbl[v & 63] : '=');
  }
  return out;
}

}  // namespace

void Transcript::charge(std::uint32_t player, std::size_t bits) {
  if (round_ == 0) round_ = 1;
  if (bits_round_ != round_) {
    round_bits_.assign(std::max<std::size_t>(players_, player + 1), 0);
    bits_round_ = round_;
  }
  if (player >= round_bits_.size()) round_bits_.resize(player + 1, 0);
  round_bits_[player] += bits;
  meter_.total_bits += bits;
  meter_.max_bits_per_player_per_round =
      std::max(meter_.max_bits_per_player_per_round, round_bits_[player]);
}

void Transcript::post(std::uint32_t player,
                      const std::vector<std::uint64_t>& words) {
  if (round_ == 0) round_ = 1;
  entries_.push_back(Entry{round_, player, 64 * words.size(), words});
  charge(player, 64 * words.size());
}

void Transcript::post_charged(std::uint32_t player, std::size_t bits) {
  if (round_ == 0) round_ = 1;
  entries_.push_back(Entry{round_, player, bits, {}});
  charge(player, bits);
}

std::string Transcript::dump_jsonl() const {
  std::ostringstream os;
  for (const Entry& e : entries_) {
    nlohmann::json j;
    j["round"] = e.round;
    j["player"] = e.player;
    j["bits"] = e.bits;
    j["payload"] = base64(e.payload);
    os << j.dump() << '\n';
  }
  return os.str();
}

NeighborhoodOracle::NeighborhoodOracle(const UnweightedGraph& g)
    : adj_(g.adjacency()) {
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

const std::vector<Vertex>& NeighborhoodOracle::neighbors(Vertex v) {
  if (active_ >= 0 && static_cast<Vertex>(active_) != v)
    violations_.push_back(Violation{active_, v});
  return adj_[v];
}

std::size_t NeighborhoodOracle::degree(Vertex v) { return neighbors(v).size(); }

double regime_threshold(std::size_t n, int g, const std::string& regime) {
  if (g < 1) throw std::invalid_argument("regime_threshold: g >= 1");
  double nd = static_cast<double>(std::max<std::size_t>(n, 2));
  if (regime == "resistance") {
    double c = RegressionStore::bound("filter/resistance/t_c").value_or(4.0);
    return c * std::pow(nd, (g + 1.0) / (2.0 * g + 1.0));
  }
  if (regime == "ldd") return 12.0 * std::pow(nd, 2.0 / g) * lnn(n);
  throw std::invalid_argument("regime_threshold: unknown regime");
}

FilterResult filtering_spanner(const UnweightedGraph& g, double t, int rounds,
                               std::uint64_t seed,
                               const SparsifierParams& base) {
  if (t < 1.0) throw std::invalid_argument("filtering_spanner: t >= 1");
  if (rounds < 1) throw std::invalid_argument("filtering_spanner: rounds >= 1");
  auto t0 = Clock::now();
  std::size_t n = g.n();
  FilterResult res;
  res.transcript = Transcript(seed, n);
  std::vector<Edge> surviving = g.edges();
  std::sort(surviving.begin(), surviving.end());
  UnweightedGraph hhat(n);
  std::int64_t t_floor = static_cast<std::int64_t>(std::floor(t + 1e-9));
  std::size_t charged_bits = 64 * unit_words(n);
  for (int i = 1; i <= rounds; ++i) {
    res.transcript.begin_round();
    for (Vertex v = 0; v < n; ++v) res.transcript.post_charged(v, charged_bits);
    UnweightedGraph gi(n);
    for (const Edge& e : surviving) gi.add_edge(e.u, e.v);
    SparsifierParams sp = base;
    sp.seed = seed ^ (0x9e3779b97f4a7c15ull * i);
    UnweightedGraph kept = unweight(spectral_sparsify(gi, sp));
    for (const Edge& e : kept.edges())
      hhat.add_edge(e.u, e.v);
    std::map<Vertex, DistanceMap> cache;
    std::vector<Edge> next;
    for (const Edge& e : surviving) {
      auto it = cache.find(e.u);
      if (it == cache.end())
        it = cache.emplace(e.u, bfs_distances(hhat, e.u)).first;
      std::int64_t d = it->second.dist[e.v];
      if (d == kUnreachable || d > t_floor) next.push_back(e);
    }
    surviving = std::move(next);
    res.history.push_back(
        FilterState{static_cast<std::size_t>(i), surviving, hhat, t, rounds});
  }
  res.emptied = surviving.empty();
  res.spanner = hhat;

  StretchReport sr = spanner_stretch(g, hhat);
  RunReport& r = res.report;
  r.algo = "filter";
  r.params = {{"t", t},
              {"g", static_cast<double>(rounds)},
              {"seed", static_cast<double>(seed)},
              {"eps", base.eps},
              {"oversample", base.oversample}};
  r.n = n;
  r.m = g.m();
  r.rounds = rounds;
  r.spanner_edges = hhat.m();
  r.max_stretch = sr.max_stretch;
  r.witness_edge = sr.witness_edge;
  r.declared_bound = res.emptied ? t_floor : -1;
  r.max_bits_per_player_per_round =
      res.transcript.meter().max_bits_per_player_per_round;
  r.space_accounting = "charged";
  r.verified = res.emptied && sr.max_stretch != kUnreachable &&
               sr.max_stretch <= t_floor;
  r.wall_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return res;
}

LddResult ldd(const WeightedGraph& h, double phi) {
  if (phi <= 0.0 || phi >= 1.0)
    throw std::invalid_argument("ldd: phi must be in (0,1)");
  std::size_t n = h.n();
  std::vector<std::vector<std::pair<Vertex, double>>> adj(n);
  for (const auto& [e, w] : h.edges()) {
    if (w < 1.0 - 1e-9) throw std::invalid_argument("ldd: weights must be >= 1");
    adj[e.u].emplace_back(e.v, w);
    adj[e.v].emplace_back(e.u, w);
  }
  LddResult res;
  std::vector<double> awdeg(n, 0.0);  // weighted degree in the remaining graph
  for (Vertex v = 0; v < n; ++v)
    for (auto& [w, wt] : adj[v]) awdeg[v] += wt;
  for (Vertex v = 0; v < n; ++v) res.volume += awdeg[v];
  res.radius_bound = 2.0 * lnn(n) / phi + 2.0;

  std::vector<std::int32_t> label(n, -1);
  std::vector<char> in_ball(n, 0);
  for (Vertex v0 = 0; v0 < n; ++v0) {
    if (label[v0] >= 0) continue;
    std::vector<Vertex> members = {v0};
    std::vector<Vertex> frontier = {v0};
    in_ball[v0] = 1;
    double vol = awdeg[v0];
    double internal = 0.0;
    double boundary = vol;
    std::int64_t radius = 0;
    while (boundary > 0 && boundary >= phi * vol - 1e-12) {
      std::vector<Vertex> next;
      for (Vertex x : frontier)
        for (auto& [y, wt] : adj[x])
          if (label[y] < 0 && !in_ball[y]) {
            in_ball[y] = 1;
            next.push_back(y);
          }
      if (next.empty()) break;
      // add layer vertices one at a time so each new internal edge is
      // counted exactly once, at its later endpoint
      for (Vertex y : next) in_ball[y] = 0;
      for (Vertex y : next) {
        vol += awdeg[y];
        for (auto& [z, wt] : adj[y])
          if (label[z] < 0 && in_ball[z]) internal += wt;
        in_ball[y] = 1;
      }
      boundary = vol - 2.0 * internal;
      members.insert(members.end(), next.begin(), next.end());
      frontier = std::move(next);
      ++radius;
    }
    std::int32_t id = static_cast<std::int32_t>(res.clusters.size());
    for (Vertex x : members) label[x] = id;
    for (Vertex x : members) {
      in_ball[x] = 0;
      for (auto& [y, wt] : adj[x])
        if (label[y] < 0) awdeg[y] -= wt;
    }
    res.clusters.push_back(LddCluster{v0, std::move(members), radius});
  }
  for (const auto& [e, w] : h.edges())
    if (label[e.u] != label[e.v]) res.boundary_weight += w;
  bool radii_ok = true;
  for (const LddCluster& c : res.clusters)
    radii_ok = radii_ok && c.radius <= res.radius_bound;
  res.certificate =
      radii_ok && res.boundary_weight <= phi * res.volume + 1e-9;
  return res;
}

namespace {

PeelResult peel_run(const UnweightedGraph& g, std::uint64_t s,
                    std::uint64_t seed) {
  std::size_t n = g.n();
  NeighborhoodOracle oracle(g);
  Transcript tr(seed, n);
  tr.begin_round();
  std::vector<SparseRecoverySketch> sk;
  sk.reserve(n);
  std::vector<std::uint64_t> deg(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    oracle.set_active(static_cast<std::int32_t>(v));
    SparseRecoverySketch sv(n, s,
                            SketchSeed::derive(seed, 0x5045454c00000000ull ^ v));
    for (Vertex w : oracle.neighbors(v)) sv.update(w, 1);
    deg[v] = oracle.degree(v);
    std::vector<std::uint64_t> words = sv.serialize();
    words.push_back(deg[v]);
    tr.post(v, words);
    sk.push_back(std::move(sv));
  }
  oracle.set_active(-1);

  // Deterministic replay from the board: peel the minimum-index vertex of
  // degree <= s, subtract its edges everywhere.
  PeelResult res;
  res.transcript = std::move(tr);
  std::vector<char> peeled(n, 0);
  std::size_t step = 0;
  while (true) {
    std::int64_t u = -1;
    for (Vertex v = 0; v < n; ++v)
      if (!peeled[v] && deg[v] <= s) {
        u = v;
        break;
      }
    if (u < 0) break;
    ++step;
    SparseDecodeResult dec = sk[u].decode();
    if (dec.status != DecodeStatus::kOk && dec.status != DecodeStatus::kEmpty) {
      res.failed = true;
      res.fail_step = step;
      break;
    }
    peeled[u] = 1;
    res.v1.push_back(static_cast<Vertex>(u));
    for (const SparseEntry& e : dec.entries) {
      if (e.value != 1) {
        res.failed = true;
        res.fail_step = step;
        break;
      }
      Vertex w = static_cast<Vertex>(e.index);
      res.recovered.push_back(Edge(static_cast<Vertex>(u), w));
      sk[w].update(static_cast<std::uint64_t>(u), -1);
      --deg[w];
    }
    if (res.failed) break;
  }
  for (Vertex v = 0; v < n; ++v)
    if (!peeled[v]) res.v2.push_back(v);
  std::sort(res.recovered.begin(), res.recovered.end());
  return res;
}

}  // namespace

PeelResult low_degree_peeling(const UnweightedGraph& g, std::uint64_t s,
                              std::uint64_t seed) {
  if (s < 1) throw std::invalid_argument("low_degree_peeling: s >= 1");
  return peel_run(g, s, seed);
}

PeelResult peel_replay_as(const UnweightedGraph& g, std::uint64_t s,
                          std::uint64_t seed, std::uint32_t as_player) {
  if (s < 1) throw std::invalid_argument("peel_replay_as: s >= 1");
  (void)as_player;  // the replay is a pure function of the board
  return peel_run(g, s, seed);
}

ScmResult scm_tradeoff(const UnweightedGraph& g, double alpha, int rounds,
                       std::uint64_t seed) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("scm_tradeoff: alpha must be in (0,1)");
  if (rounds < 1) throw std::invalid_argument("scm_tradeoff: rounds >= 1");
  auto t0 = Clock::now();
  std::size_t n = g.n();
  double l2 = log2n(n);
  ScmResult res;
  res.spanner = UnweightedGraph(n);
  res.transcript = Transcript(seed, n);

  SubsetCover cover = build_subset_cover(n, alpha, seed ^ 0x5c31);
  std::vector<std::vector<std::uint32_t>> member(n);
  for (std::uint32_t i = 0; i < cover.parts.size(); ++i)
    for (Vertex v : cover.parts[i]) member[v].push_back(i);
  auto common_parts = [&](Vertex u, Vertex v, auto&& fn) {
    const auto& mu = member[u];
    const auto& mv = member[v];
    std::size_t x = 0, y = 0;
    while (x < mu.size() && y < mv.size()) {
      if (mu[x] == mv[y]) {
        fn(mu[x]);
        ++x;
        ++y;
      } else if (mu[x] < mv[y]) {
        ++x;
      } else {
        ++y;
      }
    }
  };
  std::vector<std::vector<Edge>> part_edges(cover.parts.size());
  for (const Edge& e : g.edges())
    common_parts(e.u, e.v, [&](std::uint32_t i) { part_edges[i].push_back(e); });

  auto sparsify_into = [&](const std::vector<Edge>& edges,
                           std::uint64_t sub_seed) {
    if (edges.empty()) return;
    UnweightedGraph sub(n);
    for (const Edge& e : edges) sub.add_edge(e.u, e.v);
    SparsifierParams sp;
    sp.seed = sub_seed;
    UnweightedGraph kept = unweight(spectral_sparsify(sub, sp));
    for (const Edge& e : kept.edges())
      res.spanner.add_edge(e.u, e.v);
  };

  std::int64_t declared = -1;
  if (rounds == 1) {
    res.transcript.begin_round();
    // branch 1: one sparsifier per cover subset
    for (std::size_t i = 0; i < cover.parts.size(); ++i)
      sparsify_into(part_edges[i], seed ^ (0x9e3779b97f4a7c15ull * (i + 1)));
    // branch 2: peel away low-degree vertices; their edges are exact
    std::uint64_t s = static_cast<std::uint64_t>(
        std::ceil(std::pow(static_cast<double>(n), alpha)));
    PeelResult peel = low_degree_peeling(g, s, seed ^ 0x9ee1);
    for (const Edge& e : peel.recovered) res.spanner.add_edge(e.u, e.v);
    // branch 3a: full sparse recovery of the residual graph when it fits
    std::vector<char> in_v2(n, 0);
    for (Vertex v : peel.v2) in_v2[v] = 1;
    std::vector<Edge> residual;
    for (const Edge& e : g.edges())
      if (in_v2[e.u] && in_v2[e.v]) residual.push_back(e);
    std::uint64_t budget = static_cast<std::uint64_t>(
        std::ceil(std::pow(static_cast<double>(n), 1.0 + alpha) * l2));
    SparseRecoverySketch whole(static_cast<std::uint64_t>(n) * n, budget,
                               SketchSeed::derive(seed, 0x5cf0));
    for (const Edge& e : residual) whole.update(pair_index(e.u, e.v, n), 1);
    SparseDecodeResult dec = whole.decode();
    if (dec.status == DecodeStatus::kOk)
      for (const SparseEntry& e : dec.entries) {
        auto [u, v] = pair_from_index(e.index, n);
        res.spanner.add_edge(u, v);
      }
    // branch 3b: random residual subsets with inclusion probability n^-alpha
    double p = std::pow(static_cast<double>(n), -alpha);
    std::size_t count =
        static_cast<std::size_t>(std::ceil(8.0 / (p * p) * lnn(n)));
    std::mt19937_64 rng(seed ^ 0x3b5d);
    std::bernoulli_distribution keep(p);
    std::vector<std::vector<std::uint32_t>> rmember(n);
    for (std::uint32_t i = 0; i < count; ++i)
      for (Vertex v = 0; v < n; ++v)
        if (in_v2[v] && keep(rng)) rmember[v].push_back(i);
    std::vector<std::vector<Edge>> redges(count);
    for (const Edge& e : residual) {
      const auto& mu = rmember[e.u];
      const auto& mv = rmember[e.v];
      std::size_t x = 0, y = 0;
      while (x < mu.size() && y < mv.size()) {
        if (mu[x] == mv[y]) {
          redges[mu[x]].push_back(e);
          ++x;
          ++y;
        } else if (mu[x] < mv[y]) {
          ++x;
        } else {
          ++y;
        }
      }
    }
    for (std::size_t i = 0; i < count; ++i)
      sparsify_into(redges[i], seed ^ (0xc2b2ae3d27d4eb4full * (i + 1)));
    // communication: cover and subset sparsifiers charged per membership,
    // peel sketches at their exact size, the global recovery at each
    // player's share of its cells
    std::size_t peel_bits =
        64 * (4 + 9 * std::max<std::uint64_t>(2 * s, 2) + 1);
    std::size_t share_bits = 64 * static_cast<std::size_t>(std::ceil(
                                      std::pow(static_cast<double>(n), alpha) *
                                      l2 * l2));
    for (Vertex v = 0; v < n; ++v) {
      std::size_t bits = peel_bits + share_bits;
      bits += 64 * unit_words(n) * (member[v].size() + rmember[v].size());
      res.transcript.post_charged(v, bits);
    }
    auto c = RegressionStore::bound("scm/stretch/one_round_c");
    if (c)
      declared = static_cast<std::int64_t>(std::ceil(
          *c * std::pow(std::pow(static_cast<double>(n), 1.0 - alpha),
                        2.0 / 3.0) *
          l2 * l2));
  } else {
    // rounds > 1: filter each cover subset with the resistance threshold
    for (int rd = 0; rd < rounds; ++rd) {
      res.transcript.begin_round();
      for (Vertex v = 0; v < n; ++v)
        res.transcript.post_charged(v, 64 * unit_words(n) * member[v].size());
    }
    bool all_emptied = true;
    std::int64_t t_max = 0;
    for (std::size_t i = 0; i < cover.parts.size(); ++i) {
      if (part_edges[i].empty()) continue;
      UnweightedGraph sub(n);
      for (const Edge& e : part_edges[i]) sub.add_edge(e.u, e.v);
      double t = regime_threshold(cover.parts[i].size(), rounds, "resistance");
      FilterResult fr = filtering_spanner(
          sub, t, rounds, seed ^ (0x6a09e667f3bcc909ull * (i + 1)));
      for (const Edge& e : fr.spanner.edges()) res.spanner.add_edge(e.u, e.v);
      all_emptied = all_emptied && fr.emptied;
      t_max = std::max(t_max, static_cast<std::int64_t>(std::floor(t + 1e-9)));
    }
    if (all_emptied) declared = t_max;
  }

  StretchReport sr = spanner_stretch(g, res.spanner);
  RunReport& r = res.report;
  r.algo = "scm";
  r.params = {{"alpha", alpha},
              {"rounds", static_cast<double>(rounds)},
              {"seed", static_cast<double>(seed)}};
  r.n = n;
  r.m = g.m();
  r.rounds = rounds;
  r.spanner_edges = res.spanner.m();
  r.max_stretch = sr.max_stretch;
  r.witness_edge = sr.witness_edge;
  r.declared_bound = declared;
  r.max_bits_per_player_per_round =
      res.transcript.meter().max_bits_per_player_per_round;
  r.space_accounting = "charged";
  r.verified = sr.max_stretch != kUnreachable &&
               (declared < 0 || sr.max_stretch <= declared);
  r.wall_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return res;
}

}  // namespace spanstream
