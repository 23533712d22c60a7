#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spanstream/graph.hpp"
#include "spanstream/report.hpp"
#include "spanstream/sparsify.hpp"

namespace spanstream {

struct CommMeter {
  std::size_t max_bits_per_player_per_round = 0;
  std::size_t total_bits = 0;
};

// Public board: per-round, per-player posted messages with exact bit
// accounting. Charged posts record a cited bit budget without a payload;
// exact posts serialize real sketch words.
class Transcript {
 public:
  Transcript() = default;
  Transcript(std::uint64_t shared_seed, std::size_t players)
      : seed_(shared_seed), players_(players) {}

  void begin_round() { ++round_; }
  void post(std::uint32_t player, const std::vector<std::uint64_t>& words);
  void post_charged(std::uint32_t player, std::size_t bits);

  std::size_t rounds() const { return round_; }
  std::size_t players() const { return players_; }
  std::uint64_t shared_seed() const { return seed_; }
  const CommMeter& meter() const { return meter_; }

  // JSON lines, one per (round, player) post: byte length + base-64 payload.
  std::string dump_jsonl() const;

 private:
  struct Entry {
    std::size_t round;
    std::uint32_t player;
    std::size_t bits;
    std::vector<std::uint64_t> payload;  // empty for charged posts
  };
  void charge(std::uint32_t player, std::size_t bits);

  std::uint64_t seed_ = 0;
  std::size_t players_ = 0;
  std::size_t round_ = 0;
  std::vector<std::size_t> round_bits_;  // player -> bits in current round
  std::size_t bits_round_ = 0;           // round the accumulator refers to
  std::vector<Entry> entries_;
  CommMeter meter_;
};

// Instrumented access to private neighborhoods. While a player is active,
// any read of a different vertex's neighborhood is logged as a violation;
// tests assert the log stays empty.
class NeighborhoodOracle {
 public:
  explicit NeighborhoodOracle(const UnweightedGraph& g);

  void set_active(std::int32_t player) { active_ = player; }
  const std::vector<Vertex>& neighbors(Vertex v);
  std::size_t degree(Vertex v);

  struct Violation {
    std::int32_t player;
    Vertex read;
  };
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<std::vector<Vertex>> adj_;
  std::int32_t active_ = -1;
  std::vector<Violation> violations_;
};

// State after filter round `round`: surviving = E_{round+1}, hhat = the
// accumulated union spanner at that point.
struct FilterState {
  std::size_t round = 0;
  std::vector<Edge> surviving;
  UnweightedGraph hhat;
  double t = 0.0;
  int g = 0;
};

struct FilterResult {
  UnweightedGraph spanner;
  bool emptied = false;  // E_{g+1} == empty
  std::vector<FilterState> history;
  Transcript transcript;
  RunReport report;
};

// Per round: sparsify the surviving edges (default eps), union the
// unweighting into the spanner, drop every edge already satisfied within t.
// A non-empty survivor set after the last round is an outcome, not an error.
FilterResult filtering_spanner(const UnweightedGraph& g, double t, int rounds,
                               std::uint64_t seed,
                               const SparsifierParams& base = {});

// Threshold presets: "resistance" c*n^((g+1)/(2g+1)), "ldd" 12*n^(2/g)*ln n.
double regime_threshold(std::size_t n, int g, const std::string& regime);

struct LddCluster {
  Vertex center;
  std::vector<Vertex> members;
  std::int64_t radius = 0;
};

struct LddResult {
  std::vector<LddCluster> clusters;
  double boundary_weight = 0.0;  // total inter-cluster weight
  double volume = 0.0;           // sum of weighted degrees of h
  double radius_bound = 0.0;
  bool certificate = false;
};

// Ball growing in hop metric with the weighted stopping rule
// boundary(B) < phi * vol(B); each cluster certified by its BFS radius.
LddResult ldd(const WeightedGraph& h, double phi);

struct PeelResult {
  std::vector<Vertex> v1, v2;
  std::vector<Edge> recovered;  // all edges incident to v1
  Transcript transcript;
  bool failed = false;
  std::size_t fail_step = 0;
};

// One round: every player posts an s-sparse-recovery sketch of its
// neighborhood plus its degree; a deterministic replay peels the
// minimum-index vertex of degree <= s, subtracting its edges from the
// remaining sketches. Min degree in the residual graph exceeds s.
PeelResult low_degree_peeling(const UnweightedGraph& g, std::uint64_t s,
                              std::uint64_t seed);

// The same replay executed from the viewpoint of one player; the id only
// tags access logging, so every player obtains an identical result.
PeelResult peel_replay_as(const UnweightedGraph& g, std::uint64_t s,
                          std::uint64_t seed, std::uint32_t as_player);

struct ScmResult {
  UnweightedGraph spanner;
  Transcript transcript;
  RunReport report;
};

// rounds == 1: subset-cover sparsifiers plus a peel-then-recover branch
// (full sparse recovery of the residual graph when it fits the cited budget,
// random subsets otherwise alongside). rounds > 1: per-cover-subset
// filtering with the resistance-regime threshold.
ScmResult scm_tradeoff(const UnweightedGraph& g, double alpha, int rounds,
                       std::uint64_t seed);

}  // namespace spanstream
