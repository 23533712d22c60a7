#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

namespace spanstream {

// All sketch state lives in Z_p for the Mersenne prime p = 2^61 - 1, so a
// sketch is a fixed linear map of the underlying integer vector and replays
// identically on any platform.
inline constexpr std::uint64_t kSketchPrime = (1ull << 61) - 1;

namespace modp {
inline std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  if (s >= kSketchPrime) s -= kSketchPrime;
  return s;
}
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b) {
  return a >= b ? a - b : a + kSketchPrime - b;
}
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % kSketchPrime);
}
std::uint64_t pow(std::uint64_t base, std::uint64_t exp);
std::uint64_t inv(std::uint64_t a);
inline std::uint64_t from_signed(std::int64_t x) {
  return x >= 0 ? static_cast<std::uint64_t>(x) % kSketchPrime
                : kSketchPrime -
                      (static_cast<std::uint64_t>(-x) % kSketchPrime);
}
inline std::int64_t to_signed(std::uint64_t r) {
  return r > kSketchPrime / 2 ? -static_cast<std::int64_t>(kSketchPrime - r)
                              : static_cast<std::int64_t>(r);
}
}  // namespace modp

// Identifies one draw of the hash family. Two sketches are mergeable iff
// their lineages (and shapes) match; the linear map is a pure function of
// the lineage.
struct SketchSeed {
  std::uint64_t seed = 0;
  std::uint64_t lineage = 0;
  static SketchSeed derive(std::uint64_t seed, std::uint64_t salt = 0);
  bool operator==(const SketchSeed&) const = default;
};

enum class DecodeStatus { kOk, kEmpty, kFail, kOverflow };

struct L0Sample {
  DecodeStatus status = DecodeStatus::kFail;
  std::uint64_t index = 0;
  std::int64_t value = 0;
};

// One (count, index-sum, fingerprint) cell, all residues mod p.
struct SketchCell {
  std::uint64_t count = 0;
  std::uint64_t isum = 0;
  std::uint64_t fp = 0;
  bool zero() const { return count == 0 && isum == 0 && fp == 0; }
  bool operator==(const SketchCell&) const = default;
};

class L0Sketch {
 public:
  static constexpr int kDefaultReps = 12;

  L0Sketch(std::uint64_t dim, SketchSeed seed, int reps = kDefaultReps);

  void update(std::uint64_t coord, std::int64_t delta);
  void merge(const L0Sketch& other);
  void subtract(const L0Sketch& other);

  // Nonzero coordinate of the underlying vector, or kEmpty for the zero
  // vector, or kFail. Never reports a coordinate whose true value is zero
  // (up to fingerprint collisions, probability O(dim/p)).
  L0Sample sample() const;

  std::uint64_t dim() const { return dim_; }
  const SketchSeed& seed() const { return seed_; }
  bool zero_state() const;
  bool compatible(const L0Sketch& other) const;

  std::vector<std::uint64_t> serialize() const;
  std::size_t word_count() const { return 4 + cells_.size() * 3; }

  bool operator==(const L0Sketch&) const = default;

 private:
  friend class SubsetSketch;
  int levels() const { return levels_; }
  // Levels 0..k of repetition `rep` that contain `coord` (level 0 always).
  int membership_depth(int rep, std::uint64_t coord) const;

  std::uint64_t dim_ = 0;
  SketchSeed seed_;
  int reps_ = 0;
  int levels_ = 0;
  std::uint64_t gen_ = 0;                   // fingerprint generator
  std::vector<std::uint64_t> ha_, hb_;      // per-rep pairwise hash
  std::vector<SketchCell> cells_;           // reps * levels
};

struct SparseEntry {
  std::uint64_t index;
  std::int64_t value;
  bool operator==(const SparseEntry&) const = default;
};

struct SparseDecodeResult {
  DecodeStatus status = DecodeStatus::kOverflow;
  std::vector<SparseEntry> entries;  // sorted by index when kOk
};

// Cell storage is lazy: only touched buckets take memory, while the logical
// table (and thus serialization and word accounting) stays kRows x 2*budget.
class SparseRecoverySketch {
 public:
  // Peeling stalls only on a set of coordinates colliding in every row, so
  // the failure rate falls off like cols^-kRows; nine rows keep a decode of
  // <= budget entries reliable enough to chain hundreds of decodes.
  static constexpr int kRows = 9;

  SparseRecoverySketch(std::uint64_t dim, std::uint64_t budget,
                       SketchSeed seed);

  void update(std::uint64_t coord, std::int64_t delta);
  // Adds a raw residue to a coordinate (used when coordinate values are
  // themselves mod-p field elements rather than small integers).
  void update_residue(std::uint64_t coord, std::uint64_t residue);
  void merge(const SparseRecoverySketch& other);
  void subtract(const SparseRecoverySketch& other);

  // Exact support when it has size <= budget; kOverflow otherwise (peeling
  // stall or more than `budget` recovered entries), kEmpty for the zero
  // vector.
  SparseDecodeResult decode() const;

  struct RawDecode {
    DecodeStatus status = DecodeStatus::kOverflow;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;
  };
  RawDecode raw_decode() const;

  std::uint64_t dim() const { return dim_; }
  std::uint64_t budget() const { return budget_; }
  const SketchSeed& seed() const { return seed_; }
  bool zero_state() const;
  bool compatible(const SparseRecoverySketch& other) const;

  std::vector<std::uint64_t> serialize() const;
  std::size_t word_count() const {
    return 4 + static_cast<std::size_t>(kRows) * cols_ * 3;
  }

  bool operator==(const SparseRecoverySketch&) const = default;

 private:
  std::uint64_t bucket(int row, std::uint64_t coord) const;
  // Zero cells are erased so the map mirrors the nonzero table exactly.
  void bump(std::uint64_t gidx, const SketchCell& delta, bool negate);

  std::uint64_t dim_ = 0;
  std::uint64_t budget_ = 0;
  std::uint64_t cols_ = 0;
  SketchSeed seed_;
  std::uint64_t gen_ = 0;
  std::vector<std::uint64_t> ha_, hb_;  // per-row hash
  std::unordered_map<std::uint64_t, SketchCell> cells_;  // gidx = row*cols+col
};

struct SubsetRecoverResult {
  DecodeStatus status = DecodeStatus::kFail;
  DecodeStatus raw_status = DecodeStatus::kFail;  // wrap-level decode status
  std::vector<std::uint64_t> coords;  // one nonzero coordinate per hit part
};

// Lemma-style subset sampler: coordinates are partitioned into parts; the
// composite state is a sparse-recovery wrap of concatenated per-part
// level-sampling cells. Recovers one nonzero coordinate from every nonempty
// part, provided at most `part_budget` parts are nonempty.
class SubsetSketch {
 public:
  using PartFn = std::function<std::uint32_t(std::uint64_t)>;

  SubsetSketch(std::uint64_t dim, std::uint32_t parts, PartFn part_of,
               std::uint64_t part_budget, SketchSeed seed, int reps = 4);

  void update(std::uint64_t coord, std::int64_t delta);
  SubsetRecoverResult recover() const;

  std::size_t word_count() const { return wrap_.word_count(); }
  std::vector<std::uint64_t> serialize() const { return wrap_.serialize(); }

 private:
  std::uint64_t dim_;
  std::uint32_t parts_;
  PartFn part_of_;
  SketchSeed seed_;
  L0Sketch proto_;  // hash/shape template shared by every part
  SparseRecoverySketch wrap_;
};

// Canonical-pair coordinate encoding for vertex-pair vector spaces.
inline std::uint64_t pair_index(std::uint32_t u, std::uint32_t v,
                                std::uint64_t n) {
  if (u > v) std::swap(u, v);
  return static_cast<std::uint64_t>(u) * n + v;
}
inline std::pair<std::uint32_t, std::uint32_t> pair_from_index(
    std::uint64_t idx, std::uint64_t n) {
  return {static_cast<std::uint32_t>(idx / n),
          static_cast<std::uint32_t>(idx % n)};
}

struct EdgeProbeResult {
  DecodeStatus status = DecodeStatus::kFail;  // kEmpty means "no such edge"
  std::uint32_t u = 0, v = 0;
};

// Probe for edges between two disjoint vertex sets over the canonical-pair
// indicator vector: single-edge mode uses an l0 sampler, all-edges mode a
// sparse-recovery sketch with the given budget.
class EdgeProbeSketch {
 public:
  EdgeProbeSketch(std::uint64_t n, std::vector<std::uint32_t> side_a,
                  std::vector<std::uint32_t> side_b, SketchSeed seed,
                  std::uint64_t all_budget = 0);

  // Feed a stream update; non-crossing edges are ignored.
  void update(std::uint32_t u, std::uint32_t v, std::int64_t delta);

  EdgeProbeResult edge_between() const;
  struct AllEdges {
    DecodeStatus status = DecodeStatus::kOverflow;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  };
  AllEdges edges_between() const;

  std::size_t word_count() const;

 private:
  bool crossing(std::uint32_t u, std::uint32_t v) const;
  std::uint64_t n_;
  std::vector<std::uint8_t> mask_;  // 0 neither, 1 in A, 2 in B
  L0Sketch single_;
  std::vector<SparseRecoverySketch> all_;  // empty unless all_budget > 0
};

}  // namespace spanstream
