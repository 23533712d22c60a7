#include "spanstream/sketch.hpp"

#include <bit>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace spanstream {

namespace modp {

std::uint64_t pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t acc = 1;
  base %= kSketchPrime;
  while (exp) {
    if (exp & 1) acc = mul(acc, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return acc;
}

std::uint64_t inv(std::uint64_t a) {
  if (a % kSketchPrime == 0)
    throw std::invalid_argument("modp::inv of zero");
  return pow(a, kSketchPrime - 2);
}

}  // namespace modp

namespace {

std::uint64_t splitmix(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t draw_residue(std::uint64_t& state) {
  return splitmix(state) % kSketchPrime;
}

// Nonzero multiplier for a pairwise-independent hash.
std::uint64_t draw_mult(std::uint64_t& state) {
  return 1 + splitmix(state) % (kSketchPrime - 1);
}

}  // namespace

SketchSeed SketchSeed::derive(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t s = seed ^ (0x6a09e667f3bcc909ull * (salt + 1));
  return {seed, splitmix(s)};
}

// ---------------------------------------------------------------------------
// L0Sketch

L0Sketch::L0Sketch(std::uint64_t dim, SketchSeed seed, int reps)
    : dim_(dim), seed_(seed), reps_(reps) {
  if (dim == 0) throw std::invalid_argument("L0Sketch: dim must be positive");
  if (reps < 1) throw std::invalid_argument("L0Sketch: reps must be >= 1");
  levels_ = std::bit_width(dim) + 1;
  std::uint64_t st = seed.lineage ^ (dim * 0x9ddfea08eb382d69ull) ^
                     static_cast<std::uint64_t>(reps);
  gen_ = 2 + draw_residue(st) % (kSketchPrime - 3);
  ha_.resize(reps_);
  hb_.resize(reps_);
  for (int r = 0; r < reps_; ++r) {
    ha_[r] = draw_mult(st);
    hb_[r] = draw_residue(st);
  }
  cells_.assign(static_cast<std::size_t>(reps_) * levels_, SketchCell{});
}

int L0Sketch::membership_depth(int rep, std::uint64_t coord) const {
  std::uint64_t h = modp::add(modp::mul(ha_[rep], coord % kSketchPrime),
                              hb_[rep]);
  int depth = 1;
  while (depth < levels_ && h < (kSketchPrime >> depth)) ++depth;
  return depth;
}

void L0Sketch::update(std::uint64_t coord, std::int64_t delta) {
  if (coord >= dim_)
    throw std::invalid_argument("L0Sketch::update: coordinate out of range");
  std::uint64_t d = modp::from_signed(delta);
  if (d == 0) return;
  std::uint64_t is = modp::mul(d, coord % kSketchPrime);
  std::uint64_t f = modp::mul(d, modp::pow(gen_, coord));
  for (int r = 0; r < reps_; ++r) {
    int depth = membership_depth(r, coord);
    for (int l = 0; l < depth; ++l) {
      SketchCell& c = cells_[static_cast<std::size_t>(r) * levels_ + l];
      c.count = modp::add(c.count, d);
      c.isum = modp::add(c.isum, is);
      c.fp = modp::add(c.fp, f);
    }
  }
}

bool L0Sketch::compatible(const L0Sketch& other) const {
  return dim_ == other.dim_ && reps_ == other.reps_ &&
         seed_.lineage == other.seed_.lineage;
}

void L0Sketch::merge(const L0Sketch& other) {
  if (!compatible(other))
    throw std::invalid_argument("L0Sketch::merge: lineage mismatch");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    cells_[i].count = modp::add(cells_[i].count, other.cells_[i].count);
    cells_[i].isum = modp::add(cells_[i].isum, other.cells_[i].isum);
    cells_[i].fp = modp::add(cells_[i].fp, other.cells_[i].fp);
  }
}

void L0Sketch::subtract(const L0Sketch& other) {
  if (!compatible(other))
    throw std::invalid_argument("L0Sketch::subtract: lineage mismatch");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    cells_[i].count = modp::sub(cells_[i].count, other.cells_[i].count);
    cells_[i].isum = modp::sub(cells_[i].isum, other.cells_[i].isum);
    cells_[i].fp = modp::sub(cells_[i].fp, other.cells_[i].fp);
  }
}

bool L0Sketch::zero_state() const {
  for (const SketchCell& c : cells_)
    if (!c.zero()) return false;
  return true;
}

L0Sample L0Sketch::sample() const {
  // Level 0 holds the full vector's aggregate; all reps agree there.
  if (cells_[0].zero()) return {DecodeStatus::kEmpty, 0, 0};
  for (int r = 0; r < reps_; ++r) {
    for (int l = levels_ - 1; l >= 0; --l) {
      const SketchCell& c = cells_[static_cast<std::size_t>(r) * levels_ + l];
      if (c.zero() || c.count == 0) continue;
      std::uint64_t idx = modp::mul(c.isum, modp::inv(c.count));
      if (idx >= dim_) continue;
      if (c.fp != modp::mul(c.count, modp::pow(gen_, idx))) continue;
      if (membership_depth(r, idx) <= l) continue;
      return {DecodeStatus::kOk, idx, modp::to_signed(c.count)};
    }
  }
  return {DecodeStatus::kFail, 0, 0};
}

std::vector<std::uint64_t> L0Sketch::serialize() const {
  std::vector<std::uint64_t> out;
  out.reserve(word_count());
  out.push_back(1);  // kind
  out.push_back(dim_);
  out.push_back(static_cast<std::uint64_t>(reps_));
  out.push_back(seed_.lineage);
  for (const SketchCell& c : cells_) {
    out.push_back(c.count);
    out.push_back(c.isum);
    out.push_back(c.fp);
  }
  return out;
}

// ---------------------------------------------------------------------------
// SparseRecoverySketch

SparseRecoverySketch::SparseRecoverySketch(std::uint64_t dim,
                                           std::uint64_t budget,
                                           SketchSeed seed)
    : dim_(dim), budget_(budget), seed_(seed) {
  if (dim == 0)
    throw std::invalid_argument("SparseRecoverySketch: dim must be positive");
  if (budget == 0)
    throw std::invalid_argument("SparseRecoverySketch: budget must be >= 1");
  cols_ = std::max<std::uint64_t>(2 * budget, 2);
  std::uint64_t st = seed.lineage ^ (dim * 0xc2b2ae3d27d4eb4full) ^
                     (budget * 0x165667b19e3779f9ull);
  gen_ = 2 + draw_residue(st) % (kSketchPrime - 3);
  ha_.resize(kRows);
  hb_.resize(kRows);
  for (int r = 0; r < kRows; ++r) {
    ha_[r] = draw_mult(st);
    hb_[r] = draw_residue(st);
  }
}

void SparseRecoverySketch::bump(std::uint64_t gidx, const SketchCell& delta,
                                bool negate) {
  SketchCell& c = cells_[gidx];
  if (negate) {
    c.count = modp::sub(c.count, delta.count);
    c.isum = modp::sub(c.isum, delta.isum);
    c.fp = modp::sub(c.fp, delta.fp);
  } else {
    c.count = modp::add(c.count, delta.count);
    c.isum = modp::add(c.isum, delta.isum);
    c.fp = modp::add(c.fp, delta.fp);
  }
  if (c.zero()) cells_.erase(gidx);
}

std::uint64_t SparseRecoverySketch::bucket(int row, std::uint64_t coord) const {
  return modp::add(modp::mul(ha_[row], coord % kSketchPrime), hb_[row]) % cols_;
}

void SparseRecoverySketch::update_residue(std::uint64_t coord,
                                          std::uint64_t residue) {
  if (coord >= dim_)
    throw std::invalid_argument(
        "SparseRecoverySketch::update: coordinate out of range");
  if (residue == 0) return;
  std::uint64_t is = modp::mul(residue, coord % kSketchPrime);
  std::uint64_t f = modp::mul(residue, modp::pow(gen_, coord));
  SketchCell d{residue, is, f};
  for (int r = 0; r < kRows; ++r)
    bump(static_cast<std::uint64_t>(r) * cols_ + bucket(r, coord), d, false);
}

void SparseRecoverySketch::update(std::uint64_t coord, std::int64_t delta) {
  update_residue(coord, modp::from_signed(delta));
}

bool SparseRecoverySketch::compatible(
    const SparseRecoverySketch& other) const {
  return dim_ == other.dim_ && budget_ == other.budget_ &&
         seed_.lineage == other.seed_.lineage;
}

void SparseRecoverySketch::merge(const SparseRecoverySketch& other) {
  if (!compatible(other))
    throw std::invalid_argument("SparseRecoverySketch::merge: mismatch");
  for (const auto& [gidx, c] : other.cells_) bump(gidx, c, false);
}

void SparseRecoverySketch::subtract(const SparseRecoverySketch& other) {
  if (!compatible(other))
    throw std::invalid_argument("SparseRecoverySketch::subtract: mismatch");
  for (const auto& [gidx, c] : other.cells_) bump(gidx, c, true);
}

bool SparseRecoverySketch::zero_state() const { return cells_.empty(); }

SparseRecoverySketch::RawDecode SparseRecoverySketch::raw_decode() const {
  RawDecode out;
  if (zero_state()) {
    out.status = DecodeStatus::kEmpty;
    return out;
  }
  std::unordered_map<std::uint64_t, SketchCell> work = cells_;
  std::unordered_map<std::uint64_t, std::uint64_t> found;
  std::deque<std::uint64_t> queue;
  std::unordered_map<std::uint64_t, char> queued;
  for (const auto& [gidx, c] : work) {
    queue.push_back(gidx);
    queued[gidx] = 1;
  }

  while (!queue.empty()) {
    std::uint64_t ci = queue.front();
    queue.pop_front();
    queued[ci] = 0;
    auto wit = work.find(ci);
    if (wit == work.end()) continue;
    const SketchCell cell = wit->second;
    if (cell.zero() || cell.count == 0) continue;
    std::uint64_t idx = modp::mul(cell.isum, modp::inv(cell.count));
    if (idx >= dim_) continue;
    if (cell.fp != modp::mul(cell.count, modp::pow(gen_, idx))) continue;
    int row = static_cast<int>(ci / cols_);
    if (bucket(row, idx) != ci % cols_) continue;
    // Peel idx (value = cell.count) out of every row.
    std::uint64_t val = cell.count;
    std::uint64_t is = modp::mul(val, idx % kSketchPrime);
    std::uint64_t f = modp::mul(val, modp::pow(gen_, idx));
    for (int r = 0; r < kRows; ++r) {
      std::uint64_t j = static_cast<std::uint64_t>(r) * cols_ + bucket(r, idx);
      SketchCell& w = work[j];
      w.count = modp::sub(w.count, val);
      w.isum = modp::sub(w.isum, is);
      w.fp = modp::sub(w.fp, f);
      if (w.zero()) work.erase(j);
      if (!queued[j]) {
        queued[j] = 1;
        queue.push_back(j);
      }
    }
    auto [it, fresh] = found.emplace(idx, val);
    if (!fresh) it->second = modp::add(it->second, val);
  }

  if (!work.empty() || found.size() > budget_) {
    out.status = DecodeStatus::kOverflow;
    return out;
  }
  out.status = DecodeStatus::kOk;
  out.entries.assign(found.begin(), found.end());
  std::sort(out.entries.begin(), out.entries.end());
  return out;
}

SparseDecodeResult SparseRecoverySketch::decode() const {
  RawDecode raw = raw_decode();
  SparseDecodeResult out;
  out.status = raw.status;
  for (const auto& [idx, res] : raw.entries)
    out.entries.push_back({idx, modp::to_signed(res)});
  return out;
}

std::vector<std::uint64_t> SparseRecoverySketch::serialize() const {
  std::vector<std::uint64_t> out;
  out.reserve(word_count());
  out.push_back(2);  // kind
  out.push_back(dim_);
  out.push_back(budget_);
  out.push_back(seed_.lineage);
  static const SketchCell kZero{};
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(kRows) * cols_;
       ++i) {
    auto it = cells_.find(i);
    const SketchCell& c = it == cells_.end() ? kZero : it->second;
    out.push_back(c.count);
    out.push_back(c.isum);
    out.push_back(c.fp);
  }
  return out;
}

// ---------------------------------------------------------------------------
// SubsetSketch

SubsetSketch::SubsetSketch(std::uint64_t dim, std::uint32_t parts,
                           PartFn part_of, std::uint64_t part_budget,
                           SketchSeed seed, int reps)
    : dim_(dim),
      parts_(parts),
      part_of_(std::move(part_of)),
      seed_(seed),
      proto_(dim, SketchSeed::derive(seed.seed, seed.lineage ^ 0xa5a5), reps),
      wrap_(std::max<std::uint64_t>(1, parts) * proto_.cells_.size() * 3,
            std::max<std::uint64_t>(1, part_budget) * proto_.cells_.size() * 3,
            SketchSeed::derive(seed.seed, seed.lineage ^ 0x5a5a)) {
  if (parts == 0)
    throw std::invalid_argument("SubsetSketch: parts must be >= 1");
}

void SubsetSketch::update(std::uint64_t coord, std::int64_t delta) {
  if (coord >= dim_)
    throw std::invalid_argument("SubsetSketch::update: coord out of range");
  std::uint32_t q = part_of_(coord);
  if (q >= parts_)
    throw std::invalid_argument("SubsetSketch::update: part out of range");
  std::uint64_t d = modp::from_signed(delta);
  if (d == 0) return;
  std::uint64_t is = modp::mul(d, coord % kSketchPrime);
  std::uint64_t f = modp::mul(d, modp::pow(proto_.gen_, coord));
  std::size_t nlev = static_cast<std::size_t>(proto_.levels_);
  std::uint64_t base =
      static_cast<std::uint64_t>(q) * proto_.cells_.size() * 3;
  for (int r = 0; r < proto_.reps_; ++r) {
    int depth = proto_.membership_depth(r, coord);
    for (int l = 0; l < depth; ++l) {
      std::uint64_t cell = static_cast<std::uint64_t>(r) * nlev + l;
      wrap_.update_residue(base + cell * 3 + 0, d);
      wrap_.update_residue(base + cell * 3 + 1, is);
      wrap_.update_residue(base + cell * 3 + 2, f);
    }
  }
}

SubsetRecoverResult SubsetSketch::recover() const {
  SubsetRecoverResult out;
  SparseRecoverySketch::RawDecode raw = wrap_.raw_decode();
  out.raw_status = raw.status;
  if (raw.status == DecodeStatus::kEmpty) {
    out.status = DecodeStatus::kOk;
    return out;
  }
  if (raw.status != DecodeStatus::kOk) {
    out.status = DecodeStatus::kFail;
    return out;
  }
  std::size_t per_part = proto_.cells_.size() * 3;
  std::unordered_map<std::uint32_t, L0Sketch> per;
  for (const auto& [idx, res] : raw.entries) {
    std::uint32_t q = static_cast<std::uint32_t>(idx / per_part);
    std::size_t rem = idx % per_part;
    auto [it, fresh] = per.emplace(q, proto_);
    SketchCell& c = it->second.cells_[rem / 3];
    switch (rem % 3) {
      case 0: c.count = res; break;
      case 1: c.isum = res; break;
      default: c.fp = res; break;
    }
  }
  out.status = DecodeStatus::kOk;
  for (auto& [q, sk] : per) {
    L0Sample s = sk.sample();
    if (s.status == DecodeStatus::kOk)
      out.coords.push_back(s.index);
    else if (s.status != DecodeStatus::kEmpty)
      out.status = DecodeStatus::kFail;
  }
  std::sort(out.coords.begin(), out.coords.end());
  return out;
}

// ---------------------------------------------------------------------------
// EdgeProbeSketch

EdgeProbeSketch::EdgeProbeSketch(std::uint64_t n,
                                 std::vector<std::uint32_t> side_a,
                                 std::vector<std::uint32_t> side_b,
                                 SketchSeed seed, std::uint64_t all_budget)
    : n_(n),
      mask_(n, 0),
      single_(n * n, SketchSeed::derive(seed.seed, seed.lineage ^ 0x11)) {
  for (std::uint32_t v : side_a) {
    if (v >= n_) throw std::invalid_argument("EdgeProbeSketch: vertex range");
    mask_[v] = 1;
  }
  for (std::uint32_t v : side_b) {
    if (v >= n_) throw std::invalid_argument("EdgeProbeSketch: vertex range");
    if (mask_[v] != 0)
      throw std::invalid_argument("EdgeProbeSketch: sets must be disjoint");
    mask_[v] = 2;
  }
  if (all_budget > 0)
    all_.emplace_back(n * n, all_budget,
                      SketchSeed::derive(seed.seed, seed.lineage ^ 0x22));
}

bool EdgeProbeSketch::crossing(std::uint32_t u, std::uint32_t v) const {
  return (mask_[u] == 1 && mask_[v] == 2) || (mask_[u] == 2 && mask_[v] == 1);
}

void EdgeProbeSketch::update(std::uint32_t u, std::uint32_t v,
                             std::int64_t delta) {
  if (u >= n_ || v >= n_)
    throw std::invalid_argument("EdgeProbeSketch::update: vertex range");
  if (!crossing(u, v)) return;
  std::uint64_t coord = pair_index(u, v, n_);
  single_.update(coord, delta);
  if (!all_.empty()) all_[0].update(coord, delta);
}

EdgeProbeResult EdgeProbeSketch::edge_between() const {
  L0Sample s = single_.sample();
  EdgeProbeResult out;
  out.status = s.status;
  if (s.status == DecodeStatus::kOk) {
    auto [u, v] = pair_from_index(s.index, n_);
    out.u = u;
    out.v = v;
  }
  return out;
}

EdgeProbeSketch::AllEdges EdgeProbeSketch::edges_between() const {
  AllEdges out;
  if (all_.empty()) {
    out.status = DecodeStatus::kFail;
    return out;
  }
  SparseDecodeResult d = all_[0].decode();
  out.status = d.status == DecodeStatus::kEmpty ? DecodeStatus::kOk : d.status;
  if (d.status == DecodeStatus::kOk)
    for (const SparseEntry& e : d.entries)
      out.edges.push_back(pair_from_index(e.index, n_));
  return out;
}

std::size_t EdgeProbeSketch::word_count() const {
  std::size_t w = single_.word_count();
  if (!all_.empty()) w += all_[0].word_count();
  return w;
}

}  // namespace spanstream
