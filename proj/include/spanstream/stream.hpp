#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spanstream/graph.hpp"

namespace spanstream {

enum class StreamOp : std::uint8_t { kInsert, kDelete };

struct UpdateEvent {
  StreamOp op;
  Edge edge;
};

// Replayable dynamic edge stream over a fixed vertex set. A DELETE may only
// target a currently live edge; final multiplicities are 0/1. Violations are
// rejected at construction.
class StreamSource {
 public:
  StreamSource(std::size_t n, std::vector<UpdateEvent> events);

  std::size_t n() const { return n_; }
  const std::vector<UpdateEvent>& events() const { return events_; }

  // Final graph after all insertions and deletions.
  UnweightedGraph materialize() const;

  static StreamSource from_graph(const UnweightedGraph& g);
  static StreamSource load(const std::string& path);
  void save(const std::string& path) const;
  void write(std::ostream& os) const;
  static StreamSource read(std::istream& is);

 private:
  std::size_t n_;
  std::vector<UpdateEvent> events_;
};

struct PassMeter {
  std::size_t passes = 0;
};

// Space is counted in machine words of state retained across pass
// boundaries; transient per-event work is not charged.
struct SpaceMeter {
  std::size_t peak_words = 0;
  void checkpoint(std::size_t retained_words) {
    peak_words = std::max(peak_words, retained_words);
  }
};

struct Meters {
  PassMeter pass;
  SpaceMeter space;
};

// Delivers every event in order to `consumer`, then charges one pass.
void open_pass(const StreamSource& src, Meters& meters,
               const std::function<void(const UpdateEvent&)>& consumer);

// Several pipeline stages sharing one physical pass (the fused pass of the
// recursive constructions). The pass is counted once.
void open_fused_pass(
    const StreamSource& src, Meters& meters,
    const std::vector<std::function<void(const UpdateEvent&)>>& stages);

}  // namespace spanstream
