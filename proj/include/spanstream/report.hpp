#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "spanstream/graph.hpp"

namespace spanstream {

// Metered outcome of one algorithm run. Serializes to a stable JSON schema;
// two runs from the same (stream, seed) produce byte-identical JSON except
// for wall_ms.
struct RunReport {
  std::string algo;
  std::map<std::string, double> params;  // k, g, alpha, t, seed, ...
  std::string scheme;                    // "", "kw", "bs"
  std::string regime;                    // "", "resistance", "ldd"
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t passes = 0;
  std::size_t rounds = 0;
  std::size_t spanner_edges = 0;
  std::int64_t max_stretch = 0;
  Edge witness_edge;
  std::int64_t declared_bound = -1;  // -1 when only a regression bound applies
  std::size_t peak_words = 0;
  std::size_t max_bits_per_player_per_round = 0;
  // "charged" when the space/communication figure is the cited budget of a
  // black-box subroutine, "exact" when it is a serialized-sketch measurement.
  std::string space_accounting = "exact";
  double wall_ms = 0.0;
  bool verified = false;

  std::string to_json() const;
  static RunReport from_json(const std::string& text);
};

// Frozen regression constants for the polylog-laden bounds: calibrated once,
// then asserted in CI. Bounds only tighten manually.
class RegressionStore {
 public:
  // Key format "<family>/<algo>/<metric>".
  static std::optional<double> bound(const std::string& key);
};

}  // namespace spanstream
