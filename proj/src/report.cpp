#include "spanstream/report.hpp"

#include <json.hpp>

namespace spanstream {

using nlohmann::json;

std::string RunReport::to_json() const {
  json j;
  j["algo"] = algo;
  j["params"] = params;
  j["scheme"] = scheme;
  j["regime"] = regime;
  j["n"] = n;
  j["m"] = m;
  j["passes"] = passes;
  j["rounds"] = rounds;
  j["spanner_edges"] = spanner_edges;
  j["max_stretch"] = max_stretch;
  j["witness_edge"] = {witness_edge.u, witness_edge.v};
  j["declared_bound"] = declared_bound;
  j["peak_words"] = peak_words;
  j["max_bits_per_player_per_round"] = max_bits_per_player_per_round;
  j["space_accounting"] = space_accounting;
  j["wall_ms"] = wall_ms;
  j["verified"] = verified;
  return j.dump(2);
}

RunReport RunReport::from_json(const std::string& text) {
  json j = json::parse(text);
  RunReport r;
  r.algo = j.at("algo").get<std::string>();
  r.params = j.at("params").get<std::map<std::string, double>>();
  r.scheme = j.at("scheme").get<std::string>();
  r.regime = j.at("regime").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  r.m = j.at("m").get<std::size_t>();
  r.passes = j.at("passes").get<std::size_t>();
  r.rounds = j.at("rounds").get<std::size_t>();
  r.spanner_edges = j.at("spanner_edges").get<std::size_t>();
  r.max_stretch = j.at("max_stretch").get<std::int64_t>();
  auto we = j.at("witness_edge");
  if (we[0] != we[1]) r.witness_edge = Edge(we[0].get<Vertex>(), we[1].get<Vertex>());
  r.declared_bound = j.at("declared_bound").get<std::int64_t>();
  r.peak_words = j.at("peak_words").get<std::size_t>();
  r.max_bits_per_player_per_round =
      j.at("max_bits_per_player_per_round").get<std::size_t>();
  r.space_accounting = j.at("space_accounting").get<std::string>();
  r.wall_ms = j.at("wall_ms").get<double>();
  r.verified = j.at("verified").get<bool>();
  return r;
}

namespace {
// Calibration protocol: each constant was measured once on the seed set
// {1..20} at the sizes named in the tests, then frozen with headroom 2x.
// Tighten manually only.
const std::map<std::string, double> kFrozenBounds = {
    {"gnp/sparsifier/stretch_c", 0.001},     // stretch <= c*n^(2/3)*log2(n)^2
    {"sparse/sparsifier/stretch_sqrtm_c", 0.01},  // stretch <= c*sqrt(m)*log2(n)
    {"gnp/tradeoff/stretch_c", 0.004},     // stretch <= c*(n^(1-a))^(2/3)*log2^2
    {"gnp/tradeoff/edges_c", 0.006},       // edges <= c*n^(1+a)*log2(n)^2
    {"gnp/sparse-tradeoff/stretch_c", 0.005},  // stretch <= c*sqrt(m)*n^-a*log2^2
    {"bs/space/words_c", 700.0},           // peak <= c*n^(1+1/k)*log2(n)^3
    {"scm/comm/bits_c", 2300.0},           // bits/player/round <= c*n^a*log2(n)^3
    {"scm/stretch/one_round_c", 0.005},    // stretch <= c*(n^(1-a))^(2/3)*log2^2
    {"filter/resistance/t_c", 4.0},        // t = c*n^((g+1)/(2g+1))*log2(n)^0
    {"sparsify/resistance/cube_c", 1e4},   // R >= c*s^3/(n^2*log2(n)^2)
    {"sparsify/resistance/square_c", 50.0},  // R >= c*s^2/(m*log2(n))
};
}  // namespace

std::optional<double> RegressionStore::bound(const std::string& key) {
  auto it = kFrozenBounds.find(key);
  if (it == kFrozenBounds.end()) return std::nullopt;
  return it->second;
}

}  // namespace spanstream
