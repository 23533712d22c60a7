#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spanstream/report.hpp"

using namespace spanstream;

TEST_CASE("run report JSON round trip") {
  RunReport r;
  r.algo = "bs";
  r.params = {{"k", 3.0}, {"seed", 41.0}};
  r.scheme = "bs";
  r.regime = "";
  r.n = 128;
  r.m = 800;
  r.passes = 3;
  r.rounds = 0;
  r.spanner_edges = 301;
  r.max_stretch = 5;
  r.witness_edge = Edge(4, 99);
  r.declared_bound = 5;
  r.peak_words = 12345;
  r.max_bits_per_player_per_round = 0;
  r.space_accounting = "exact";
  r.wall_ms = 17.25;
  r.verified = true;

  std::string json = r.to_json();
  RunReport back = RunReport::from_json(json);
  CHECK(back.to_json() == json);
  CHECK(back.algo == "bs");
  CHECK(back.params.at("k") == 3.0);
  CHECK(back.n == 128);
  CHECK(back.passes == 3);
  CHECK(back.max_stretch == 5);
  CHECK(back.witness_edge == Edge(4, 99));
  CHECK(back.declared_bound == 5);
  CHECK(back.wall_ms == 17.25);
  CHECK(back.verified);
}

TEST_CASE("report serialization is stable across field mutation order") {
  RunReport a, b;
  a.algo = b.algo = "kw";
  b.verified = a.verified = false;
  a.params["alpha"] = 0.5;
  a.params["seed"] = 1.0;
  b.params["seed"] = 1.0;
  b.params["alpha"] = 0.5;
  CHECK(a.to_json() == b.to_json());
}

TEST_CASE("malformed report JSON is rejected") {
  CHECK_THROWS(RunReport::from_json("not json"));
  CHECK_THROWS(RunReport::from_json("{\"algo\": 7}"));
}

TEST_CASE("regression store serves frozen keys") {
  CHECK(RegressionStore::bound("gnp/sparsifier/stretch_c").has_value());
  CHECK(RegressionStore::bound("bs/space/words_c").has_value());
  CHECK(!RegressionStore::bound("nope/nope/nope").has_value());
}
