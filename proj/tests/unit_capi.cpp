// Exercises the shared-library surface only: opaque handles, status codes,
// ss_last_error. No C++ core headers here.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <spanstream.h>

namespace {

std::string report_json(const ss_report* r) {
  size_t len = 0;
  REQUIRE(ss_report_json(r, nullptr, 0, &len) == SS_OK);  // sizing call
  std::vector<char> buf(len + 1);
  REQUIRE(ss_report_json(r, buf.data(), buf.size(), &len) == SS_OK);
  return std::string(buf.data(), len);
}

}  // namespace

TEST_CASE("graph handle lifecycle and file round trip") {
  ss_graph* g = nullptr;
  REQUIRE(ss_graph_new(5, &g) == SS_OK);
  CHECK(ss_graph_add_edge(g, 0, 1) == SS_OK);
  CHECK(ss_graph_add_edge(g, 1, 2) == SS_OK);
  CHECK(ss_graph_add_edge(g, 9, 1) == SS_EINVAL);
  CHECK(std::strlen(ss_last_error()) > 0);

  size_t n = 0, m = 0;
  CHECK(ss_graph_n(g, &n) == SS_OK);
  CHECK(ss_graph_m(g, &m) == SS_OK);
  CHECK(n == 5);
  CHECK(m == 2);

  const char* path = "capi_graph.tmp";
  REQUIRE(ss_graph_save(g, path) == SS_OK);
  ss_graph* back = nullptr;
  REQUIRE(ss_graph_load(path, &back) == SS_OK);
  CHECK(ss_graph_m(back, &m) == SS_OK);
  CHECK(m == 2);
  ss_graph_free(back);
  ss_graph_free(g);
  std::remove(path);

  CHECK(ss_graph_load("does_not_exist.tmp", &back) == SS_EIO);
}

TEST_CASE("generators and stream round trip") {
  ss_graph* g = nullptr;
  REQUIRE(ss_gen_gnp(40, 0.2, 7, &g) == SS_OK);
  ss_stream* s = nullptr;
  REQUIRE(ss_to_stream(g, 0.25, 8, &s) == SS_OK);
  size_t n = 0, events = 0, m = 0;
  CHECK(ss_stream_n(s, &n) == SS_OK);
  CHECK(ss_stream_events(s, &events) == SS_OK);
  CHECK(ss_graph_m(g, &m) == SS_OK);
  CHECK(n == 40);
  CHECK(events > m);

  ss_graph* mat = nullptr;
  REQUIRE(ss_graph_materialize(s, &mat) == SS_OK);
  size_t mm = 0;
  CHECK(ss_graph_m(mat, &mm) == SS_OK);
  CHECK(mm == m);

  const char* path = "capi_stream.tmp";
  REQUIRE(ss_stream_save(s, path) == SS_OK);
  ss_stream* back = nullptr;
  REQUIRE(ss_stream_load(path, &back) == SS_OK);
  size_t e2 = 0;
  CHECK(ss_stream_events(back, &e2) == SS_OK);
  CHECK(e2 == events);
  ss_stream_free(back);
  std::remove(path);

  ss_graph_free(mat);
  ss_stream_free(s);
  ss_graph_free(g);
}

TEST_CASE("layered generators") {
  ss_graph* g = nullptr;
  REQUIRE(ss_gen_layered_custom(4, 5, &g) == SS_OK);
  size_t n = 0, m = 0;
  CHECK(ss_graph_n(g, &n) == SS_OK);
  CHECK(ss_graph_m(g, &m) == SS_OK);
  CHECK(n == 22);
  CHECK(m == 73);
  ss_graph_free(g);
  CHECK(ss_gen_cut_bad(2, &g) == SS_EINVAL);
}

TEST_CASE("bs run through the C surface") {
  ss_graph* g = nullptr;
  REQUIRE(ss_gen_gnp(48, 0.15, 11, &g) == SS_OK);
  ss_stream* s = nullptr;
  REQUIRE(ss_to_stream(g, 0.2, 12, &s) == SS_OK);

  ss_graph* spanner = nullptr;
  ss_report* rep = nullptr;
  REQUIRE(ss_run_bs(s, 2, 31, &spanner, &rep) == SS_OK);

  double passes = 0, verified = 0, stretch = 0;
  CHECK(ss_report_value(rep, "passes", &passes) == SS_OK);
  CHECK(ss_report_value(rep, "verified", &verified) == SS_OK);
  CHECK(ss_report_value(rep, "max_stretch", &stretch) == SS_OK);
  CHECK(passes == 2.0);
  CHECK(verified == 1.0);
  CHECK(stretch <= 3.0);
  CHECK(ss_report_value(rep, "no_such_field", &stretch) == SS_EINVAL);

  int64_t ms = 0;
  uint32_t witness[2] = {0, 0};
  CHECK(ss_verify_spanner(g, spanner, &ms, witness) == SS_OK);
  CHECK(static_cast<double>(ms) <= 3.0);

  // report JSON must parse back and re-serialize identically
  std::string json = report_json(rep);
  ss_report* parsed = nullptr;
  REQUIRE(ss_report_parse(json.c_str(), &parsed) == SS_OK);
  CHECK(report_json(parsed) == json);
  ss_report_free(parsed);

  ss_report_free(rep);
  ss_graph_free(spanner);
  ss_stream_free(s);
  ss_graph_free(g);
}

TEST_CASE("verify rejects non-subgraphs") {
  ss_graph *g = nullptr, *h = nullptr;
  REQUIRE(ss_graph_new(4, &g) == SS_OK);
  REQUIRE(ss_graph_new(4, &h) == SS_OK);
  REQUIRE(ss_graph_add_edge(g, 0, 1) == SS_OK);
  REQUIRE(ss_graph_add_edge(h, 2, 3) == SS_OK);
  int64_t ms = 0;
  uint32_t w[2];
  CHECK(ss_verify_spanner(g, h, &ms, w) == SS_EINVAL);
  ss_graph_free(h);
  ss_graph_free(g);
}

TEST_CASE("closed forms through the C surface") {
  int64_t stretch = 0;
  size_t passes = 0;
  CHECK(ss_stretch_bound(7, 1, 0, &stretch) == SS_OK);
  CHECK(stretch == 29);
  CHECK(ss_pass_bound(7, 1, 1, &passes) == SS_OK);
  CHECK(passes == 4);
  double t = 0;
  CHECK(ss_regime_threshold(400, 2, "ldd", &t) == SS_OK);
  CHECK(t > 0);
  CHECK(ss_regime_threshold(400, 2, "bogus", &t) == SS_EINVAL);
}

TEST_CASE("filter and scm entry points") {
  ss_graph* g = nullptr;
  REQUIRE(ss_gen_gnp(40, 0.2, 13, &g) == SS_OK);
  ss_graph* spanner = nullptr;
  ss_report* rep = nullptr;
  REQUIRE(ss_run_filter(g, 8.0, 2, 17, &spanner, &rep) == SS_OK);
  double rounds = 0;
  CHECK(ss_report_value(rep, "rounds", &rounds) == SS_OK);
  CHECK(rounds >= 1.0);
  ss_report_free(rep);
  ss_graph_free(spanner);

  REQUIRE(ss_run_scm(g, 0.5, 1, 19, &spanner, &rep) == SS_OK);
  double bits = 0;
  CHECK(ss_report_value(rep, "max_bits_per_player_per_round", &bits) == SS_OK);
  CHECK(bits > 0);
  ss_report_free(rep);
  ss_graph_free(spanner);
  ss_graph_free(g);
}

TEST_CASE("null arguments are EINVAL not crashes") {
  CHECK(ss_graph_new(4, nullptr) == SS_EINVAL);
  CHECK(ss_stream_load(nullptr, nullptr) == SS_EINVAL);
  CHECK(ss_report_parse("{}", nullptr) == SS_EINVAL);
}
