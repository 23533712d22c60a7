// extern-C surface over the core library. Every entry traps exceptions and
// maps them to status codes; handle structs just own the C++ objects.
#include "spanstream.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "spanstream/graph.hpp"
#include "spanstream/instances.hpp"
#include "spanstream/report.hpp"
#include "spanstream/simcomm.hpp"
#include "spanstream/spanner_multipass.hpp"
#include "spanstream/spanner_one_pass.hpp"
#include "spanstream/stream.hpp"

using namespace spanstream;

struct ss_stream {
  StreamSource src;
};
struct ss_graph {
  UnweightedGraph g;
};
struct ss_report {
  RunReport r;
};

namespace {

thread_local std::string g_last_error;

ss_status fail(ss_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

// RANDOMNESS_EXHAUSTED / BUDGET_EXCEEDED and friends surface as runtime
// errors from the core; bad parameters as invalid_argument.
template <typename Fn>
ss_status guarded(Fn&& fn) {
  try {
    fn();
    return SS_OK;
  } catch (const std::invalid_argument& e) {
    return fail(SS_EINVAL, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(SS_EIO, e.what());
  } catch (const std::exception& e) {
    return fail(SS_EFAIL, e.what());
  }
}

ss_status emit(SpannerResult&& res, ss_graph** spanner, ss_report** report) {
  if (spanner) *spanner = new ss_graph{std::move(res.spanner)};
  if (report) *report = new ss_report{std::move(res.report)};
  return SS_OK;
}

}  // namespace

extern "C" {

const char* ss_last_error(void) { return g_last_error.c_str(); }

/* ---- streams ---- */

ss_status ss_stream_load(const char* path, ss_stream** out) {
  if (!path || !out) return fail(SS_EINVAL, "null argument");
  return guarded([&] { *out = new ss_stream{StreamSource::load(path)}; });
}

ss_status ss_stream_save(const ss_stream* s, const char* path) {
  if (!s || !path) return fail(SS_EINVAL, "null argument");
  return guarded([&] { s->src.save(path); });
}

ss_status ss_stream_from_graph(const ss_graph* g, ss_stream** out) {
  if (!g || !out) return fail(SS_EINVAL, "null argument");
  return guarded([&] { *out = new ss_stream{StreamSource::from_graph(g->g)}; });
}

ss_status ss_stream_n(const ss_stream* s, size_t* out) {
  if (!s || !out) return fail(SS_EINVAL, "null argument");
  *out = s->src.n();
  return SS_OK;
}

ss_status ss_stream_events(const ss_stream* s, size_t* out) {
  if (!s || !out) return fail(SS_EINVAL, "null argument");
  *out = s->src.events().size();
  return SS_OK;
}

void ss_stream_free(ss_stream* s) { delete s; }

/* ---- graphs ---- */

ss_status ss_graph_new(size_t n, ss_graph** out) {
  if (!out) return fail(SS_EINVAL, "null argument");
  return guarded([&] { *out = new ss_graph{UnweightedGraph(n)}; });
}

ss_status ss_graph_add_edge(ss_graph* g, uint32_t u, uint32_t v) {
  if (!g) return fail(SS_EINVAL, "null argument");
  return guarded([&] { g->g.add_edge(u, v); });
}

ss_status ss_graph_materialize(const ss_stream* s, ss_graph** out) {
  if (!s || !out) return fail(SS_EINVAL, "null argument");
  return guarded([&] { *out = new ss_graph{s->src.materialize()}; });
}

ss_status ss_graph_n(const ss_graph* g, size_t* out) {
  if (!g || !out) return fail(SS_EINVAL, "null argument");
  *out = g->g.n();
  return SS_OK;
}

ss_status ss_graph_m(const ss_graph* g, size_t* out) {
  if (!g || !out) return fail(SS_EINVAL, "null argument");
  *out = g->g.m();
  return SS_OK;
}

ss_status ss_graph_save(const ss_graph* g, const char* path) {
  if (!g || !path) return fail(SS_EINVAL, "null argument");
  std::ofstream os(path);
  if (!os) return fail(SS_EIO, std::string("cannot open ") + path);
  os << "graph " << g->g.n() << "\n";
  for (const Edge& e : g->g.edges()) os << e.u << " " << e.v << "\n";
  if (!os) return fail(SS_EIO, std::string("write failed: ") + path);
  return SS_OK;
}

ss_status ss_graph_load(const char* path, ss_graph** out) {
  if (!path || !out) return fail(SS_EINVAL, "null argument");
  std::ifstream is(path);
  if (!is) return fail(SS_EIO, std::string("cannot open ") + path);
  std::string tag;
  size_t n = 0;
  if (!(is >> tag >> n) || tag != "graph")
    return fail(SS_EINVAL, std::string("bad graph header in ") + path);
  return guarded([&] {
    UnweightedGraph g(n);
    uint32_t u, v;
    while (is >> u >> v) g.add_edge(u, v);
    *out = new ss_graph{std::move(g)};
  });
}

void ss_graph_free(ss_graph* g) { delete g; }

/* ---- generators ---- */

ss_status ss_gen_gnp(size_t n, double p, uint64_t seed, ss_graph** out) {
  if (!out) return fail(SS_EINVAL, "null argument");
  return guarded([&] { *out = new ss_graph{gnp(n, p, seed)}; });
}

ss_status ss_gen_layered(size_t n, ss_graph** out) {
  if (!out) return fail(SS_EINVAL, "null argument");
  return guarded(
      [&] { *out = new ss_graph{layered_instance(n).graph}; });
}

ss_status ss_gen_layered_custom(size_t a, size_t layers, ss_graph** out) {
  if (!out) return fail(SS_EINVAL, "null argument");
  return guarded(
      [&] { *out = new ss_graph{layered_custom(a, layers).graph}; });
}

ss_status ss_gen_cut_bad(size_t n, ss_graph** out) {
  if (!out) return fail(SS_EINVAL, "null argument");
  return guarded(
      [&] { *out = new ss_graph{cut_bad_instance(n).graph}; });
}

ss_status ss_gen_hard(size_t n, size_t d, uint64_t seed, ss_graph** out) {
  if (!out) return fail(SS_EINVAL, "null argument");
  return guarded(
      [&] { *out = new ss_graph{conjectured_hard(n, d, seed).graph}; });
}

ss_status ss_to_stream(const ss_graph* g, double deletion_ratio,
                       uint64_t seed, ss_stream** out) {
  if (!g || !out) return fail(SS_EINVAL, "null argument");
  return guarded(
      [&] { *out = new ss_stream{to_stream(g->g, deletion_ratio, seed)}; });
}

/* ---- algorithms ---- */

ss_status ss_run_sparsifier(const ss_stream* s, uint64_t seed,
                            ss_graph** spanner, ss_report** report) {
  if (!s) return fail(SS_EINVAL, "null argument");
  return guarded([&] {
    SparsifierParams params;
    params.seed = seed;
    emit(sparsifier_spanner(s->src, params), spanner, report);
  });
}

ss_status ss_run_tradeoff(const ss_stream* s, double alpha, uint64_t seed,
                          ss_graph** spanner, ss_report** report) {
  if (!s) return fail(SS_EINVAL, "null argument");
  return guarded([&] {
    SparsifierParams params;
    params.seed = seed;
    emit(tradeoff_spanner(s->src, alpha, params), spanner, report);
  });
}

ss_status ss_run_sparse_tradeoff(const ss_stream* s, double alpha,
                                 uint64_t seed, ss_graph** spanner,
                                 ss_report** report) {
  if (!s) return fail(SS_EINVAL, "null argument");
  return guarded([&] {
    SparsifierParams params;
    params.seed = seed;
    emit(sparse_tradeoff_spanner(s->src, alpha, params), spanner, report);
  });
}

ss_status ss_run_bs(const ss_stream* s, int k, uint64_t seed,
                    ss_graph** spanner, ss_report** report) {
  if (!s) return fail(SS_EINVAL, "null argument");
  return guarded([&] { emit(baswana_sen(s->src, k, seed), spanner, report); });
}

ss_status ss_run_kw(const ss_stream* s, int k, uint64_t seed,
                    ss_graph** spanner, ss_report** report) {
  if (!s) return fail(SS_EINVAL, "null argument");
  return guarded(
      [&] { emit(kapralov_woodruff(s->src, k, seed), spanner, report); });
}

ss_status ss_run_recursive(const ss_stream* s, double k, int g, int use_bs,
                           uint64_t seed, ss_graph** spanner,
                           ss_report** report) {
  if (!s) return fail(SS_EINVAL, "null argument");
  return guarded([&] {
    Scheme scheme = use_bs ? Scheme::kBS : Scheme::kKW;
    emit(recursive_spanner(s->src, k, g, scheme, seed), spanner, report);
  });
}

ss_status ss_run_filter(const ss_graph* g, double t, int rounds,
                        uint64_t seed, ss_graph** spanner,
                        ss_report** report) {
  if (!g) return fail(SS_EINVAL, "null argument");
  return guarded([&] {
    FilterResult res = filtering_spanner(g->g, t, rounds, seed);
    if (spanner) *spanner = new ss_graph{std::move(res.spanner)};
    if (report) *report = new ss_report{std::move(res.report)};
  });
}

ss_status ss_run_scm(const ss_graph* g, double alpha, int rounds,
                     uint64_t seed, ss_graph** spanner, ss_report** report) {
  if (!g) return fail(SS_EINVAL, "null argument");
  return guarded([&] {
    ScmResult res = scm_tradeoff(g->g, alpha, rounds, seed);
    if (spanner) *spanner = new ss_graph{std::move(res.spanner)};
    if (report) *report = new ss_report{std::move(res.report)};
  });
}

/* ---- closed forms ---- */

ss_status ss_stretch_bound(double k, int g, int use_bs, int64_t* out) {
  if (!out) return fail(SS_EINVAL, "null argument");
  return guarded([&] {
    *out = stretch_bound(k, g, use_bs ? Scheme::kBS : Scheme::kKW);
  });
}

ss_status ss_pass_bound(double k, int g, int use_bs, size_t* out) {
  if (!out) return fail(SS_EINVAL, "null argument");
  return guarded(
      [&] { *out = pass_bound(k, g, use_bs ? Scheme::kBS : Scheme::kKW); });
}

ss_status ss_regime_threshold(size_t n, int g, const char* regime,
                              double* out) {
  if (!regime || !out) return fail(SS_EINVAL, "null argument");
  return guarded([&] { *out = regime_threshold(n, g, regime); });
}

/* ---- verification ---- */

ss_status ss_verify_spanner(const ss_graph* g, const ss_graph* h,
                            int64_t* max_stretch, uint32_t witness[2]) {
  if (!g || !h) return fail(SS_EINVAL, "null argument");
  return guarded([&] {
    StretchReport rep = spanner_stretch(g->g, h->g);
    if (max_stretch) *max_stretch = rep.max_stretch;
    if (witness) {
      witness[0] = rep.witness_edge.u;
      witness[1] = rep.witness_edge.v;
    }
  });
}

/* ---- reports ---- */

ss_status ss_report_json(const ss_report* r, char* buf, size_t cap,
                         size_t* len) {
  if (!r) return fail(SS_EINVAL, "null argument");
  std::string text = r->r.to_json();
  if (len) *len = text.size();
  if (cap == 0) return SS_OK;
  if (!buf || text.size() + 1 > cap)
    return fail(SS_EINVAL, "buffer too small");
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return SS_OK;
}

ss_status ss_report_parse(const char* json, ss_report** out) {
  if (!json || !out) return fail(SS_EINVAL, "null argument");
  return guarded([&] { *out = new ss_report{RunReport::from_json(json)}; });
}

ss_status ss_report_value(const ss_report* r, const char* field, double* out) {
  if (!r || !field || !out) return fail(SS_EINVAL, "null argument");
  const RunReport& rep = r->r;
  std::string f(field);
  if (f == "n")
    *out = static_cast<double>(rep.n);
  else if (f == "m")
    *out = static_cast<double>(rep.m);
  else if (f == "passes")
    *out = static_cast<double>(rep.passes);
  else if (f == "rounds")
    *out = static_cast<double>(rep.rounds);
  else if (f == "spanner_edges")
    *out = static_cast<double>(rep.spanner_edges);
  else if (f == "max_stretch")
    *out = static_cast<double>(rep.max_stretch);
  else if (f == "declared_bound")
    *out = static_cast<double>(rep.declared_bound);
  else if (f == "peak_words")
    *out = static_cast<double>(rep.peak_words);
  else if (f == "max_bits_per_player_per_round")
    *out = static_cast<double>(rep.max_bits_per_player_per_round);
  else if (f == "wall_ms")
    *out = rep.wall_ms;
  else if (f == "verified")
    *out = rep.verified ? 1.0 : 0.0;
  else if (rep.params.count(f))
    *out = rep.params.at(f);
  else
    return fail(SS_EINVAL, "unknown report field: " + f);
  return SS_OK;
}

void ss_report_free(ss_report* r) { delete r; }

}  // extern "C"
