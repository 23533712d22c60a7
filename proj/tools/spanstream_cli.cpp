// spanstream command line. Talks to the core exclusively through the C API.
//
//   gen     write a stream file from a generator spec
//   run     one algorithm on one stream file, RunReport JSON on stdout
//   verify  recompute stretch of a saved spanner against its stream
//   bench   sweep a (params x seed) matrix, CSV on stdout
//
// Exit codes: 0 ok, 2 parameter/format errors, 3 decode-failure cascades.
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spanstream.h"

namespace {

int exit_for(ss_status st) {
  switch (st) {
    case SS_OK:
      return 0;
    case SS_EFAIL:
      return 3;
    default:
      return 2;  // SS_EINVAL and SS_EIO are both caller mistakes
  }
}

int bail(ss_status st) {
  std::fprintf(stderr, "error: %s\n", ss_last_error());
  return exit_for(st);
}

#define CHECK(call)                      \
  do {                                   \
    ss_status st_ = (call);              \
    if (st_ != SS_OK) return bail(st_);  \
  } while (0)

std::uint64_t default_seed() {
  if (const char* env = std::getenv("STREAMSPAN_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 1;
}

std::string report_json(const ss_report* rep) {
  size_t len = 0;
  ss_report_json(rep, nullptr, 0, &len);
  std::string text(len + 1, '\0');
  ss_report_json(rep, text.data(), text.size(), &len);
  text.resize(len);
  return text;
}

double report_value(const ss_report* rep, const char* field) {
  double v = 0.0;
  if (ss_report_value(rep, field, &v) != SS_OK) return -1.0;
  return v;
}

struct AlgoArgs {
  std::string algo;
  double k = 2.0;
  int g = 1;
  double alpha = 0.5;
  double t = 0.0;
  int rounds = 1;
  std::string regime = "resistance";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_algo_flags(CLI::App* cmd, AlgoArgs& a) {
  cmd->add_option("--algo", a.algo, "algorithm id")
      ->required()
      ->check(CLI::IsMember({"sparsifier", "tradeoff", "sparse-tradeoff",
                             "bs", "kw", "recursive-kw", "recursive-bs",
                             "filter", "scm"}));
  cmd->add_option("--k", a.k, "stretch parameter");
  cmd->add_option("--g", a.g, "recursion depth / filter rounds");
  cmd->add_option("--alpha", a.alpha, "space exponent");
  cmd->add_option("--t", a.t, "filter threshold (0: use --regime preset)");
  cmd->add_option("--rounds", a.rounds, "communication rounds");
  cmd->add_option("--regime", a.regime, "threshold preset")
      ->check(CLI::IsMember({"resistance", "ldd"}));
  auto* s = cmd->add_option("--seed", a.seed, "rng seed");
  cmd->callback([s, &a] { a.seed_set = s->count() > 0; });
}

// Runs one algorithm on the stream. Caller owns both outputs.
ss_status run_algo(const AlgoArgs& a, const ss_stream* stream,
                   ss_graph** spanner, ss_report** rep) {
  std::uint64_t seed = a.seed_set ? a.seed : default_seed();
  if (a.algo == "sparsifier")
    return ss_run_sparsifier(stream, seed, spanner, rep);
  if (a.algo == "tradeoff")
    return ss_run_tradeoff(stream, a.alpha, seed, spanner, rep);
  if (a.algo == "sparse-tradeoff")
    return ss_run_sparse_tradeoff(stream, a.alpha, seed, spanner, rep);
  if (a.algo == "bs")
    return ss_run_bs(stream, static_cast<int>(a.k), seed, spanner, rep);
  if (a.algo == "kw")
    return ss_run_kw(stream, static_cast<int>(a.k), seed, spanner, rep);
  if (a.algo == "recursive-kw" || a.algo == "recursive-bs")
    return ss_run_recursive(stream, a.k, a.g, a.algo == "recursive-bs", seed,
                            spanner, rep);

  // filter and scm operate on the materialized graph
  ss_graph* g = nullptr;
  ss_status st = ss_graph_materialize(stream, &g);
  if (st != SS_OK) return st;
  if (a.algo == "filter") {
    double t = a.t;
    if (t <= 0.0) {
      size_t n = 0;
      ss_graph_n(g, &n);
      st = ss_regime_threshold(n, a.g, a.regime.c_str(), &t);
    }
    if (st == SS_OK) st = ss_run_filter(g, t, a.g, seed, spanner, rep);
  } else {
    st = ss_run_scm(g, a.alpha, a.rounds, seed, spanner, rep);
  }
  ss_graph_free(g);
  return st;
}

int cmd_gen(const std::string& family, size_t n, double p, size_t d,
            double del_ratio, std::uint64_t seed, bool seed_set,
            const std::string& out) {
  if (!seed_set) seed = default_seed();
  ss_graph* g = nullptr;
  if (family == "gnp") {
    if (p < 0.0) p = 8.0 / static_cast<double>(n);
    CHECK(ss_gen_gnp(n, p, seed, &g));
  } else if (family == "layered") {
    CHECK(ss_gen_layered(n, &g));
  } else if (family == "cut-bad") {
    CHECK(ss_gen_cut_bad(n, &g));
  } else {
    CHECK(ss_gen_hard(n, d, seed, &g));
  }
  ss_stream* s = nullptr;
  ss_status st = ss_to_stream(g, del_ratio, seed, &s);
  ss_graph_free(g);
  if (st != SS_OK) return bail(st);
  st = ss_stream_save(s, out.c_str());
  size_t events = 0, sn = 0;
  ss_stream_events(s, &events);
  ss_stream_n(s, &sn);
  ss_stream_free(s);
  if (st != SS_OK) return bail(st);
  std::fprintf(stderr, "wrote %s: n=%zu events=%zu\n", out.c_str(), sn,
               events);
  return 0;
}

int cmd_run(const AlgoArgs& a, const std::string& stream_path,
            const std::string& spanner_out) {
  ss_stream* stream = nullptr;
  CHECK(ss_stream_load(stream_path.c_str(), &stream));
  ss_graph* spanner = nullptr;
  ss_report* rep = nullptr;
  ss_status st = run_algo(a, stream, &spanner, &rep);
  ss_stream_free(stream);
  if (st != SS_OK) return bail(st);
  if (!spanner_out.empty()) {
    st = ss_graph_save(spanner, spanner_out.c_str());
    if (st != SS_OK) {
      ss_graph_free(spanner);
      ss_report_free(rep);
      return bail(st);
    }
  }
  std::printf("%s\n", report_json(rep).c_str());
  ss_graph_free(spanner);
  ss_report_free(rep);
  return 0;
}

int cmd_verify(const std::string& stream_path, const std::string& spanner_path,
               const std::string& report_path) {
  ss_stream* stream = nullptr;
  CHECK(ss_stream_load(stream_path.c_str(), &stream));
  ss_graph* g = nullptr;
  ss_status st = ss_graph_materialize(stream, &g);
  ss_stream_free(stream);
  if (st != SS_OK) return bail(st);
  ss_graph* h = nullptr;
  st = ss_graph_load(spanner_path.c_str(), &h);
  if (st != SS_OK) {
    ss_graph_free(g);
    return bail(st);
  }
  int64_t stretch = 0;
  uint32_t witness[2] = {0, 0};
  st = ss_verify_spanner(g, h, &stretch, witness);
  ss_graph_free(g);
  ss_graph_free(h);
  if (st != SS_OK) return bail(st);

  // Optional round trip: the saved report must re-serialize byte-identically
  // and agree with the recomputed stretch.
  int64_t declared = -1;
  if (!report_path.empty()) {
    std::ifstream is(report_path);
    if (!is) {
      std::fprintf(stderr, "error: cannot open %s\n", report_path.c_str());
      return 2;
    }
    std::stringstream buf;
    buf << is.rdbuf();
    std::string text = buf.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
      text.pop_back();
    ss_report* rep = nullptr;
    CHECK(ss_report_parse(text.c_str(), &rep));
    std::string again = report_json(rep);
    int64_t reported =
        static_cast<int64_t>(report_value(rep, "max_stretch"));
    declared = static_cast<int64_t>(report_value(rep, "declared_bound"));
    ss_report_free(rep);
    if (again != text) {
      std::fprintf(stderr, "error: report does not round-trip\n");
      return 3;
    }
    if (reported != stretch) {
      std::fprintf(stderr,
                   "error: reported max_stretch %lld != recomputed %lld\n",
                   static_cast<long long>(reported),
                   static_cast<long long>(stretch));
      return 3;
    }
  }
  bool verified =
      stretch >= 0 && (declared < 0 || stretch <= declared);
  std::printf(
      "{\"max_stretch\":%lld,\"witness\":[%u,%u],\"verified\":%s}\n",
      static_cast<long long>(stretch), witness[0], witness[1],
      verified ? "true" : "false");
  return verified ? 0 : 3;
}

int cmd_bench(const AlgoArgs& a, const std::string& family,
              std::vector<size_t> ns, double p, size_t d, double del_ratio,
              int seeds) {
  std::printf(
      "algo,family,n,m,k,g,alpha,t,rounds,seed,passes,spanner_edges,"
      "max_stretch,declared_bound,peak_words,max_bits_per_player_per_round,"
      "verified,wall_ms\n");
  std::uint64_t base = a.seed_set ? a.seed : default_seed();
  for (size_t n : ns) {
    for (int si = 0; si < seeds; ++si) {
      std::uint64_t seed = base + static_cast<std::uint64_t>(si);
      ss_graph* g = nullptr;
      if (family == "gnp") {
        double pp = p < 0.0 ? 8.0 / static_cast<double>(n) : p;
        CHECK(ss_gen_gnp(n, pp, seed, &g));
      } else if (family == "layered") {
        CHECK(ss_gen_layered(n, &g));
      } else if (family == "cut-bad") {
        CHECK(ss_gen_cut_bad(n, &g));
      } else {
        CHECK(ss_gen_hard(n, d, seed, &g));
      }
      ss_stream* stream = nullptr;
      ss_status st = ss_to_stream(g, del_ratio, seed, &stream);
      ss_graph_free(g);
      if (st != SS_OK) return bail(st);
      AlgoArgs cell = a;
      cell.seed = seed;
      cell.seed_set = true;
      ss_report* rep = nullptr;
      st = run_algo(cell, stream, nullptr, &rep);
      ss_stream_free(stream);
      if (st != SS_OK) return bail(st);
      std::printf(
          "%s,%s,%zu,%.0f,%g,%d,%g,%g,%d,%llu,%.0f,%.0f,%.0f,%.0f,%.0f,"
          "%.0f,%d,%.3f\n",
          a.algo.c_str(), family.c_str(), n, report_value(rep, "m"), a.k,
          a.g, a.alpha, a.t, a.rounds, static_cast<unsigned long long>(seed),
          report_value(rep, "passes"), report_value(rep, "spanner_edges"),
          report_value(rep, "max_stretch"),
          report_value(rep, "declared_bound"),
          report_value(rep, "peak_words"),
          report_value(rep, "max_bits_per_player_per_round"),
          report_value(rep, "verified") > 0.5 ? 1 : 0,
          report_value(rep, "wall_ms"));
      ss_report_free(rep);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic-graph-stream spanner toolkit"};
  app.require_subcommand(1);

  // gen
  std::string gen_family = "gnp", gen_out = "stream.txt";
  size_t gen_n = 100, gen_d = 4;
  double gen_p = -1.0, gen_del = 0.25;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "write a stream file");
  gen->add_option("--family", gen_family, "graph family")
      ->check(CLI::IsMember({"gnp", "layered", "cut-bad", "hard"}));
  gen->add_option("--n", gen_n, "vertex count");
  gen->add_option("--p", gen_p, "gnp edge probability (default 8/n)");
  gen->add_option("--d", gen_d, "hard-instance circular distance");
  gen->add_option("--deletion-ratio", gen_del, "decoy churn ratio");
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--out", gen_out, "output stream file");

  // run
  AlgoArgs run_args;
  std::string run_stream, run_spanner_out;
  auto* run = app.add_subcommand("run", "run one algorithm on one stream");
  add_algo_flags(run, run_args);
  run->add_option("--stream", run_stream, "stream file")->required();
  run->add_option("--spanner-out", run_spanner_out, "save the spanner here");

  // verify
  std::string ver_stream, ver_spanner, ver_report;
  auto* ver = app.add_subcommand("verify", "recompute stretch of a spanner");
  ver->add_option("--stream", ver_stream, "stream file")->required();
  ver->add_option("--spanner", ver_spanner, "spanner file")->required();
  ver->add_option("--report", ver_report, "RunReport JSON to round-trip");

  // bench
  AlgoArgs bench_args;
  std::string bench_family = "gnp";
  std::vector<size_t> bench_ns;
  double bench_p = -1.0, bench_del = 0.25;
  size_t bench_d = 4;
  int bench_seeds = 3;
  auto* bench = app.add_subcommand("bench", "sweep a matrix, CSV out");
  add_algo_flags(bench, bench_args);
  bench->add_option("--family", bench_family, "graph family")
      ->check(CLI::IsMember({"gnp", "layered", "cut-bad", "hard"}));
  bench->add_option("--n", bench_ns, "vertex counts (repeatable)")
      ->required();
  bench->add_option("--p", bench_p, "gnp edge probability (default 8/n)");
  bench->add_option("--d", bench_d, "hard-instance circular distance");
  bench->add_option("--deletion-ratio", bench_del, "decoy churn ratio");
  bench->add_option("--seeds", bench_seeds, "seeds per cell");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (gen->parsed())
    return cmd_gen(gen_family, gen_n, gen_p, gen_d, gen_del, gen_seed,
                   gen_seed_opt->count() > 0, gen_out);
  if (run->parsed()) return cmd_run(run_args, run_stream, run_spanner_out);
  if (ver->parsed()) return cmd_verify(ver_stream, ver_spanner, ver_report);
  return cmd_bench(bench_args, bench_family, bench_ns, bench_p, bench_d,
                   bench_del, bench_seeds);
}
