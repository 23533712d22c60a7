/* C interface to the spanstream core. All objects are opaque handles owned
 * by the library; every function returns a status code and reports the last
 * failure message through ss_last_error(). */
#ifndef SPANSTREAM_H
#define SPANSTREAM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ss_status {
  SS_OK = 0,
  SS_EINVAL = 1, /* parameter or format error */
  SS_EFAIL = 2,  /* decode failure cascade, randomness or budget exhausted */
  SS_EIO = 3     /* file error */
} ss_status;

typedef struct ss_stream ss_stream;
typedef struct ss_graph ss_graph;
typedef struct ss_report ss_report;

/* Message for the most recent failing call on this thread. */
const char* ss_last_error(void);

/* ---- streams ---- */
ss_status ss_stream_load(const char* path, ss_stream** out);
ss_status ss_stream_save(const ss_stream* s, const char* path);
ss_status ss_stream_from_graph(const ss_graph* g, ss_stream** out);
ss_status ss_stream_n(const ss_stream* s, size_t* out);
ss_status ss_stream_events(const ss_stream* s, size_t* out);
void ss_stream_free(ss_stream* s);

/* ---- graphs ---- */
ss_status ss_graph_new(size_t n, ss_graph** out);
ss_status ss_graph_add_edge(ss_graph* g, uint32_t u, uint32_t v);
ss_status ss_graph_materialize(const ss_stream* s, ss_graph** out);
ss_status ss_graph_n(const ss_graph* g, size_t* out);
ss_status ss_graph_m(const ss_graph* g, size_t* out);
/* Text format: "graph <n>" header then one "u v" line per edge. */
ss_status ss_graph_save(const ss_graph* g, const char* path);
ss_status ss_graph_load(const char* path, ss_graph** out);
void ss_graph_free(ss_graph* g);

/* ---- generators ---- */
ss_status ss_gen_gnp(size_t n, double p, uint64_t seed, ss_graph** out);
ss_status ss_gen_layered(size_t n, ss_graph** out);
ss_status ss_gen_layered_custom(size_t a, size_t layers, ss_graph** out);
ss_status ss_gen_cut_bad(size_t n, ss_graph** out);
ss_status ss_gen_hard(size_t n, size_t d, uint64_t seed, ss_graph** out);
ss_status ss_to_stream(const ss_graph* g, double deletion_ratio,
                       uint64_t seed, ss_stream** out);

/* ---- algorithms ----
 * Each run yields a spanner graph plus a report; either out pointer may be
 * NULL when the caller does not need it. */
ss_status ss_run_sparsifier(const ss_stream* s, uint64_t seed,
                            ss_graph** spanner, ss_report** report);
ss_status ss_run_tradeoff(const ss_stream* s, double alpha, uint64_t seed,
                          ss_graph** spanner, ss_report** report);
ss_status ss_run_sparse_tradeoff(const ss_stream* s, double alpha,
                                 uint64_t seed, ss_graph** spanner,
                                 ss_report** report);
ss_status ss_run_bs(const ss_stream* s, int k, uint64_t seed,
                    ss_graph** spanner, ss_report** report);
ss_status ss_run_kw(const ss_stream* s, int k, uint64_t seed,
                    ss_graph** spanner, ss_report** report);
/* use_bs nonzero selects the bs scheme, zero the kw scheme */
ss_status ss_run_recursive(const ss_stream* s, double k, int g, int use_bs,
                           uint64_t seed, ss_graph** spanner,
                           ss_report** report);
ss_status ss_run_filter(const ss_graph* g, double t, int rounds,
                        uint64_t seed, ss_graph** spanner,
                        ss_report** report);
ss_status ss_run_scm(const ss_graph* g, double alpha, int rounds,
                     uint64_t seed, ss_graph** spanner, ss_report** report);

/* ---- closed forms and presets ---- */
ss_status ss_stretch_bound(double k, int g, int use_bs, int64_t* out);
ss_status ss_pass_bound(double k, int g, int use_bs, size_t* out);
/* regime is "resistance" or "ldd" */
ss_status ss_regime_threshold(size_t n, int g, const char* regime,
                              double* out);

/* ---- verification ---- */
/* SS_EINVAL when h is not a subgraph of g; max_stretch is -1 when some edge
 * of g is disconnected in h. */
ss_status ss_verify_spanner(const ss_graph* g, const ss_graph* h,
                            int64_t* max_stretch, uint32_t witness[2]);

/* ---- reports ---- */
/* Writes the JSON into buf (cap bytes incl. NUL); *len gets the full length.
 * SS_EINVAL when the buffer is too small (call with cap=0 to size it). */
ss_status ss_report_json(const ss_report* r, char* buf, size_t cap,
                         size_t* len);
/* Parses report JSON produced by ss_report_json. */
ss_status ss_report_parse(const char* json, ss_report** out);
/* Numeric field access for CSV writers; field names match the JSON keys. */
ss_status ss_report_value(const ss_report* r, const char* field, double* out);
void ss_report_free(ss_report* r);

#ifdef __cplusplus
}
#endif

#endif /* SPANSTREAM_H */
