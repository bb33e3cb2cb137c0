#ifndef COREX_COREX_H
#define COREX_COREX_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(COREX_BUILDING_LIBRARY)
#define COREX_API __declspec(dllexport)
#else
#define COREX_API __declspec(dllimport)
#endif
#else
#define COREX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns one of these; the message of the most recent
   failure on the calling thread is available from corex_last_error(). */
enum {
  COREX_OK = 0,
  COREX_ERR_PARSE = 1,
  COREX_ERR_VALIDATION = 2,
  COREX_ERR_RANGE = 3,
  COREX_ERR_DOMAIN = 4,
  COREX_ERR_CONVERGENCE = 5,
  COREX_ERR_INFEASIBLE = 6,
  COREX_ERR_DEGENERATE = 7,
  COREX_ERR_IO = 8,
  COREX_ERR_NULL_ARG = 9,
  COREX_ERR_INTERNAL = 10
};

typedef struct corex_graph corex_graph;
typedef struct corex_decomp corex_decomp;
typedef struct corex_scores corex_scores;
typedef struct corex_partition corex_partition;
typedef struct corex_instance corex_instance;
typedef struct corex_experiment corex_experiment;
typedef struct corex_text corex_text;

COREX_API const char* corex_version(void);
COREX_API const char* corex_last_error(void);
COREX_API const char* corex_status_name(int status);

/* 0 means hardware concurrency. */
COREX_API int corex_set_threads(int threads);

/* text */
COREX_API const char* corex_text_data(const corex_text* t);
COREX_API size_t corex_text_size(const corex_text* t);
COREX_API void corex_text_free(corex_text* t);

/* graph */
COREX_API int corex_graph_load(const char* path, corex_graph** out);
COREX_API int corex_graph_from_edges(size_t n, const uint32_t* u, const uint32_t* v, size_t m, corex_graph** out);
COREX_API void corex_graph_free(corex_graph* g);
COREX_API size_t corex_graph_num_nodes(const corex_graph* g);
COREX_API size_t corex_graph_num_edges(const corex_graph* g);
COREX_API int corex_graph_density(const corex_graph* g, double* out);
/* out must hold num_nodes values */
COREX_API int corex_graph_degrees(const corex_graph* g, double* out, size_t len);
COREX_API int corex_graph_write(const corex_graph* g, const char* path);
/* "node_id,is_core" CSV labeling all n nodes; out receives 0/1 per node */
COREX_API int corex_truth_load(const char* path, size_t n, unsigned char* out, size_t len);

/* spectral */
COREX_API int corex_eigs(const corex_graph* g, int rank, uint64_t seed, corex_decomp** out);
COREX_API void corex_decomp_free(corex_decomp* d);
COREX_API int corex_decomp_rank(const corex_decomp* d);
COREX_API int corex_decomp_eigenvalues(const corex_decomp* d, double* out, size_t len);

/* model: 0 = ER-type, 1 = configuration-type (needs the graph for degrees) */
#define COREX_MODEL_ER 0
#define COREX_MODEL_CONFIG 1
COREX_API int corex_scores_compute(const corex_decomp* d, const corex_graph* g, int model, corex_scores** out);
COREX_API void corex_scores_free(corex_scores* s);
COREX_API size_t corex_scores_size(const corex_scores* s);
COREX_API int corex_scores_values(const corex_scores* s, double* out, size_t len);
COREX_API size_t corex_scores_num_excluded(const corex_scores* s);
COREX_API int corex_scores_excluded(const corex_scores* s, size_t* out, size_t len);
COREX_API int corex_scores_write_csv(const corex_scores* s, const char* path);

/* selection */
COREX_API int corex_select_topk(const corex_scores* s, size_t n_core, corex_partition** out);
/* p_hat is the observed density of the graph the scores came from */
COREX_API int corex_select_threshold(const corex_scores* s, double p_hat, double eps, corex_partition** out);
COREX_API int corex_select_kmeans(const corex_scores* s, corex_partition** out);
COREX_API void corex_partition_free(corex_partition* p);
COREX_API size_t corex_partition_n_core(const corex_partition* p);
/* 1 when the partition came from a cutoff rule, 0 for top-k */
COREX_API int corex_partition_cutoff(const corex_partition* p, double* out);
COREX_API int corex_partition_labels(const corex_partition* p, unsigned char* out, size_t len);
COREX_API int corex_partition_write_csv(const corex_partition* p, const corex_scores* s, const char* path);

/* edge cross-validation; chosen rank in *chosen, full record as JSON in *report (may be NULL) */
COREX_API int corex_select_rank(const corex_graph* g, const int* candidates, size_t count, int folds,
                                double holdout_fraction, uint64_t seed, int* chosen, corex_text** report);

/* synthetic benchmarks */
#define COREX_PERIPHERY_ER 0
#define COREX_PERIPHERY_CONFIG 1
typedef struct corex_synth_config {
  int graphon; /* 1, 2 or 3 */
  size_t n_core;
  size_t n_periphery;
  int periphery;
  double density;
  double degree_ratio;
  uint64_t seed;
} corex_synth_config;

COREX_API void corex_synth_config_init(corex_synth_config* cfg);
/* "balanced", "small-core", "large-core" */
COREX_API int corex_size_preset(const char* name, size_t* n_core, size_t* n_periphery);
COREX_API int corex_generate(const corex_synth_config* cfg, corex_instance** out);
COREX_API void corex_instance_free(corex_instance* inst);
/* edges.tsv, truth.csv and meta.json under dir */
COREX_API int corex_instance_write(const corex_instance* inst, const char* dir);
COREX_API int corex_instance_graph(const corex_instance* inst, corex_graph** out);
COREX_API int corex_instance_truth(const corex_instance* inst, unsigned char* out, size_t len);

/* benchmark harness; methods is a comma list of method names, rank <= 0 selects by ECV */
COREX_API int corex_bench_run(const corex_synth_config* cfg, const char* methods, int replicates, int rank,
                              corex_experiment** out);
COREX_API void corex_experiment_free(corex_experiment* e);
COREX_API int corex_experiment_summary_json(const corex_experiment* e, corex_text** out);
/* averaged ROC of one method as "method,fpr,tpr" CSV */
COREX_API int corex_experiment_roc_csv(const corex_experiment* e, const char* method, corex_text** out);
COREX_API int corex_experiment_mean_auc(const corex_experiment* e, const char* method, double* mean, double* se);
/* comma list of every method name */
COREX_API const char* corex_method_names(void);

/* diagnostics */
COREX_API int corex_diagnose_meta(const char* meta_json, int rank, int with_truth, corex_text** out);
COREX_API int corex_diagnose_graph(const corex_graph* g, int rank, uint64_t seed, const unsigned char* truth,
                                   corex_text** out);
/* Eigengap sweep of the three-block demo core under an ER periphery at `level`;
   CSV "n_periphery,gap,normalized_gap,lambda_1,..,lambda_4". */
COREX_API int corex_eigengap_sweep(const size_t* sizes, size_t count, double level, corex_text** out);

#ifdef __cplusplus
}
#endif

#endif
