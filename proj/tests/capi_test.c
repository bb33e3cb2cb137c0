/* Exercises the C interface from plain C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "corex/corex.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      failures++;                                                 \
    }                                                             \
  } while (0)

static void test_errors(void) {
  corex_graph* g = NULL;
  EXPECT(corex_graph_load(NULL, &g) == COREX_ERR_NULL_ARG);
  EXPECT(corex_graph_load("/nonexistent/edges.tsv", &g) == COREX_ERR_IO);
  EXPECT(strlen(corex_last_error()) > 0);
  EXPECT(g == NULL);

  uint32_t u[] = {0, 1};
  uint32_t v[] = {1, 1};
  EXPECT(corex_graph_from_edges(3, u, v, 2, &g) == COREX_ERR_VALIDATION);
  v[1] = 7;
  EXPECT(corex_graph_from_edges(3, u, v, 2, &g) == COREX_ERR_RANGE);
  EXPECT(strcmp(corex_status_name(COREX_ERR_RANGE), "range error") == 0);
  EXPECT(corex_set_threads(-1) == COREX_ERR_DOMAIN);
}

static void test_pipeline(void) {
  corex_synth_config cfg;
  corex_synth_config_init(&cfg);
  cfg.n_core = 150;
  cfg.n_periphery = 150;
  cfg.density = 0.1;
  cfg.degree_ratio = 3.0;
  cfg.seed = 2;

  corex_instance* inst = NULL;
  EXPECT(corex_generate(&cfg, &inst) == COREX_OK);
  corex_graph* g = NULL;
  EXPECT(corex_instance_graph(inst, &g) == COREX_OK);
  EXPECT(corex_graph_num_nodes(g) == 300);

  double p_hat = 0.0;
  EXPECT(corex_graph_density(g, &p_hat) == COREX_OK);
  EXPECT(fabs(p_hat - 0.1) < 0.01);

  corex_decomp* d = NULL;
  EXPECT(corex_eigs(g, 6, 1, &d) == COREX_OK);
  EXPECT(corex_decomp_rank(d) == 6);
  EXPECT(corex_eigs(g, 0, 1, &d) == COREX_ERR_DOMAIN);

  corex_scores* s = NULL;
  EXPECT(corex_scores_compute(d, g, COREX_MODEL_ER, &s) == COREX_OK);
  EXPECT(corex_scores_size(s) == 300);
  EXPECT(corex_scores_compute(d, NULL, COREX_MODEL_CONFIG, &s) == COREX_ERR_NULL_ARG);

  double small[2];
  EXPECT(corex_scores_values(s, small, 2) == COREX_ERR_RANGE);

  corex_partition* part = NULL;
  EXPECT(corex_select_topk(s, 150, &part) == COREX_OK);
  EXPECT(corex_partition_n_core(part) == 150);
  EXPECT(corex_partition_cutoff(part, NULL) == 0);
  unsigned char* labels = malloc(300);
  unsigned char* truth = malloc(300);
  EXPECT(corex_partition_labels(part, labels, 300) == COREX_OK);
  EXPECT(corex_instance_truth(inst, truth, 300) == COREX_OK);
  int hits = 0;
  for (int i = 0; i < 300; ++i) hits += labels[i] && truth[i];
  EXPECT(hits > 120);
  corex_partition_free(part);

  EXPECT(corex_select_kmeans(s, &part) == COREX_OK);
  double cut = 0.0;
  EXPECT(corex_partition_cutoff(part, &cut) == 1);
  EXPECT(cut > 0.0);
  corex_partition_free(part);

  int cands[] = {1, 2, 3, 4};
  int chosen = 0;
  corex_text* report = NULL;
  EXPECT(corex_select_rank(g, cands, 4, 3, 0.1, 5, &chosen, &report) == COREX_OK);
  EXPECT(chosen >= 1 && chosen <= 4);
  EXPECT(strstr(corex_text_data(report), "chosen_r") != NULL);
  corex_text_free(report);

  corex_text* diag = NULL;
  EXPECT(corex_diagnose_graph(g, 3, 0, truth, &diag) == COREX_OK);
  EXPECT(strstr(corex_text_data(diag), "\"h_n\"") != NULL);
  corex_text_free(diag);

  free(labels);
  free(truth);
  corex_scores_free(s);
  corex_decomp_free(d);
  corex_graph_free(g);
  corex_instance_free(inst);
}

static void test_bench(void) {
  corex_synth_config cfg;
  corex_synth_config_init(&cfg);
  cfg.n_core = 100;
  cfg.n_periphery = 100;
  cfg.density = 0.1;
  corex_experiment* e = NULL;
  EXPECT(corex_bench_run(&cfg, "degree,spectral_er", 2, 6, &e) == COREX_OK);
  double mean = -1.0, se = -1.0;
  EXPECT(corex_experiment_mean_auc(e, "degree", &mean, &se) == COREX_OK);
  EXPECT(mean >= 0.0 && mean <= 1.0);
  EXPECT(corex_experiment_mean_auc(e, "pagerank", &mean, &se) == COREX_ERR_DOMAIN);
  corex_text* csv = NULL;
  EXPECT(corex_experiment_roc_csv(e, "spectral_er", &csv) == COREX_OK);
  EXPECT(strncmp(corex_text_data(csv), "method,fpr,tpr\n", 15) == 0);
  corex_text_free(csv);
  corex_experiment_free(e);
  EXPECT(corex_bench_run(&cfg, "nonsense", 2, 6, &e) == COREX_ERR_DOMAIN);
  cfg.graphon = 9;
  EXPECT(corex_bench_run(&cfg, "degree", 2, 6, &e) == COREX_ERR_DOMAIN);
}

int main(void) {
  test_errors();
  test_pipeline();
  test_bench();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("all C interface checks passed\n");
  return 0;
}
