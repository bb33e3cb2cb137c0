#include "corex/corex.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "corex/coreid.hpp"
#include "corex/error.hpp"
#include "corex/eval.hpp"
#include "corex/graph.hpp"
#include "corex/io.hpp"
#include "corex/parallel.hpp"
#include "corex/spectral.hpp"
#include "corex/synth.hpp"

struct corex_graph {
  corex::SparseGraph g;
};
struct corex_decomp {
  corex::SpectralDecomposition d;
};
struct corex_scores {
  corex::CoreScores s;
};
struct corex_partition {
  corex::CorePartition p;
};
struct corex_instance {
  corex::SynthInstance inst;
};
struct corex_experiment {
  corex::ExperimentResult r;
};
struct corex_text {
  std::string s;
};

namespace {

thread_local std::string g_last_error;

int status_of(corex::ErrorKind k) {
  switch (k) {
    case corex::ErrorKind::parse:
      return COREX_ERR_PARSE;
    case corex::ErrorKind::validation:
      return COREX_ERR_VALIDATION;
    case corex::ErrorKind::range:
      return COREX_ERR_RANGE;
    case corex::ErrorKind::domain:
      return COREX_ERR_DOMAIN;
    case corex::ErrorKind::convergence:
      return COREX_ERR_CONVERGENCE;
    case corex::ErrorKind::infeasible:
      return COREX_ERR_INFEASIBLE;
    case corex::ErrorKind::degenerate:
      return COREX_ERR_DEGENERATE;
    case corex::ErrorKind::io:
      return COREX_ERR_IO;
  }
  return COREX_ERR_INTERNAL;
}

int fail(int status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

template <typename F>
int guard(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const corex::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(COREX_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(COREX_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(COREX_ERR_INTERNAL, "unknown exception");
  }
}

#define COREX_REQUIRE(p) \
  if (!(p)) return fail(COREX_ERR_NULL_ARG, "null argument: " #p)

int copy_out(const std::vector<double>& src, double* out, size_t len) {
  COREX_REQUIRE(out);
  if (len < src.size()) return fail(COREX_ERR_RANGE, "output buffer too small");
  std::copy(src.begin(), src.end(), out);
  return COREX_OK;
}

int copy_labels(const std::vector<bool>& src, unsigned char* out, size_t len) {
  COREX_REQUIRE(out);
  if (len < src.size()) return fail(COREX_ERR_RANGE, "output buffer too small");
  for (std::size_t i = 0; i < src.size(); ++i) out[i] = src[i] ? 1 : 0;
  return COREX_OK;
}

int emit_text(std::string s, corex_text** out) {
  *out = new corex_text{std::move(s)};
  return COREX_OK;
}

corex::SynthConfig to_config(const corex_synth_config& c) {
  corex::SynthConfig cfg;
  cfg.graphon = corex::GraphonSpec::table(c.graphon);
  cfg.n_core = c.n_core;
  cfg.n_periphery = c.n_periphery;
  if (c.periphery != COREX_PERIPHERY_ER && c.periphery != COREX_PERIPHERY_CONFIG) {
    throw corex::DomainError("unknown periphery kind");
  }
  cfg.periphery = c.periphery == COREX_PERIPHERY_CONFIG ? corex::PeripheryKind::config : corex::PeripheryKind::er;
  cfg.target_density = c.density;
  cfg.degree_ratio = c.degree_ratio;
  cfg.seed = c.seed;
  return cfg;
}

std::vector<corex::Method> parse_methods(const std::string& list) {
  std::vector<corex::Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") {
      for (auto m : corex::all_methods()) out.push_back(m);
      continue;
    }
    auto m = corex::method_from_string(item);
    if (!m) throw corex::DomainError("unknown method '" + item + "'");
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  if (out.empty()) throw corex::DomainError("no methods given");
  return out;
}

void write_to(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ostringstream ss;
  body(ss);
  corex::write_file_atomic(path, ss.str());
}

}  // namespace

extern "C" {

const char* corex_version(void) { return "0.1.0"; }

const char* corex_last_error(void) { return g_last_error.c_str(); }

const char* corex_status_name(int status) {
  switch (status) {
    case COREX_OK:
      return "ok";
    case COREX_ERR_PARSE:
      return "parse error";
    case COREX_ERR_VALIDATION:
      return "validation error";
    case COREX_ERR_RANGE:
      return "range error";
    case COREX_ERR_DOMAIN:
      return "domain error";
    case COREX_ERR_CONVERGENCE:
      return "convergence error";
    case COREX_ERR_INFEASIBLE:
      return "infeasible";
    case COREX_ERR_DEGENERATE:
      return "degenerate";
    case COREX_ERR_IO:
      return "i/o error";
    case COREX_ERR_NULL_ARG:
      return "null argument";
    default:
      return "internal error";
  }
}

int corex_set_threads(int threads) {
  if (threads < 0) return fail(COREX_ERR_DOMAIN, "thread count must be >= 0");
  std::size_t t = static_cast<std::size_t>(threads);
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  corex::set_thread_count(t);
  return COREX_OK;
}

const char* corex_text_data(const corex_text* t) { return t ? t->s.c_str() : ""; }
size_t corex_text_size(const corex_text* t) { return t ? t->s.size() : 0; }
void corex_text_free(corex_text* t) { delete t; }

int corex_graph_load(const char* path, corex_graph** out) {
  COREX_REQUIRE(path);
  COREX_REQUIRE(out);
  return guard([&]() -> int {
    *out = new corex_graph{corex::load_edge_list(std::filesystem::path(path))};
    return COREX_OK;
  });
}

int corex_graph_from_edges(size_t n, const uint32_t* u, const uint32_t* v, size_t m, corex_graph** out) {
  COREX_REQUIRE(out);
  if (m > 0) {
    COREX_REQUIRE(u);
    COREX_REQUIRE(v);
  }
  return guard([&]() -> int {
    std::vector<corex::Edge> edges(m);
    for (size_t k = 0; k < m; ++k) edges[k] = {u[k], v[k]};
    *out = new corex_graph{corex::SparseGraph::from_edges(n, edges)};
    return COREX_OK;
  });
}

void corex_graph_free(corex_graph* g) { delete g; }
size_t corex_graph_num_nodes(const corex_graph* g) { return g ? g->g.num_nodes() : 0; }
size_t corex_graph_num_edges(const corex_graph* g) { return g ? g->g.num_edges() : 0; }

int corex_graph_density(const corex_graph* g, double* out) {
  COREX_REQUIRE(g);
  COREX_REQUIRE(out);
  return guard([&]() -> int {
    *out = corex::average_density(g->g);
    return COREX_OK;
  });
}

int corex_graph_degrees(const corex_graph* g, double* out, size_t len) {
  COREX_REQUIRE(g);
  return guard([&]() -> int { return copy_out(corex::degrees(g->g).values, out, len); });
}

int corex_graph_write(const corex_graph* g, const char* path) {
  COREX_REQUIRE(g);
  COREX_REQUIRE(path);
  return guard([&]() -> int {
    write_to(path, [&](std::ostream& os) { corex::write_edge_list(g->g, os); });
    return COREX_OK;
  });
}

int corex_truth_load(const char* path, size_t n, unsigned char* out, size_t len) {
  COREX_REQUIRE(path);
  return guard([&]() -> int { return copy_labels(corex::load_truth_csv(std::filesystem::path(path), n), out, len); });
}

int corex_eigs(const corex_graph* g, int rank, uint64_t seed, corex_decomp** out) {
  COREX_REQUIRE(g);
  COREX_REQUIRE(out);
  return guard([&]() -> int {
    corex::EigsOptions opts;
    opts.seed = seed;
    *out = new corex_decomp{corex::truncated_eigs(g->g, rank, opts)};
    return COREX_OK;
  });
}

void corex_decomp_free(corex_decomp* d) { delete d; }
int corex_decomp_rank(const corex_decomp* d) { return d ? d->d.rank() : 0; }

int corex_decomp_eigenvalues(const corex_decomp* d, double* out, size_t len) {
  COREX_REQUIRE(d);
  const auto& ev = d->d.eigenvalues;
  return copy_out(std::vector<double>(ev.data(), ev.data() + ev.size()), out, len);
}

int corex_scores_compute(const corex_decomp* d, const corex_graph* g, int model, corex_scores** out) {
  COREX_REQUIRE(d);
  COREX_REQUIRE(out);
  if (model == COREX_MODEL_CONFIG) COREX_REQUIRE(g);
  return guard([&]() -> int {
    if (model == COREX_MODEL_ER) {
      *out = new corex_scores{corex::er_scores(d->d)};
    } else if (model == COREX_MODEL_CONFIG) {
      *out = new corex_scores{corex::config_scores(d->d, corex::degrees(g->g))};
    } else {
      return fail(COREX_ERR_DOMAIN, "unknown score model");
    }
    return COREX_OK;
  });
}

void corex_scores_free(corex_scores* s) { delete s; }
size_t corex_scores_size(const corex_scores* s) { return s ? s->s.size() : 0; }

int corex_scores_values(const corex_scores* s, double* out, size_t len) {
  COREX_REQUIRE(s);
  return copy_out(s->s.values, out, len);
}

size_t corex_scores_num_excluded(const corex_scores* s) { return s ? s->s.excluded.size() : 0; }

int corex_scores_excluded(const corex_scores* s, size_t* out, size_t len) {
  COREX_REQUIRE(s);
  COREX_REQUIRE(out);
  if (len < s->s.excluded.size()) return fail(COREX_ERR_RANGE, "output buffer too small");
  std::copy(s->s.excluded.begin(), s->s.excluded.end(), out);
  return COREX_OK;
}

int corex_scores_write_csv(const corex_scores* s, const char* path) {
  COREX_REQUIRE(s);
  COREX_REQUIRE(path);
  return guard([&]() -> int {
    write_to(path, [&](std::ostream& os) { corex::write_scores_csv(s->s, os); });
    return COREX_OK;
  });
}

int corex_select_topk(const corex_scores* s, size_t n_core, corex_partition** out) {
  COREX_REQUIRE(s);
  COREX_REQUIRE(out);
  return guard([&]() -> int {
    *out = new corex_partition{corex::identify_top_k(s->s, n_core)};
    return COREX_OK;
  });
}

int corex_select_threshold(const corex_scores* s, double p_hat, double eps, corex_partition** out) {
  COREX_REQUIRE(s);
  COREX_REQUIRE(out);
  return guard([&]() -> int {
    *out = new corex_partition{corex::threshold_select(s->s, p_hat, eps)};
    return COREX_OK;
  });
}

int corex_select_kmeans(const corex_scores* s, corex_partition** out) {
  COREX_REQUIRE(s);
  COREX_REQUIRE(out);
  return guard([&]() -> int {
    *out = new corex_partition{corex::kmeans_split(s->s)};
    return COREX_OK;
  });
}

void corex_partition_free(corex_partition* p) { delete p; }
size_t corex_partition_n_core(const corex_partition* p) { return p ? p->p.n_core : 0; }

int corex_partition_cutoff(const corex_partition* p, double* out) {
  if (!p || !p->p.cutoff) return 0;
  if (out) *out = *p->p.cutoff;
  return 1;
}

int corex_partition_labels(const corex_partition* p, unsigned char* out, size_t len) {
  COREX_REQUIRE(p);
  return copy_labels(p->p.labels, out, len);
}

int corex_partition_write_csv(const corex_partition* p, const corex_scores* s, const char* path) {
  COREX_REQUIRE(p);
  COREX_REQUIRE(s);
  COREX_REQUIRE(path);
  return guard([&]() -> int {
    write_to(path, [&](std::ostream& os) { corex::write_partition_csv(p->p, s->s, os); });
    return COREX_OK;
  });
}

int corex_select_rank(const corex_graph* g, const int* candidates, size_t count, int folds, double holdout_fraction,
                      uint64_t seed, int* chosen, corex_text** report) {
  COREX_REQUIRE(g);
  COREX_REQUIRE(candidates);
  COREX_REQUIRE(chosen);
  return guard([&]() -> int {
    corex::EcvOptions opts;
    opts.folds = folds;
    opts.holdout_fraction = holdout_fraction;
    opts.seed = seed;
    const auto sel = corex::select_rank_ecv(g->g, std::span<const int>(candidates, count), opts);
    *chosen = sel.chosen_r;
    if (report) emit_text(corex::rank_selection_json(sel), report);
    return COREX_OK;
  });
}

void corex_synth_config_init(corex_synth_config* cfg) {
  if (!cfg) return;
  const corex::SynthConfig d;
  cfg->graphon = 1;
  cfg->n_core = d.n_core;
  cfg->n_periphery = d.n_periphery;
  cfg->periphery = COREX_PERIPHERY_ER;
  cfg->density = d.target_density;
  cfg->degree_ratio = d.degree_ratio;
  cfg->seed = d.seed;
}

int corex_size_preset(const char* name, size_t* n_core, size_t* n_periphery) {
  COREX_REQUIRE(name);
  COREX_REQUIRE(n_core);
  COREX_REQUIRE(n_periphery);
  const auto p = corex::size_preset(name);
  if (!p) return fail(COREX_ERR_DOMAIN, std::string("unknown size preset '") + name + "'");
  *n_core = p->n_core;
  *n_periphery = p->n_periphery;
  return COREX_OK;
}

int corex_generate(const corex_synth_config* cfg, corex_instance** out) {
  COREX_REQUIRE(cfg);
  COREX_REQUIRE(out);
  return guard([&]() -> int {
    *out = new corex_instance{corex::generate(to_config(*cfg))};
    return COREX_OK;
  });
}

void corex_instance_free(corex_instance* inst) { delete inst; }

int corex_instance_write(const corex_instance* inst, const char* dir) {
  COREX_REQUIRE(inst);
  COREX_REQUIRE(dir);
  return guard([&]() -> int {
    const std::filesystem::path d(dir);
    write_to(d / "edges.tsv", [&](std::ostream& os) { corex::write_edge_list(inst->inst.graph, os); });
    write_to(d / "truth.csv", [&](std::ostream& os) { corex::write_truth_csv(inst->inst.truth, os); });
    corex::write_file_atomic(d / "meta.json", inst->inst.metadata_json() + "\n");
    return COREX_OK;
  });
}

int corex_instance_graph(const corex_instance* inst, corex_graph** out) {
  COREX_REQUIRE(inst);
  COREX_REQUIRE(out);
  return guard([&]() -> int {
    *out = new corex_graph{inst->inst.graph};
    return COREX_OK;
  });
}

int corex_instance_truth(const corex_instance* inst, unsigned char* out, size_t len) {
  COREX_REQUIRE(inst);
  return copy_labels(inst->inst.truth, out, len);
}

int corex_bench_run(const corex_synth_config* cfg, const char* methods, int replicates, int rank,
                    corex_experiment** out) {
  COREX_REQUIRE(cfg);
  COREX_REQUIRE(methods);
  COREX_REQUIRE(out);
  return guard([&]() -> int {
    corex::RankMode mode;
    if (rank > 0) mode.fixed = rank;
    *out = new corex_experiment{corex::run_experiment(to_config(*cfg), parse_methods(methods), replicates, mode)};
    return COREX_OK;
  });
}

void corex_experiment_free(corex_experiment* e) { delete e; }

int corex_experiment_summary_json(const corex_experiment* e, corex_text** out) {
  COREX_REQUIRE(e);
  COREX_REQUIRE(out);
  return guard([&]() -> int { return emit_text(e->r.summary_json() + "\n", out); });
}

int corex_experiment_roc_csv(const corex_experiment* e, const char* method, corex_text** out) {
  COREX_REQUIRE(e);
  COREX_REQUIRE(method);
  COREX_REQUIRE(out);
  return guard([&]() -> int {
    for (const auto& s : e->r.summary) {
      if (std::string(corex::to_string(s.method)) != method) continue;
      std::ostringstream os;
      os << "method,fpr,tpr\n";
      for (const auto& p : s.mean_roc) {
        os << method << ',' << corex::format_double(p.fpr) << ',' << corex::format_double(p.tpr) << '\n';
      }
      return emit_text(os.str(), out);
    }
    return fail(COREX_ERR_DOMAIN, std::string("method not in experiment: ") + method);
  });
}

int corex_experiment_mean_auc(const corex_experiment* e, const char* method, double* mean, double* se) {
  COREX_REQUIRE(e);
  COREX_REQUIRE(method);
  for (const auto& s : e->r.summary) {
    if (std::string(corex::to_string(s.method)) != method) continue;
    if (mean) *mean = s.mean_auc;
    if (se) *se = s.se_auc;
    return COREX_OK;
  }
  return fail(COREX_ERR_DOMAIN, std::string("method not in experiment: ") + method);
}

const char* corex_method_names(void) {
  static const std::string names = [] {
    std::string s;
    for (auto m : corex::all_methods()) {
      if (!s.empty()) s += ',';
      s += corex::to_string(m);
    }
    return s;
  }();
  return names.c_str();
}

int corex_diagnose_meta(const char* meta_json, int rank, int with_truth, corex_text** out) {
  COREX_REQUIRE(meta_json);
  COREX_REQUIRE(out);
  return guard([&]() -> int {
    const auto cfg = corex::config_from_metadata(meta_json);
    const auto inst = corex::generate_truth(cfg);
    std::optional<std::vector<bool>> truth;
    if (with_truth) truth = inst.truth;
    return emit_text(corex::diagnostics_json(corex::diagnostics(inst.p, rank, truth)) + "\n", out);
  });
}

int corex_diagnose_graph(const corex_graph* g, int rank, uint64_t seed, const unsigned char* truth,
                         corex_text** out) {
  COREX_REQUIRE(g);
  COREX_REQUIRE(out);
  return guard([&]() -> int {
    const std::size_t n = g->g.num_nodes();
    if (rank < 1 || static_cast<std::size_t>(rank) + 1 >= n) throw corex::DomainError("rank out of range");
    corex::EigsOptions opts;
    opts.seed = seed;
    const auto dec = corex::truncated_eigs(g->g, rank + 1, opts);
    corex::DiagnosticReport rep;
    rep.rank = rank;
    rep.p_star = corex::average_density(g->g);
    rep.eigenvalues.assign(dec.eigenvalues.data(), dec.eigenvalues.data() + dec.eigenvalues.size());
    rep.gap_r = std::abs(rep.eigenvalues[static_cast<std::size_t>(rank) - 1]) -
                std::abs(rep.eigenvalues[static_cast<std::size_t>(rank)]);
    if (truth) {
      const auto low = dec.truncated(rank);
      auto min_core = [&](const corex::CoreScores& s) {
        double best = std::numeric_limits<double>::infinity();
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
          if (truth[i]) {
            best = std::min(best, s.values[i]);
            any = true;
          }
        }
        return any ? std::optional<double>(best) : std::nullopt;
      };
      rep.h_n = min_core(corex::er_scores(low));
      rep.h_prime_n = min_core(corex::config_scores(low, corex::degrees(g->g)));
    }
    return emit_text(corex::diagnostics_json(rep) + "\n", out);
  });
}

int corex_eigengap_sweep(const size_t* sizes, size_t count, double level, corex_text** out) {
  COREX_REQUIRE(sizes);
  COREX_REQUIRE(out);
  return guard([&]() -> int {
    const std::vector<std::size_t> sz(sizes, sizes + count);
    const auto pts = corex::eigengap_profile(corex::demo_rank3_core(), sz, level);
    std::ostringstream os;
    os << "n_periphery,gap,normalized_gap,lambda_1,lambda_2,lambda_3,lambda_4\n";
    for (const auto& p : pts) {
      os << p.n_periphery << ',' << corex::format_double(p.gap) << ',' << corex::format_double(p.normalized_gap);
      for (double l : p.leading) os << ',' << corex::format_double(l);
      os << '\n';
    }
    return emit_text(os.str(), out);
  });
}

}  // extern "C"
