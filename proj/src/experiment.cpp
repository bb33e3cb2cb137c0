#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "corex/error.hpp"
#include "corex/eval.hpp"
#include "corex/parallel.hpp"
#include "corex/rng.hpp"

namespace corex {

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::spectral_er:
      return "spectral_er";
    case Method::spectral_config:
      return "spectral_config";
    case Method::degree:
      return "degree";
    case Method::pagerank:
      return "pagerank";
    case Method::eigenvector:
      return "eigenvector";
    case Method::local_cc:
      return "local_cc";
    case Method::kcore:
      return "kcore";
  }
  return "unknown";
}

std::vector<Method> all_methods() {
  return {Method::spectral_er, Method::spectral_config, Method::degree, Method::pagerank,
          Method::eigenvector, Method::local_cc,        Method::kcore};
}

std::optional<Method> method_from_string(const std::string& s) {
  for (Method m : all_methods()) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

namespace {

bool is_spectral(Method m) { return m == Method::spectral_er || m == Method::spectral_config; }

constexpr int kRocGrid = 100;

// TPR of a curve at fpr = x, following its segments; on a vertical run the
// highest point counts.
double tpr_at(const std::vector<RocPoint>& pts, double x) {
  double best = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const RocPoint& a = pts[k - 1];
    const RocPoint& b = pts[k];
    if (x < a.fpr || x > b.fpr) continue;
    const double t = b.fpr > a.fpr ? (x - a.fpr) / (b.fpr - a.fpr) : 1.0;
    best = std::max(best, a.tpr + t * (b.tpr - a.tpr));
  }
  return best;
}

struct ReplicateOutput {
  ReplicateRecord record;
  std::vector<std::vector<double>> grid_tpr;  // per method
};

ReplicateOutput run_replicate(const SynthConfig& base, const std::vector<Method>& methods, const RankMode& rank_mode,
                              std::uint64_t rep_seed) {
  SynthConfig cfg = base;
  cfg.seed = rep_seed;
  const SynthInstance inst = generate(cfg);
  const SparseGraph& g = inst.graph;

  ReplicateOutput out;
  ReplicateRecord& rec = out.record;
  rec.seed = rep_seed;

  const bool any_spectral = std::any_of(methods.begin(), methods.end(), is_spectral);
  std::optional<SpectralDecomposition> dec;
  if (any_spectral) {
    if (rank_mode.fixed) {
      rec.rank = *rank_mode.fixed;
    } else {
      EcvOptions eo = rank_mode.ecv;
      eo.seed = derive_seed(rep_seed, 7);
      rec.rank = select_rank_ecv(g, rank_mode.candidates, eo).chosen_r;
    }
    EigsOptions opts;
    opts.seed = derive_seed(rep_seed, 11);
    dec = truncated_eigs(g, rec.rank, opts);
  }
  const double p_hat = average_density(g);

  for (Method m : methods) {
    std::vector<double> values;
    std::optional<RocPoint> thr, km;
    std::size_t thr_core = 0;
    if (is_spectral(m)) {
      const CoreScores s = m == Method::spectral_er ? er_scores(*dec) : config_scores(*dec, degrees(g));
      const CorePartition tp = threshold_select(s, p_hat);
      thr = operating_point(tp, inst.truth);
      thr_core = tp.n_core;
      try {
        km = operating_point(kmeans_split(s), inst.truth);
      } catch (const DegenerateError&) {
      }
      values = s.values;
    } else {
      values = method_scores(m, g, 0, rep_seed);
      if (m == Method::kcore) {
        BaselineScores bs{values, BaselineMethod::coreness, 0};
        rec.kcore = kcore_points(bs, inst.truth);
      }
    }
    const RocCurve curve = roc(values, inst.truth, to_string(m));
    rec.auc.push_back(curve.auc);
    rec.threshold_point.push_back(thr);
    rec.kmeans_point.push_back(km);
    rec.threshold_n_core.push_back(thr_core);
    std::vector<double> grid(kRocGrid + 1);
    for (int k = 0; k <= kRocGrid; ++k) grid[static_cast<std::size_t>(k)] = tpr_at(curve.points, double(k) / kRocGrid);
    out.grid_tpr.push_back(std::move(grid));
  }
  return out;
}

nlohmann::ordered_json point_json(const std::optional<RocPoint>& p) {
  if (!p) return nullptr;
  return {{"fpr", p->fpr}, {"tpr", p->tpr}};
}

}  // namespace

std::vector<double> method_scores(Method m, const SparseGraph& g, int rank, std::uint64_t seed) {
  switch (m) {
    case Method::spectral_er:
    case Method::spectral_config: {
      EigsOptions opts;
      opts.seed = seed;
      const auto dec = truncated_eigs(g, rank, opts);
      return m == Method::spectral_er ? er_scores(dec).values : config_scores(dec, degrees(g)).values;
    }
    case Method::degree:
      return degree_scores(g).values;
    case Method::pagerank:
      return pagerank_scores(g).values;
    case Method::eigenvector:
      return eigenvector_scores(g).values;
    case Method::local_cc:
      return local_cc_scores(g).values;
    case Method::kcore:
      return coreness_scores(g).values;
  }
  throw DomainError("unknown method");
}

ExperimentResult run_experiment(const SynthConfig& cfg, const std::vector<Method>& methods, int replicates,
                                const RankMode& rank_mode) {
  validate(cfg);
  if (replicates < 1) throw DomainError("need at least one replicate");
  if (methods.empty()) throw DomainError("no methods requested");

  const auto reps = static_cast<std::size_t>(replicates);
  std::vector<ReplicateOutput> outputs(reps);
  parallel_for(reps, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      outputs[r] = run_replicate(cfg, methods, rank_mode, derive_seed(cfg.seed, r));
    }
  });

  ExperimentResult res;
  res.config = cfg;
  res.master_seed = cfg.seed;
  res.methods = methods;
  for (auto& o : outputs) res.replicates.push_back(o.record);

  const double rd = static_cast<double>(reps);
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    MethodSummary s;
    s.method = methods[mi];
    double sum = 0.0;
    for (const auto& o : outputs) sum += o.record.auc[mi];
    s.mean_auc = sum / rd;
    if (reps > 1) {
      double ss = 0.0;
      for (const auto& o : outputs) ss += (o.record.auc[mi] - s.mean_auc) * (o.record.auc[mi] - s.mean_auc);
      s.se_auc = std::sqrt(ss / (rd - 1.0)) / std::sqrt(rd);
    }
    for (int k = 0; k <= kRocGrid; ++k) {
      double t = 0.0;
      for (const auto& o : outputs) t += o.grid_tpr[mi][static_cast<std::size_t>(k)];
      s.mean_roc.push_back({double(k) / kRocGrid, t / rd});
    }
    res.summary.push_back(std::move(s));
  }
  return res;
}

std::string ExperimentResult::summary_json() const {
  nlohmann::ordered_json j;
  j["config"] = {{"graphon", to_string(config.graphon.kind)},
                 {"n_core", config.n_core},
                 {"n_periphery", config.n_periphery},
                 {"periphery", to_string(config.periphery)},
                 {"target_density", config.target_density},
                 {"degree_ratio", config.degree_ratio}};
  j["master_seed"] = master_seed;
  j["replicates"] = replicates.size();
  nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
  nlohmann::ordered_json ranks = nlohmann::ordered_json::array();
  for (const auto& r : replicates) {
    seeds.push_back(r.seed);
    ranks.push_back(r.rank);
  }
  j["replicate_seeds"] = seeds;
  j["ranks"] = ranks;

  nlohmann::ordered_json ms = nlohmann::ordered_json::object();
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    nlohmann::ordered_json m;
    m["mean_auc"] = summary[mi].mean_auc;
    m["se_auc"] = summary[mi].se_auc;
    nlohmann::ordered_json aucs = nlohmann::ordered_json::array();
    for (const auto& r : replicates) aucs.push_back(r.auc[mi]);
    m["auc"] = aucs;
    if (methods[mi] == Method::spectral_er || methods[mi] == Method::spectral_config) {
      nlohmann::ordered_json thr = nlohmann::ordered_json::array(), km = nlohmann::ordered_json::array(),
                             nc = nlohmann::ordered_json::array();
      for (const auto& r : replicates) {
        thr.push_back(point_json(r.threshold_point[mi]));
        km.push_back(point_json(r.kmeans_point[mi]));
        nc.push_back(r.threshold_n_core[mi]);
      }
      m["threshold_points"] = thr;
      m["threshold_n_core"] = nc;
      m["kmeans_points"] = km;
    }
    if (methods[mi] == Method::kcore) {
      nlohmann::ordered_json all = nlohmann::ordered_json::array();
      for (const auto& r : replicates) {
        nlohmann::ordered_json pts = nlohmann::ordered_json::array();
        for (const auto& kp : r.kcore) pts.push_back({{"k", kp.k}, {"fpr", kp.point.fpr}, {"tpr", kp.point.tpr}});
        all.push_back(pts);
      }
      m["kcore_points"] = all;
    }
    ms[to_string(methods[mi])] = m;
  }
  j["methods"] = ms;
  return j.dump(2);
}

std::string ExperimentResult::roc_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "method,fpr,tpr\n";
  for (const auto& s : summary) {
    for (const auto& p : s.mean_roc) out << to_string(s.method) << ',' << p.fpr << ',' << p.tpr << '\n';
  }
  return out.str();
}

ProbabilityMatrix demo_rank3_core() {
  return block_model({100, 100, 100}, {{0.40, 0.05, 0.05}, {0.05, 0.30, 0.05}, {0.05, 0.05, 0.20}});
}

std::vector<EigengapPoint> eigengap_profile(const ProbabilityMatrix& core_p,
                                            std::span<const std::size_t> periphery_sizes, double periphery_level) {
  std::vector<EigengapPoint> out;
  for (std::size_t np : periphery_sizes) {
    const ProbabilityMatrix p = assemble_er(core_p, np, periphery_level);
    SpectralDecomposition dec;
    if (p.size() <= 600) {
      dec = dense_eigs(p, 4);
    } else {
      EigsOptions opts;
      opts.max_sweeps = 2000;
      dec = truncated_eigs(DenseOperator(p), 4, opts);
    }
    EigengapPoint pt;
    pt.n_periphery = np;
    pt.leading.assign(dec.eigenvalues.data(), dec.eigenvalues.data() + 4);
    pt.gap = std::abs(pt.leading[2]) - std::abs(pt.leading[3]);
    pt.normalized_gap = pt.gap / std::abs(pt.leading[0]);
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace corex
