#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corex/baselines.hpp"
#include "corex/coreid.hpp"
#include "corex/synth.hpp"

namespace corex {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) ... (1,1), nondecreasing in both
  double auc = 0.0;
  std::string method;
};

/// Sweeps the threshold down through the distinct score values; nodes with
/// equal scores cross together. AUC is the trapezoidal area. Throws
/// DomainError unless truth has at least one core and one periphery node.
RocCurve roc(std::span<const double> scores, const std::vector<bool>& truth, std::string method = {});

/// True/false positive rates of a fixed labeling.
RocPoint operating_point(const std::vector<bool>& predicted_core, const std::vector<bool>& truth);
inline RocPoint operating_point(const CorePartition& part, const std::vector<bool>& truth) {
  return operating_point(part.labels, truth);
}

struct KcorePoint {
  int k = 0;
  RocPoint point;
};

/// One point per k = 0 .. max coreness + 1, predicting {i : coreness_i >= k}.
std::vector<KcorePoint> kcore_points(const BaselineScores& coreness, const std::vector<bool>& truth);

/// Methods compared in the benchmark harness.
enum class Method { spectral_er, spectral_config, degree, pagerank, eigenvector, local_cc, kcore };

const char* to_string(Method m) noexcept;
std::optional<Method> method_from_string(const std::string& s);
std::vector<Method> all_methods();

struct RankMode {
  /// Empty -> edge cross-validation over `candidates`.
  std::optional<int> fixed;
  std::vector<int> candidates = {1, 2, 3, 4, 5, 6, 7, 8};
  EcvOptions ecv;
};

struct ReplicateRecord {
  std::uint64_t seed = 0;
  int rank = 0;
  std::vector<double> auc;  // per method, same order as ExperimentResult::methods
  /// Threshold and k-means operating points per spectral method (NaN-free;
  /// absent when the split was degenerate).
  std::vector<std::optional<RocPoint>> threshold_point;
  std::vector<std::optional<RocPoint>> kmeans_point;
  std::vector<std::size_t> threshold_n_core;
  std::vector<KcorePoint> kcore;
};

struct MethodSummary {
  Method method;
  double mean_auc = 0.0;
  double se_auc = 0.0;
  std::vector<RocPoint> mean_roc;  // vertical average on a fixed FPR grid
};

struct ExperimentResult {
  SynthConfig config;
  std::uint64_t master_seed = 0;
  std::vector<Method> methods;
  std::vector<ReplicateRecord> replicates;
  std::vector<MethodSummary> summary;

  std::string summary_json() const;
  /// CSV "method,fpr,tpr" of the averaged curves.
  std::string roc_csv() const;
};

/// Replicate seeds are derive_seed(cfg.seed, replicate index); replicates run
/// concurrently and are aggregated in index order.
ExperimentResult run_experiment(const SynthConfig& cfg, const std::vector<Method>& methods, int replicates,
                                const RankMode& rank_mode);

/// Scores for one method on one graph (the spectral methods use `rank`).
std::vector<double> method_scores(Method m, const SparseGraph& g, int rank, std::uint64_t seed);

struct EigengapPoint {
  std::size_t n_periphery = 0;
  double gap = 0.0;             // |lambda_3| - |lambda_4|
  double normalized_gap = 0.0;  // gap / |lambda_1|
  std::vector<double> leading;  // lambda_1..lambda_4 by magnitude
};

/// For each periphery size, assembles an ER-type periphery around core_p and
/// reports the third eigengap of the assembled matrix.
std::vector<EigengapPoint> eigengap_profile(const ProbabilityMatrix& core_p,
                                            std::span<const std::size_t> periphery_sizes, double periphery_level);

/// The three-block rank-3 core used for eigengap demonstrations.
ProbabilityMatrix demo_rank3_core();

}  // namespace corex
