#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corex/graph.hpp"
#include "corex/spectral.hpp"

namespace corex {

enum class SelectionMethod { topk, threshold, kmeans };

const char* to_string(SelectionMethod m) noexcept;

struct CorePartition {
  std::vector<bool> labels;  // true = core
  std::size_t n_core = 0;
  SelectionMethod method = SelectionMethod::topk;
  /// Core = { i : score_i > cutoff }. Absent for top-k.
  std::optional<double> cutoff;
};

inline constexpr double kDefaultEpsilon = 0.01;
inline constexpr double kDefaultKmeansFloor = 1e-12;

/// The n_core largest scores; ties at the boundary go to the smaller index.
CorePartition identify_top_k(const CoreScores& scores, std::size_t n_core);

/// Cutoff sqrt(p_hat^(1-eps) ln n) for ER-type scores.
double er_cutoff(double p_hat, std::size_t n, double eps = kDefaultEpsilon);
/// Cutoff sqrt(ln n) / (n sqrt(p_hat^(1+eps))) for configuration-type scores.
double config_cutoff(double p_hat, std::size_t n, double eps = kDefaultEpsilon);

CorePartition threshold_er(const CoreScores& scores, double p_hat, std::size_t n, double eps = kDefaultEpsilon);
CorePartition threshold_config(const CoreScores& scores, double p_hat, std::size_t n,
                               double eps = kDefaultEpsilon);
/// Dispatches on scores.model.
CorePartition threshold_select(const CoreScores& scores, double p_hat, double eps = kDefaultEpsilon);

/// Two-cluster split of log(max(score, floor)); the upper cluster is core.
/// Exact for n <= 10^6 (scan of all split points of the sorted values,
/// minimizing within-cluster squared error), Lloyd from min/max centroids
/// otherwise. Throws DegenerateError when all clamped scores are equal.
CorePartition kmeans_split(const CoreScores& scores, double floor = kDefaultKmeansFloor);

struct RankSelection {
  int chosen_r = 0;
  std::vector<int> candidates;
  std::vector<double> candidate_losses;  // fold-averaged held-out loss, per candidate
  int folds = 0;
  double holdout_fraction = 0.0;
  std::uint64_t seed = 0;
  std::string loss = "squared_error";
};

struct EcvOptions {
  int folds = 3;
  double holdout_fraction = 0.1;
  std::uint64_t seed = 0;
  double eig_tol = 1e-8;
};

/// Edge cross-validation: per fold, hold out each unordered pair
/// independently with probability holdout_fraction, zero it, scale the rest by
/// 1/(1 - holdout_fraction), and score each candidate rank by the mean squared
/// error of the [0,1]-clamped low-rank fit on held-out pairs.
RankSelection select_rank_ecv(const SparseGraph& g, std::span<const int> candidates, const EcvOptions& opts = {});

std::string rank_selection_json(const RankSelection& sel);

}  // namespace corex
