#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "corex/coreid.hpp"
#include "corex/error.hpp"
#include "corex/rng.hpp"

namespace corex {

namespace {

struct HeldOutPair {
  NodeId i;
  NodeId j;
  double observed;
};

struct Fold {
  WeightedSparseOperator op;
  std::vector<HeldOutPair> held_out;
};

// Pair (i, j), i < j, is held out when row i's stream draws below the
// holdout fraction at position j.
Fold make_fold(const SparseGraph& g, double holdout, std::uint64_t fold_seed) {
  const std::size_t n = g.num_nodes();
  const double keep_scale = 1.0 / (1.0 - holdout);
  std::vector<std::vector<std::pair<NodeId, double>>> rows(n);
  std::vector<HeldOutPair> held;
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(fold_seed, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool masked = rng.uniform() < holdout;
      const bool edge = g.has_edge(i, j);
      if (masked) {
        held.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), edge ? 1.0 : 0.0});
      } else if (edge) {
        rows[i].emplace_back(static_cast<NodeId>(j), keep_scale);
        rows[j].emplace_back(static_cast<NodeId>(i), keep_scale);
      }
    }
  }
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<NodeId> cols;
  std::vector<double> weights;
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    for (const auto& [c, w] : r) {
      cols.push_back(c);
      weights.push_back(w);
    }
    offsets[i + 1] = cols.size();
  }
  return {WeightedSparseOperator(n, std::move(offsets), std::move(cols), std::move(weights)), std::move(held)};
}

}  // namespace

RankSelection select_rank_ecv(const SparseGraph& g, std::span<const int> candidates, const EcvOptions& opts) {
  const std::size_t n = g.num_nodes();
  if (candidates.empty()) throw DomainError("no candidate ranks");
  if (!(opts.holdout_fraction > 0.0 && opts.holdout_fraction < 1.0)) {
    throw DomainError("holdout fraction must lie in (0, 1)");
  }
  if (opts.folds < 1) throw DomainError("need at least one fold");
  for (int r : candidates) {
    if (r < 1 || static_cast<std::size_t>(r) >= n) {
      throw DomainError("candidate rank " + std::to_string(r) + " outside [1, n)");
    }
  }

  RankSelection sel;
  sel.candidates.assign(candidates.begin(), candidates.end());
  sel.folds = opts.folds;
  sel.holdout_fraction = opts.holdout_fraction;
  sel.seed = opts.seed;
  sel.candidate_losses.assign(candidates.size(), 0.0);

  if (candidates.size() == 1) {
    sel.chosen_r = candidates.front();
    sel.candidate_losses.assign(1, std::numeric_limits<double>::quiet_NaN());
    return sel;
  }

  const int r_max = *std::max_element(candidates.begin(), candidates.end());
  for (int f = 0; f < opts.folds; ++f) {
    const std::uint64_t fold_seed = derive_seed(opts.seed, static_cast<std::uint64_t>(f));
    const Fold fold = make_fold(g, opts.holdout_fraction, fold_seed);
    if (fold.held_out.empty()) throw DomainError("fold held out no pairs");

    EigsOptions eo;
    eo.tol = opts.eig_tol;
    eo.seed = derive_seed(fold_seed, 0xEC7);
    const SpectralDecomposition dec = truncated_eigs(fold.op, r_max, eo);
    const Eigen::MatrixXd& u = dec.eigenvectors;

    // Running low-rank fit on held-out pairs, one eigenpair at a time.
    std::vector<double> fit(fold.held_out.size(), 0.0);
    std::vector<double> loss_at_rank(static_cast<std::size_t>(r_max) + 1, 0.0);
    for (int k = 0; k < r_max; ++k) {
      const double lambda = dec.eigenvalues[k];
      double sse = 0.0;
      for (std::size_t p = 0; p < fold.held_out.size(); ++p) {
        const auto& h = fold.held_out[p];
        fit[p] += lambda * u(h.i, k) * u(h.j, k);
        const double e = std::clamp(fit[p], 0.0, 1.0) - h.observed;
        sse += e * e;
      }
      loss_at_rank[static_cast<std::size_t>(k) + 1] = sse / static_cast<double>(fold.held_out.size());
    }
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      sel.candidate_losses[c] += loss_at_rank[static_cast<std::size_t>(candidates[c])] / opts.folds;
    }
  }

  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    const double lc = sel.candidate_losses[c];
    const double lb = sel.candidate_losses[best];
    if (lc < lb || (lc == lb && candidates[c] < candidates[best])) best = c;
  }
  sel.chosen_r = candidates[best];
  return sel;
}

std::string rank_selection_json(const RankSelection& sel) {
  nlohmann::ordered_json j;
  j["chosen_r"] = sel.chosen_r;
  j["candidates"] = sel.candidates;
  nlohmann::ordered_json losses = nlohmann::ordered_json::array();
  for (double l : sel.candidate_losses) {
    losses.push_back(std::isfinite(l) ? nlohmann::ordered_json(l) : nlohmann::ordered_json(nullptr));
  }
  j["losses"] = losses;
  j["folds"] = sel.folds;
  j["holdout_fraction"] = sel.holdout_fraction;
  j["seed"] = sel.seed;
  j["loss"] = sel.loss;
  return j.dump(2);
}

}  // namespace corex
