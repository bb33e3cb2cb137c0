#pragma once

#include <string>
#include <vector>

#include "corex/graph.hpp"

namespace corex {

enum class BaselineMethod { degree, pagerank, eigenvector, local_cc, coreness };

const char* to_string(BaselineMethod m) noexcept;

struct BaselineScores {
  std::vector<double> values;
  BaselineMethod method = BaselineMethod::degree;
  int iterations = 0;

  std::size_t size() const noexcept { return values.size(); }
};

BaselineScores degree_scores(const SparseGraph& g);

/// Power iteration on pr = (1 - damping)/n + damping * W^T pr, W the
/// row-normalized adjacency; isolated nodes spread their mass uniformly.
/// Stops when the L1 change is <= tol; ConvergenceError after 1000 steps.
BaselineScores pagerank_scores(const SparseGraph& g, double damping = 0.85, double tol = 1e-12);

/// Nonnegative leading eigenvector of A with unit 2-norm, by power iteration
/// on A + I from the all-ones vector (the shift keeps bipartite graphs from
/// oscillating). Throws DomainError on an edgeless graph.
BaselineScores eigenvector_scores(const SparseGraph& g, double tol = 1e-12, int max_iterations = 100000);

/// 2 T_i / (d_i (d_i - 1)); zero when d_i < 2.
BaselineScores local_cc_scores(const SparseGraph& g);

/// Core number of every node (bucket peeling).
BaselineScores coreness_scores(const SparseGraph& g);

}  // namespace corex
