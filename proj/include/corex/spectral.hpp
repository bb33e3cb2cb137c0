#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corex/graph.hpp"

namespace corex {

/// Symmetric linear operator x -> Mx, applied to a block of columns.
class SymmetricOperator {
 public:
  virtual ~SymmetricOperator() = default;
  virtual std::size_t size() const = 0;
  /// out = M * in. out is pre-sized to in's shape.
  virtual void apply(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const = 0;
};

/// The binary adjacency matrix of a graph.
class AdjacencyOperator final : public SymmetricOperator {
 public:
  explicit AdjacencyOperator(const SparseGraph& g) : g_(g) {}
  std::size_t size() const override { return g_.num_nodes(); }
  void apply(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const override;

 private:
  const SparseGraph& g_;
};

/// Symmetric sparse matrix with real weights, compressed by row. Each
/// off-diagonal entry must be inserted from both ends.
class WeightedSparseOperator final : public SymmetricOperator {
 public:
  WeightedSparseOperator(std::size_t n, std::vector<std::size_t> offsets, std::vector<NodeId> columns,
                         std::vector<double> weights);
  std::size_t size() const override { return n_; }
  void apply(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const override;

 private:
  std::size_t n_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> columns_;
  std::vector<double> weights_;
};

/// A dense probability matrix viewed as an operator.
class DenseOperator final : public SymmetricOperator {
 public:
  explicit DenseOperator(const ProbabilityMatrix& p) : p_(p) {}
  std::size_t size() const override { return p_.size(); }
  void apply(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const override;

 private:
  const ProbabilityMatrix& p_;
};

enum class EigenOrder {
  magnitude,  // largest |lambda| first (truncated SVD of a symmetric matrix)
  signed_value,  // largest lambda first
};

struct EigsOptions {
  double tol = 1e-8;  // residual bound relative to max(1, |lambda_1|)
  int max_sweeps = 300;  // restart cycles
  int oversampling = 10;
  std::uint64_t seed = 0;
  EigenOrder order = EigenOrder::magnitude;
};

/// Top-r eigenpairs of a symmetric matrix. Houses the implicit rank-r
/// estimate U diag(lambda) U^T; the dense product is never formed.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // signed, ordered per EigenOrder
  Eigen::MatrixXd eigenvectors;  // n x r, orthonormal columns
  std::size_t source_n = 0;
  int sweeps = 0;
  double max_residual = 0.0;

  int rank() const noexcept { return static_cast<int>(eigenvalues.size()); }
  /// Leading r' <= r pairs.
  SpectralDecomposition truncated(int r) const;
};

/// Restarted randomized block Krylov iteration: each cycle grows the block
/// r + oversampling by up to three Krylov steps (fully reorthogonalized),
/// extracts Ritz pairs and restarts from the leading ones.
/// Throws DomainError unless 1 <= r < n, ConvergenceError when the residual
/// bound is not met within max_sweeps cycles.
SpectralDecomposition truncated_eigs(const SymmetricOperator& op, int r, const EigsOptions& opts = {});
SpectralDecomposition truncated_eigs(const SparseGraph& g, int r, const EigsOptions& opts = {});

/// Decomposition from explicitly given pairs (tests, diagnostics).
SpectralDecomposition make_decomposition(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors);

/// Full dense eigendecomposition of P, ordered per `order`.
SpectralDecomposition dense_eigs(const ProbabilityMatrix& p, int r, EigenOrder order = EigenOrder::magnitude);

enum class ScoreModel { er, config };

const char* to_string(ScoreModel m) noexcept;

struct CoreScores {
  std::vector<double> values;
  ScoreModel model = ScoreModel::er;
  int rank_used = 0;
  bool centered = true;
  /// Nodes pre-classified periphery and left out of the degree correction
  /// (zero observed degree). Their score is 0.
  std::vector<std::size_t> excluded;

  std::size_t size() const noexcept { return values.size(); }
};

/// S_i = || (U L U^T H)_{i,*} ||_2 with H = I - 11^T/n, evaluated through an
/// r x r factor of U^T H U. Cost O(n r^2).
CoreScores er_scores(const SpectralDecomposition& dec);

/// S'_i = || (U L U^T D^-1 H)_{i,*} ||_2. Nodes with zero degree are excluded
/// from D^-1 and from the centering, and reported in `excluded`.
CoreScores config_scores(const SpectralDecomposition& dec, const DegreeVector& deg);

/// Exact dense scores of a known P. For config, `expected_degrees` defaults
/// to the row sums of P; any zero degree throws DomainError.
CoreScores scores_from_truth(const ProbabilityMatrix& p, ScoreModel model,
                             const std::optional<DegreeVector>& expected_degrees = std::nullopt);

struct DiagnosticReport {
  double p_star = 0.0;
  std::optional<double> h_n;
  std::optional<double> h_prime_n;
  std::vector<double> eigenvalues;  // all of P, by decreasing magnitude
  std::optional<double> gap_r;      // |lambda_r| - |lambda_{r+1}|
  int rank = 0;
};

/// Dense diagnostics of a probability matrix. h(n) / h'(n) are reported only
/// when `is_core` is given and names at least one core node; h'(n) also
/// requires all expected degrees to be positive.
DiagnosticReport diagnostics(const ProbabilityMatrix& p, int r,
                             const std::optional<std::vector<bool>>& is_core = std::nullopt);

std::string diagnostics_json(const DiagnosticReport& report);

}  // namespace corex
