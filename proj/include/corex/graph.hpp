#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace corex {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;
};

/// Undirected, unweighted, loop-free graph in compressed neighbor-list form.
/// Neighbor lists are sorted and duplicate-free; immutable after construction.
class SparseGraph {
 public:
  SparseGraph() = default;

  /// Builds a graph on n nodes. Reversed and repeated pairs are merged.
  /// Throws ValidationError on a self-loop and RangeError on an id >= n.
  static SparseGraph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return num_edges_; }

  std::span<const NodeId> neighbors(std::size_t i) const noexcept {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  std::size_t degree(std::size_t i) const noexcept { return offsets_[i + 1] - offsets_[i]; }
  bool has_edge(std::size_t i, std::size_t j) const noexcept;

  /// Each undirected edge once, as (u, v) with u < v, in row order.
  std::vector<Edge> edge_list() const;

  /// Node ids renamed by new_id = perm[old_id].
  SparseGraph permuted(std::span<const std::size_t> perm) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  std::size_t num_edges_ = 0;
};

/// Dense symmetric edge-probability matrix with zero diagonal, row-major.
class ProbabilityMatrix {
 public:
  ProbabilityMatrix() = default;

  /// Takes ownership of an n*n row-major array. Throws ValidationError unless
  /// the array is symmetric, has entries in [0, 1] and a zero diagonal.
  ProbabilityMatrix(std::size_t n, std::vector<double> entries);

  /// All off-diagonal entries equal to value.
  static ProbabilityMatrix constant(std::size_t n, double value);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {entries_.data() + i * n_, n_}; }
  std::span<const double> data() const noexcept { return entries_; }

  /// Expected degrees: row sums.
  std::vector<double> row_sums() const;
  double max_entry() const noexcept;
  /// Mean over the n(n-1) off-diagonal entries.
  double mean_off_diagonal() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

/// Per-node degrees; observed counts or expected (real) values.
struct DegreeVector {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const noexcept { return values[i]; }
};

DegreeVector degrees(const SparseGraph& g);

/// Plug-in edge density 2m / (n^2 - n). Throws DomainError when n < 2.
double average_density(const SparseGraph& g);

/// A_ij ~ Bernoulli(P_ij) independently for i < j. Row i draws from its own
/// counter stream derived from (seed, i).
SparseGraph sample_adjacency(const ProbabilityMatrix& p, std::uint64_t seed);

/// Reads whitespace-separated 0-based id pairs. '#' starts a comment; an
/// optional first line "n <count>" fixes the node count, otherwise it is
/// max id + 1.
SparseGraph load_edge_list(std::istream& in);
SparseGraph load_edge_list(const std::filesystem::path& path);

/// Writes the "n <count>" header followed by one "u\tv" line per edge.
void write_edge_list(const SparseGraph& g, std::ostream& out);

/// Ground-truth labels from CSV with header node_id,is_core.
std::vector<bool> load_truth_csv(std::istream& in, std::size_t n);
std::vector<bool> load_truth_csv(const std::filesystem::path& path, std::size_t n);
void write_truth_csv(const std::vector<bool>& is_core, std::ostream& out);

}  // namespace corex
