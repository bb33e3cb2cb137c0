#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "corex/graph.hpp"
#include "corex/spectral.hpp"

namespace testing {

// Independent of the library's own generators.
inline corex::SparseGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(p);
  std::vector<corex::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(gen)) edges.push_back({static_cast<corex::NodeId>(i), static_cast<corex::NodeId>(j)});
    }
  }
  return corex::SparseGraph::from_edges(n, edges);
}

inline Eigen::MatrixXd dense(const corex::SparseGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edge_list()) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

inline Eigen::MatrixXd dense(const corex::ProbabilityMatrix& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = p(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return m;
}

inline Eigen::MatrixXd centering(Eigen::Index n) {
  return Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
}

// Row norms of M, computed the slow way.
inline std::vector<double> row_norms(const Eigen::MatrixXd& m) {
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m.row(i).norm();
  return out;
}

// Eigenpairs of a dense symmetric matrix, largest |lambda| first.
struct DensePairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

inline DensePairs dense_top(const Eigen::MatrixXd& a, int r) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) idx[static_cast<std::size_t>(i)] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index x, Eigen::Index y) {
    return std::abs(es.eigenvalues()[x]) > std::abs(es.eigenvalues()[y]);
  });
  DensePairs out{Eigen::VectorXd(r), Eigen::MatrixXd(a.rows(), r)};
  for (int c = 0; c < r; ++c) {
    out.values[c] = es.eigenvalues()[idx[static_cast<std::size_t>(c)]];
    out.vectors.col(c) = es.eigenvectors().col(idx[static_cast<std::size_t>(c)]);
  }
  return out;
}

// Largest principal angle (radians) between the column spaces of two
// orthonormal bases of equal width.
inline double max_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.transpose() * b);
  const double smallest = std::min(1.0, svd.singularValues().minCoeff());
  return std::acos(smallest);
}

}  // namespace testing
