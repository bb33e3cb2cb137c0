#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "corex/error.hpp"
#include "corex/parallel.hpp"
#include "corex/rng.hpp"
#include "corex/spectral.hpp"

namespace corex {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Row i of out = sum over stored entries (i, j, w) of w * row j of in.
template <typename RowFn>
void sparse_apply(std::size_t n, const Eigen::MatrixXd& in, Eigen::MatrixXd& out, RowFn&& row_fn) {
  const RowMajor x = in;
  RowMajor y(x.rows(), x.cols());
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto yi = y.row(static_cast<Eigen::Index>(i));
      yi.setZero();
      row_fn(i, [&](std::size_t j, double w) { yi.noalias() += w * x.row(static_cast<Eigen::Index>(j)); });
    }
  });
  out = y;
}

constexpr Eigen::Index kKrylovDepth = 3;

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

std::vector<Eigen::Index> selection_order(const Eigen::VectorXd& values, EigenOrder order) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (order == EigenOrder::signed_value) return values[a] > values[b];
    const double ma = std::abs(values[a]);
    const double mb = std::abs(values[b]);
    if (ma != mb) return ma > mb;
    return values[a] > values[b];
  });
  return idx;
}

// Sign convention: the largest-magnitude entry of each eigenvector is positive.
void fix_signs(Eigen::MatrixXd& vecs) {
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    Eigen::Index arg = 0;
    vecs.col(c).cwiseAbs().maxCoeff(&arg);
    if (vecs(arg, c) < 0.0) vecs.col(c) *= -1.0;
  }
}

}  // namespace

void AdjacencyOperator::apply(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const {
  sparse_apply(g_.num_nodes(), in, out, [&](std::size_t i, auto&& add) {
    for (NodeId j : g_.neighbors(i)) add(j, 1.0);
  });
}

WeightedSparseOperator::WeightedSparseOperator(std::size_t n, std::vector<std::size_t> offsets,
                                               std::vector<NodeId> columns, std::vector<double> weights)
    : n_(n), offsets_(std::move(offsets)), columns_(std::move(columns)), weights_(std::move(weights)) {
  if (offsets_.size() != n_ + 1 || columns_.size() != weights_.size() || offsets_.back() != columns_.size()) {
    throw ValidationError("inconsistent sparse operator layout");
  }
}

void WeightedSparseOperator::apply(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const {
  sparse_apply(n_, in, out, [&](std::size_t i, auto&& add) {
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) add(columns_[k], weights_[k]);
  });
}

void DenseOperator::apply(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const {
  const auto n = static_cast<Eigen::Index>(p_.size());
  Eigen::Map<const RowMajor> p(p_.data().data(), n, n);
  out.resize(in.rows(), in.cols());
  // Fixed row chunks: the product kernel's rounding depends on the block
  // shape, so chunks must not follow the thread count.
  constexpr Eigen::Index kChunk = 64;
  const auto chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  parallel_for(chunks, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      const auto b = static_cast<Eigen::Index>(c) * kChunk;
      const auto len = std::min(kChunk, n - b);
      out.middleRows(b, len).noalias() = p.middleRows(b, len) * in;
    }
  });
}

SpectralDecomposition SpectralDecomposition::truncated(int r) const {
  if (r < 1 || r > rank()) throw DomainError("truncation rank out of range");
  SpectralDecomposition out;
  out.eigenvalues = eigenvalues.head(r);
  out.eigenvectors = eigenvectors.leftCols(r);
  out.source_n = source_n;
  out.sweeps = sweeps;
  out.max_residual = max_residual;
  return out;
}

SpectralDecomposition truncated_eigs(const SymmetricOperator& op, int r, const EigsOptions& opts) {
  const std::size_t n = op.size();
  if (n == 0) throw DomainError("empty matrix");
  if (r < 1 || static_cast<std::size_t>(r) >= n) {
    throw DomainError("rank must satisfy 1 <= r < n (r=" + std::to_string(r) + ", n=" + std::to_string(n) + ")");
  }
  const auto rows = static_cast<Eigen::Index>(n);
  const auto block = static_cast<Eigen::Index>(std::min<std::size_t>(n, static_cast<std::size_t>(r + std::max(0, opts.oversampling))));

  if (rows < 2 * block) {
    // No room for a Krylov block; the operator is small enough to solve densely.
    Eigen::MatrixXd full(rows, rows);
    op.apply(Eigen::MatrixXd::Identity(rows, rows), full);
    full = 0.5 * (full + full.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full);
    const auto idx = selection_order(es.eigenvalues(), opts.order);
    SpectralDecomposition dec;
    dec.eigenvalues.resize(r);
    dec.eigenvectors.resize(rows, r);
    for (int c = 0; c < r; ++c) {
      dec.eigenvalues[c] = es.eigenvalues()[idx[static_cast<std::size_t>(c)]];
      dec.eigenvectors.col(c) = es.eigenvectors().col(idx[static_cast<std::size_t>(c)]);
    }
    fix_signs(dec.eigenvectors);
    dec.source_n = n;
    dec.sweeps = 0;
    dec.max_residual = (full * dec.eigenvectors - dec.eigenvectors * dec.eigenvalues.asDiagonal()).colwise().norm().maxCoeff();
    return dec;
  }

  CounterRng rng(opts.seed, 0);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd start(rows, block);
  for (Eigen::Index c = 0; c < block; ++c) {
    for (Eigen::Index i = 0; i < rows; ++i) start(i, c) = gauss(rng);
  }
  Eigen::MatrixXd q = orthonormal_basis(start);

  // Krylov depth per restart cycle, limited so the basis fits in R^n.
  const Eigen::Index depth = std::min<Eigen::Index>(kKrylovDepth, rows / block - 1);
  const Eigen::Index width = block * (depth + 1);
  Eigen::MatrixXd v(rows, width);
  Eigen::MatrixXd av(rows, width);
  double residual = std::numeric_limits<double>::infinity();

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    v.leftCols(block) = q;
    for (Eigen::Index k = 0; k <= depth; ++k) {
      Eigen::MatrixXd blk_out(rows, block);
      op.apply(v.middleCols(k * block, block), blk_out);
      av.middleCols(k * block, block) = blk_out;
      if (k == depth) break;
      // Next block: A times the newest block, orthogonalized twice against the basis so far.
      const Eigen::Index used = (k + 1) * block;
      for (int pass = 0; pass < 2; ++pass) blk_out -= v.leftCols(used) * (v.leftCols(used).transpose() * blk_out);
      Eigen::MatrixXd next = orthonormal_basis(blk_out);
      next -= v.leftCols(used) * (v.leftCols(used).transpose() * next);
      v.middleCols(used, block) = orthonormal_basis(next);
    }

    Eigen::MatrixXd t = v.transpose() * av;
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(t);
    const auto order = selection_order(ritz.eigenvalues(), opts.order);

    Eigen::MatrixXd w(width, block);
    for (Eigen::Index c = 0; c < block; ++c) w.col(c) = ritz.eigenvectors().col(order[static_cast<std::size_t>(c)]);
    Eigen::VectorXd theta(r);
    for (int c = 0; c < r; ++c) theta[c] = ritz.eigenvalues()[order[static_cast<std::size_t>(c)]];
    Eigen::MatrixXd x = v * w.leftCols(r);
    const Eigen::MatrixXd resid = av * w.leftCols(r) - x * theta.asDiagonal();
    residual = resid.colwise().norm().maxCoeff();
    const double scale = std::max(1.0, ritz.eigenvalues().cwiseAbs().maxCoeff());

    if (residual <= opts.tol * scale) {
      fix_signs(x);
      SpectralDecomposition dec;
      dec.eigenvalues = std::move(theta);
      dec.eigenvectors = std::move(x);
      dec.source_n = n;
      dec.sweeps = sweep;
      dec.max_residual = residual;
      return dec;
    }
    q = orthonormal_basis(v * w);
  }
  throw ConvergenceError("block Krylov iteration did not converge in " + std::to_string(opts.max_sweeps) + " cycles",
                         residual);
}

SpectralDecomposition truncated_eigs(const SparseGraph& g, int r, const EigsOptions& opts) {
  if (g.num_edges() == 0) throw DomainError("graph has no edges");
  return truncated_eigs(AdjacencyOperator(g), r, opts);
}

SpectralDecomposition make_decomposition(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors) {
  if (eigenvalues.size() != eigenvectors.cols()) throw ValidationError("eigenpair count mismatch");
  SpectralDecomposition dec;
  dec.source_n = static_cast<std::size_t>(eigenvectors.rows());
  dec.eigenvalues = std::move(eigenvalues);
  dec.eigenvectors = std::move(eigenvectors);
  return dec;
}

SpectralDecomposition dense_eigs(const ProbabilityMatrix& p, int r, EigenOrder order) {
  const auto n = static_cast<Eigen::Index>(p.size());
  if (r < 1 || r > n) throw DomainError("rank out of range");
  Eigen::Map<const RowMajor> m(p.data().data(), n, n);
  const Eigen::MatrixXd dense = m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  const auto idx = selection_order(es.eigenvalues(), order);
  Eigen::VectorXd vals(r);
  Eigen::MatrixXd vecs(n, r);
  for (int c = 0; c < r; ++c) {
    vals[c] = es.eigenvalues()[idx[static_cast<std::size_t>(c)]];
    vecs.col(c) = es.eigenvectors().col(idx[static_cast<std::size_t>(c)]);
  }
  fix_signs(vecs);
  return make_decomposition(std::move(vals), std::move(vecs));
}

}  // namespace corex
