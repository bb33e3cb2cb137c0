#include <cmath>

#include "corex/error.hpp"
#include "corex/parallel.hpp"
#include "corex/spectral.hpp"

namespace corex {

const char* to_string(ScoreModel m) noexcept { return m == ScoreModel::er ? "er" : "config"; }

namespace {

// Given the n x r "right factor" F (rows of P-hat's column space after column
// scaling) and the active row set, returns R with R^T R = F^T H F, where H
// centers over the active rows. F's inactive rows are ignored.
Eigen::MatrixXd centered_factor(const Eigen::MatrixXd& f, const std::vector<bool>& active, std::size_t n_active) {
  const Eigen::Index r = f.cols();
  Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(r);
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    if (active[static_cast<std::size_t>(i)]) mean += f.row(i);
  }
  mean /= static_cast<double>(n_active);

  Eigen::MatrixXd centered(static_cast<Eigen::Index>(n_active), r);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    if (active[static_cast<std::size_t>(i)]) centered.row(k++) = f.row(i) - mean;
  }
  if (centered.rows() < r) {
    // Pad so the QR below yields a square r x r factor.
    centered.conservativeResize(r, Eigen::NoChange);
    centered.bottomRows(r - k).setZero();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(centered);
  return qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
}

// score_i = || R * (L U_i^T) ||
std::vector<double> row_scores(const SpectralDecomposition& dec, const Eigen::MatrixXd& factor,
                               const std::vector<bool>& active) {
  const Eigen::MatrixXd weighted = dec.eigenvectors * dec.eigenvalues.asDiagonal();
  const auto n = static_cast<std::size_t>(weighted.rows());
  std::vector<double> out(n, 0.0);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (!active[i]) continue;
      out[i] = (factor * weighted.row(static_cast<Eigen::Index>(i)).transpose()).norm();
    }
  });
  return out;
}

}  // namespace

CoreScores er_scores(const SpectralDecomposition& dec) {
  const auto n = static_cast<std::size_t>(dec.eigenvectors.rows());
  if (n == 0) throw DomainError("empty decomposition");
  std::vector<bool> active(n, true);
  const Eigen::MatrixXd factor = centered_factor(dec.eigenvectors, active, n);
  CoreScores s;
  s.values = row_scores(dec, factor, active);
  s.model = ScoreModel::er;
  s.rank_used = dec.rank();
  return s;
}

CoreScores config_scores(const SpectralDecomposition& dec, const DegreeVector& deg) {
  const auto n = static_cast<std::size_t>(dec.eigenvectors.rows());
  if (deg.size() != n) throw DomainError("degree vector length does not match decomposition");
  std::vector<bool> active(n, true);
  std::vector<std::size_t> excluded;
  Eigen::MatrixXd scaled = dec.eigenvectors;
  for (std::size_t i = 0; i < n; ++i) {
    if (deg[i] < 0.0) throw DomainError("negative degree");
    if (deg[i] == 0.0) {
      active[i] = false;
      excluded.push_back(i);
      scaled.row(static_cast<Eigen::Index>(i)).setZero();
    } else {
      scaled.row(static_cast<Eigen::Index>(i)) /= deg[i];
    }
  }
  const std::size_t n_active = n - excluded.size();
  CoreScores s;
  s.model = ScoreModel::config;
  s.rank_used = dec.rank();
  if (n_active == 0) {
    s.values.assign(n, 0.0);
  } else {
    const Eigen::MatrixXd factor = centered_factor(scaled, active, n_active);
    s.values = row_scores(dec, factor, active);
  }
  s.excluded = std::move(excluded);
  return s;
}

CoreScores scores_from_truth(const ProbabilityMatrix& p, ScoreModel model,
                             const std::optional<DegreeVector>& expected_degrees) {
  const std::size_t n = p.size();
  std::vector<double> inv(n, 1.0);
  if (model == ScoreModel::config) {
    const std::vector<double> d = expected_degrees ? expected_degrees->values : p.row_sums();
    if (d.size() != n) throw DomainError("degree vector length does not match matrix");
    for (std::size_t j = 0; j < n; ++j) {
      if (!(d[j] > 0.0)) throw DomainError("zero expected degree at node " + std::to_string(j));
      inv[j] = 1.0 / d[j];
    }
  }
  CoreScores s;
  s.model = model;
  s.rank_used = static_cast<int>(n);
  s.values.assign(n, 0.0);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<double> x(n);
    for (std::size_t i = begin; i < end; ++i) {
      auto row = p.row(i);
      double mean = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        x[j] = row[j] * inv[j];
        mean += x[j];
      }
      mean /= static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t j = 0; j < n; ++j) ss += (x[j] - mean) * (x[j] - mean);
      s.values[i] = std::sqrt(ss);
    }
  });
  return s;
}

}  // namespace corex
