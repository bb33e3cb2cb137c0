#include <algorithm>
#include <cmath>
#include <numeric>

#include "corex/error.hpp"
#include "corex/eval.hpp"

namespace corex {

namespace {

std::pair<std::size_t, std::size_t> class_sizes(const std::vector<bool>& truth) {
  const auto core = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), true));
  return {core, truth.size() - core};
}

}  // namespace

RocCurve roc(std::span<const double> scores, const std::vector<bool>& truth, std::string method) {
  const std::size_t n = scores.size();
  if (truth.size() != n) throw DomainError("scores and truth differ in length");
  const auto [n_core, n_peri] = class_sizes(truth);
  if (n_core == 0 || n_peri == 0) throw DomainError("ROC needs at least one core and one periphery node");
  for (double s : scores) {
    if (std::isnan(s)) throw DomainError("NaN score");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.method = std::move(method);
  curve.points.push_back({0.0, 0.0});
  // Twice the area in units of (1/n_peri) x (1/n_core), kept in integers.
  unsigned long long area2 = 0;
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < n;) {
    std::size_t group_tp = 0, group_fp = 0;
    const double s = scores[order[k]];
    while (k < n && scores[order[k]] == s) {
      (truth[order[k]] ? group_tp : group_fp) += 1;
      ++k;
    }
    area2 += static_cast<unsigned long long>(group_fp) * (2 * tp + group_tp);
    tp += group_tp;
    fp += group_fp;
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(n_peri),
                            static_cast<double>(tp) / static_cast<double>(n_core)});
  }
  curve.auc = static_cast<double>(area2) / (2.0 * static_cast<double>(n_core) * static_cast<double>(n_peri));
  return curve;
}

RocPoint operating_point(const std::vector<bool>& predicted_core, const std::vector<bool>& truth) {
  if (predicted_core.size() != truth.size()) throw DomainError("partition and truth differ in length");
  const auto [n_core, n_peri] = class_sizes(truth);
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted_core[i]) (truth[i] ? tp : fp) += 1;
  }
  RocPoint p;
  p.tpr = n_core ? static_cast<double>(tp) / static_cast<double>(n_core) : 0.0;
  p.fpr = n_peri ? static_cast<double>(fp) / static_cast<double>(n_peri) : 0.0;
  return p;
}

std::vector<KcorePoint> kcore_points(const BaselineScores& coreness, const std::vector<bool>& truth) {
  if (coreness.method != BaselineMethod::coreness) throw DomainError("k-core points need coreness scores");
  const auto max_k = coreness.values.empty()
                         ? 0
                         : static_cast<int>(*std::max_element(coreness.values.begin(), coreness.values.end()));
  std::vector<KcorePoint> out;
  std::vector<bool> predicted(coreness.size());
  for (int k = 0; k <= max_k + 1; ++k) {
    for (std::size_t i = 0; i < coreness.size(); ++i) predicted[i] = coreness.values[i] >= k;
    out.push_back({k, operating_point(predicted, truth)});
  }
  return out;
}

}  // namespace corex
