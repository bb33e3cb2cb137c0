#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "corex/coreid.hpp"
#include "corex/error.hpp"

namespace corex {

const char* to_string(SelectionMethod m) noexcept {
  switch (m) {
    case SelectionMethod::topk:
      return "topk";
    case SelectionMethod::threshold:
      return "threshold";
    case SelectionMethod::kmeans:
      return "kmeans";
  }
  return "unknown";
}

namespace {

CorePartition above_cutoff(const CoreScores& scores, double cutoff, SelectionMethod method) {
  CorePartition part;
  part.method = method;
  part.cutoff = cutoff;
  part.labels.resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    part.labels[i] = scores.values[i] > cutoff;
    part.n_core += part.labels[i] ? 1 : 0;
  }
  return part;
}

void check_p_hat(double p_hat) {
  if (!(p_hat > 0.0 && p_hat <= 1.0)) throw DomainError("threshold needs 0 < p_hat <= 1");
}

}  // namespace

CorePartition identify_top_k(const CoreScores& scores, std::size_t n_core) {
  const std::size_t n = scores.size();
  if (n_core > n) throw DomainError("n_core exceeds node count");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores.values[a] > scores.values[b]; });
  CorePartition part;
  part.method = SelectionMethod::topk;
  part.labels.assign(n, false);
  for (std::size_t k = 0; k < n_core; ++k) part.labels[idx[k]] = true;
  part.n_core = n_core;
  return part;
}

double er_cutoff(double p_hat, std::size_t n, double eps) {
  check_p_hat(p_hat);
  return std::sqrt(std::pow(p_hat, 1.0 - eps) * std::log(static_cast<double>(n)));
}

double config_cutoff(double p_hat, std::size_t n, double eps) {
  check_p_hat(p_hat);
  const auto nd = static_cast<double>(n);
  return std::sqrt(std::log(nd)) / (nd * std::sqrt(std::pow(p_hat, 1.0 + eps)));
}

CorePartition threshold_er(const CoreScores& scores, double p_hat, std::size_t n, double eps) {
  if (scores.model != ScoreModel::er) throw DomainError("threshold_er needs ER-type scores");
  return above_cutoff(scores, er_cutoff(p_hat, n, eps), SelectionMethod::threshold);
}

CorePartition threshold_config(const CoreScores& scores, double p_hat, std::size_t n, double eps) {
  if (scores.model != ScoreModel::config) throw DomainError("threshold_config needs configuration-type scores");
  return above_cutoff(scores, config_cutoff(p_hat, n, eps), SelectionMethod::threshold);
}

CorePartition threshold_select(const CoreScores& scores, double p_hat, double eps) {
  return scores.model == ScoreModel::er ? threshold_er(scores, p_hat, scores.size(), eps)
                                        : threshold_config(scores, p_hat, scores.size(), eps);
}

CorePartition kmeans_split(const CoreScores& scores, double floor) {
  const std::size_t n = scores.size();
  if (n < 2) throw DomainError("k-means split needs at least two scores");
  if (!(floor > 0.0)) throw DomainError("k-means floor must be positive");

  std::vector<double> logs(n);
  for (std::size_t i = 0; i < n; ++i) logs[i] = std::log(std::max(scores.values[i], floor));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return logs[a] < logs[b]; });
  if (logs[order.front()] == logs[order.back()]) throw DegenerateError("all clamped scores are equal");

  // Number of nodes in the lower (periphery) cluster.
  std::size_t lower = 0;
  if (n <= 1'000'000) {
    std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = logs[order[k]];
      prefix[k + 1] = prefix[k] + x;
      prefix_sq[k + 1] = prefix_sq[k] + x * x;
    }
    auto sse = [&](std::size_t a, std::size_t b) {  // over sorted positions [a, b)
      const double cnt = static_cast<double>(b - a);
      const double s = prefix[b] - prefix[a];
      return (prefix_sq[b] - prefix_sq[a]) - s * s / cnt;
    };
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < n; ++k) {
      if (logs[order[k - 1]] == logs[order[k]]) continue;  // equal values stay together
      const double cost = sse(0, k) + sse(k, n);
      if (cost < best) {
        best = cost;
        lower = k;
      }
    }
  } else {
    double lo = logs[order.front()];
    double hi = logs[order.back()];
    for (int iter = 0; iter < 100; ++iter) {
      const double mid = 0.5 * (lo + hi);
      double s_lo = 0.0, s_hi = 0.0;
      std::size_t c_lo = 0;
      for (double x : logs) {
        if (x <= mid) {
          s_lo += x;
          ++c_lo;
        } else {
          s_hi += x;
        }
      }
      const double new_lo = s_lo / static_cast<double>(c_lo);
      const double new_hi = s_hi / static_cast<double>(n - c_lo);
      lower = c_lo;
      if (new_lo == lo && new_hi == hi) break;
      lo = new_lo;
      hi = new_hi;
    }
  }

  // Cutoff: the largest score assigned to the periphery cluster.
  double cutoff = scores.values[order[0]];
  for (std::size_t k = 1; k < lower; ++k) cutoff = std::max(cutoff, scores.values[order[k]]);
  CorePartition part;
  part.method = SelectionMethod::kmeans;
  part.cutoff = cutoff;
  part.labels.assign(n, false);
  for (std::size_t k = lower; k < n; ++k) part.labels[order[k]] = true;
  part.n_core = n - lower;
  return part;
}

}  // namespace corex
