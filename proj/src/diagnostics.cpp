#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "corex/error.hpp"
#include "corex/spectral.hpp"

namespace corex {

DiagnosticReport diagnostics(const ProbabilityMatrix& p, int r, const std::optional<std::vector<bool>>& is_core) {
  const std::size_t n = p.size();
  if (n == 0) throw DomainError("empty probability matrix");
  if (r < 1 || static_cast<std::size_t>(r) > n) throw DomainError("diagnostic rank out of range");

  DiagnosticReport rep;
  rep.rank = r;
  rep.p_star = p.max_entry();

  const auto full = dense_eigs(p, static_cast<int>(n), EigenOrder::magnitude);
  rep.eigenvalues.assign(full.eigenvalues.data(), full.eigenvalues.data() + full.eigenvalues.size());
  if (static_cast<std::size_t>(r) < n) {
    rep.gap_r = std::abs(rep.eigenvalues[static_cast<std::size_t>(r) - 1]) -
                std::abs(rep.eigenvalues[static_cast<std::size_t>(r)]);
  }

  if (is_core) {
    if (is_core->size() != n) throw DomainError("core label length does not match matrix");
    const bool any_core = std::find(is_core->begin(), is_core->end(), true) != is_core->end();
    if (any_core) {
      auto min_over_core = [&](const CoreScores& s) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
          if ((*is_core)[i]) best = std::min(best, s.values[i]);
        }
        return best;
      };
      rep.h_n = min_over_core(scores_from_truth(p, ScoreModel::er));
      const auto d = p.row_sums();
      if (std::all_of(d.begin(), d.end(), [](double x) { return x > 0.0; })) {
        rep.h_prime_n = min_over_core(scores_from_truth(p, ScoreModel::config));
      }
    }
  }
  return rep;
}

std::string diagnostics_json(const DiagnosticReport& report) {
  nlohmann::ordered_json j;
  j["p_star"] = report.p_star;
  j["h_n"] = report.h_n ? nlohmann::ordered_json(*report.h_n) : nlohmann::ordered_json(nullptr);
  j["h_prime_n"] = report.h_prime_n ? nlohmann::ordered_json(*report.h_prime_n) : nlohmann::ordered_json(nullptr);
  j["eigenvalues"] = report.eigenvalues;
  j["gap_r"] = report.gap_r ? nlohmann::ordered_json(*report.gap_r) : nlohmann::ordered_json(nullptr);
  j["rank"] = report.rank;
  return j.dump(2);
}

}  // namespace corex
