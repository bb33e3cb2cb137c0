#include "corex/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "corex/error.hpp"
#include "corex/parallel.hpp"

namespace corex {

const char* to_string(BaselineMethod m) noexcept {
  switch (m) {
    case BaselineMethod::degree:
      return "degree";
    case BaselineMethod::pagerank:
      return "pagerank";
    case BaselineMethod::eigenvector:
      return "eigenvector";
    case BaselineMethod::local_cc:
      return "local_cc";
    case BaselineMethod::coreness:
      return "coreness";
  }
  return "unknown";
}

BaselineScores degree_scores(const SparseGraph& g) {
  return {degrees(g).values, BaselineMethod::degree, 0};
}

BaselineScores pagerank_scores(const SparseGraph& g, double damping, double tol) {
  if (!(damping > 0.0 && damping < 1.0)) throw DomainError("damping must lie in (0,1)");
  const std::size_t n = g.num_nodes();
  BaselineScores out;
  out.method = BaselineMethod::pagerank;
  if (n == 0) return out;

  const double nd = static_cast<double>(n);
  std::vector<double> pr(n, 1.0 / nd), next(n), share(n);
  double delta = 0.0;
  for (int it = 1; it <= 1000; ++it) {
    double dangling = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto d = g.degree(i);
      if (d == 0) {
        dangling += pr[i];
        share[i] = 0.0;
      } else {
        share[i] = pr[i] / static_cast<double>(d);
      }
    }
    const double base = (1.0 - damping) / nd + damping * dangling / nd;
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        double s = 0.0;
        for (NodeId j : g.neighbors(i)) s += share[j];
        next[i] = base + damping * s;
      }
    });
    // Renormalize away rounding drift so the sum stays at 1.
    double total = 0.0;
    for (double x : next) total += x;
    delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= total;
      delta += std::abs(next[i] - pr[i]);
    }
    pr.swap(next);
    if (delta <= tol) {
      out.values = std::move(pr);
      out.iterations = it;
      return out;
    }
  }
  throw ConvergenceError("PageRank did not converge in 1000 iterations", delta);
}

BaselineScores eigenvector_scores(const SparseGraph& g, double tol, int max_iterations) {
  const std::size_t n = g.num_nodes();
  if (g.num_edges() == 0) throw DomainError("eigenvector centrality needs at least one edge");
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n))), y(n);
  double delta = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        double s = x[i];
        for (NodeId j : g.neighbors(i)) s += x[j];
        y[i] = s;
      }
    });
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= norm;
      delta = std::max(delta, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    if (delta <= tol) return {std::move(x), BaselineMethod::eigenvector, it};
  }
  throw ConvergenceError("eigenvector centrality did not converge", delta);
}

BaselineScores local_cc_scores(const SparseGraph& g) {
  const std::size_t n = g.num_nodes();
  BaselineScores out;
  out.method = BaselineMethod::local_cc;
  out.values.assign(n, 0.0);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto nb = g.neighbors(i);
      const std::size_t d = nb.size();
      if (d < 2) continue;
      // Each triangle through i is seen once per ordered neighbor pair (j, k), j < k.
      std::size_t links = 0;
      for (NodeId j : nb) {
        const auto nj = g.neighbors(j);
        auto a = nb.begin();
        auto b = nj.begin();
        while (a != nb.end() && b != nj.end()) {
          if (*a < *b) {
            ++a;
          } else if (*b < *a) {
            ++b;
          } else {
            if (*a > j) ++links;
            ++a;
            ++b;
          }
        }
      }
      out.values[i] = 2.0 * static_cast<double>(links) / (static_cast<double>(d) * static_cast<double>(d - 1));
    }
  });
  return out;
}

BaselineScores coreness_scores(const SparseGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::size_t> deg(n), pos(n), vert(n);
  std::size_t max_deg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    deg[i] = g.degree(i);
    max_deg = std::max(max_deg, deg[i]);
  }
  // Batagelj-Zaversnik: nodes sorted by current degree, bin[k] = first slot of degree k.
  std::vector<std::size_t> bin(max_deg + 2, 0);
  for (std::size_t i = 0; i < n; ++i) ++bin[deg[i] + 1];
  for (std::size_t k = 1; k < bin.size(); ++k) bin[k] += bin[k - 1];
  {
    std::vector<std::size_t> next(bin.begin(), bin.end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
      pos[i] = next[deg[i]]++;
      vert[pos[i]] = i;
    }
  }
  for (std::size_t slot = 0; slot < n; ++slot) {
    const std::size_t v = vert[slot];
    for (NodeId u : g.neighbors(v)) {
      if (deg[u] > deg[v]) {
        const std::size_t du = deg[u];
        const std::size_t pu = pos[u];
        const std::size_t pw = bin[du];
        const std::size_t w = vert[pw];
        if (u != w) {
          std::swap(vert[pu], vert[pw]);
          pos[u] = pw;
          pos[w] = pu;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  BaselineScores out;
  out.method = BaselineMethod::coreness;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = static_cast<double>(deg[i]);
  return out;
}

}  // namespace corex
