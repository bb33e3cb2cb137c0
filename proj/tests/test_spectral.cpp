#include <doctest.h>

#include <json.hpp>

#include "corex/error.hpp"
#include "corex/parallel.hpp"
#include "corex/spectral.hpp"
#include "corex/synth.hpp"
#include "support.hpp"

using namespace corex;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

}  // namespace

TEST_CASE("truncated eigenpairs agree with a dense solver") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 60 + 20 * seed;
    const auto g = testing::random_graph(n, 0.15, seed);
    const int r = 1 + static_cast<int>(seed % 6);
    EigsOptions opts;
    opts.seed = seed;
    const auto dec = truncated_eigs(g, r, opts);
    const auto ref = testing::dense_top(testing::dense(g), r);
    for (int c = 0; c < r; ++c) CHECK(std::abs(dec.eigenvalues[c] - ref.values[c]) <= 1e-8 * std::abs(ref.values[0]));
    CHECK((dec.eigenvectors.transpose() * dec.eigenvectors - Eigen::MatrixXd::Identity(r, r)).norm() < 1e-10);
  }
}

TEST_CASE("small operators and wide blocks converge") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 12 + 3 * seed;
    const auto g = testing::random_graph(n, 0.3, 100 + seed);
    if (g.num_edges() == 0) continue;
    const int r = 1 + static_cast<int>(seed % 10);
    if (static_cast<std::size_t>(r) >= n) continue;
    EigsOptions opts;
    opts.seed = seed;
    const auto dec = truncated_eigs(g, r, opts);
    const auto ref = testing::dense_top(testing::dense(g), r);
    const double scale = std::max(1.0, std::abs(ref.values[0]));
    for (int c = 0; c < r; ++c) CHECK(std::abs(dec.eigenvalues[c] - ref.values[c]) <= 1e-8 * scale);
  }
}

TEST_CASE("eigenvector signs are fixed by the largest entry") {
  const auto g = testing::random_graph(80, 0.2, 4);
  const auto dec = truncated_eigs(g, 3);
  for (int c = 0; c < 3; ++c) {
    Eigen::Index k;
    dec.eigenvectors.col(c).cwiseAbs().maxCoeff(&k);
    CHECK(dec.eigenvectors(k, c) > 0.0);
  }
}

TEST_CASE("signed ordering returns the top of the spectrum") {
  // A bipartite graph has a symmetric spectrum, so magnitude and signed orders differ.
  std::vector<Edge> edges;
  for (NodeId i = 0; i < 20; ++i) {
    for (NodeId j = 20; j < 45; ++j) {
      if ((i * 31 + j * 17) % 3 != 0) edges.push_back({i, j});
    }
  }
  const auto g = SparseGraph::from_edges(45, edges);
  EigsOptions opts;
  opts.order = EigenOrder::signed_value;
  const auto dec = truncated_eigs(g, 2, opts);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(testing::dense(g));
  const auto& ev = es.eigenvalues();
  CHECK(dec.eigenvalues[0] == doctest::Approx(ev[44]).epsilon(1e-9));
  CHECK(dec.eigenvalues[1] == doctest::Approx(ev[43]).epsilon(1e-9));
  CHECK(dec.eigenvalues[1] > 0.0);
}

TEST_CASE("eigensolver argument checks") {
  const auto g = testing::random_graph(10, 0.5, 1);
  CHECK_THROWS_AS(truncated_eigs(g, 0), DomainError);
  CHECK_THROWS_AS(truncated_eigs(g, 10), DomainError);
  CHECK_THROWS_AS(truncated_eigs(SparseGraph::from_edges(5, {}), 1), DomainError);
  EigsOptions tight;
  tight.tol = 0.0;
  tight.max_sweeps = 2;
  CHECK_THROWS_AS(truncated_eigs(testing::random_graph(300, 0.05, 2), 5, tight), ConvergenceError);
}

TEST_CASE("eigensolver output does not depend on the thread count") {
  const auto g = testing::random_graph(500, 0.03, 8);
  set_thread_count(1);
  const auto a = truncated_eigs(g, 4);
  set_thread_count(4);
  const auto b = truncated_eigs(g, 4);
  set_thread_count(1);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.eigenvectors == b.eigenvectors);
}

TEST_CASE("dense operator matches the graph operator on the same matrix") {
  const auto g = testing::random_graph(50, 0.2, 6);
  const Eigen::MatrixXd a = testing::dense(g);
  std::vector<double> entries(a.data(), a.data() + a.size());
  const ProbabilityMatrix p(50, entries);
  const auto x = truncated_eigs(DenseOperator(p), 3);
  const auto y = truncated_eigs(g, 3);
  for (int c = 0; c < 3; ++c) CHECK(x.eigenvalues[c] == doctest::Approx(y.eigenvalues[c]).epsilon(1e-9));
}

TEST_CASE("ER scores equal dense row norms of the centered estimate") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::size_t n = 40 + 15 * seed;
    const int r = 1 + static_cast<int>(seed);
    const auto g = testing::random_graph(n, 0.2, 100 + seed);
    const auto dec = truncated_eigs(g, r);
    const Eigen::MatrixXd phat = dec.eigenvectors * dec.eigenvalues.asDiagonal() * dec.eigenvectors.transpose();
    const auto ref = testing::row_norms(phat * testing::centering(static_cast<Eigen::Index>(n)));
    const auto s = er_scores(dec);
    CHECK(s.model == ScoreModel::er);
    CHECK(s.rank_used == r);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel_err(s.values[i], ref[i]) < 1e-10);
  }
}

TEST_CASE("config scores equal dense row norms with degree correction") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::size_t n = 40 + 15 * seed;
    const int r = 1 + static_cast<int>(seed);
    const auto g = testing::random_graph(n, 0.2, 200 + seed);
    const auto dec = truncated_eigs(g, r);
    const auto deg = degrees(g);
    const Eigen::MatrixXd phat = dec.eigenvectors * dec.eigenvalues.asDiagonal() * dec.eigenvectors.transpose();
    Eigen::VectorXd inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[static_cast<Eigen::Index>(i)] = 1.0 / deg[i];
    const auto ref = testing::row_norms(phat * inv.asDiagonal() * testing::centering(static_cast<Eigen::Index>(n)));
    const auto s = config_scores(dec, deg);
    CHECK(s.excluded.empty());
    for (std::size_t i = 0; i < n; ++i) CHECK(rel_err(s.values[i], ref[i]) < 1e-10);
  }
}

TEST_CASE("zero-degree nodes are excluded from the configuration scores") {
  auto base = testing::random_graph(60, 0.2, 9);
  std::vector<Edge> edges = base.edge_list();
  edges.erase(std::remove_if(edges.begin(), edges.end(), [](const Edge& e) { return e.u == 7 || e.v == 7; }),
              edges.end());
  const auto g = SparseGraph::from_edges(62, edges);  // nodes 7, 60, 61 isolated
  const auto dec = truncated_eigs(g, 3);
  const auto s = config_scores(dec, degrees(g));
  CHECK(s.excluded == std::vector<std::size_t>{7, 60, 61});
  CHECK(s.values[7] == 0.0);
  CHECK(s.values[61] == 0.0);

  // Oracle: the same computation restricted to the active nodes.
  const Eigen::MatrixXd phat = dec.eigenvectors * dec.eigenvalues.asDiagonal() * dec.eigenvectors.transpose();
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < 62; ++i) {
    if (i != 7 && i < 60) active.push_back(i);
  }
  const auto m = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd sub(62, m);
  const auto deg = degrees(g);
  for (Eigen::Index c = 0; c < m; ++c) sub.col(c) = phat.col(active[static_cast<std::size_t>(c)]) / deg[static_cast<std::size_t>(active[static_cast<std::size_t>(c)])];
  const auto ref = testing::row_norms(sub * testing::centering(m));
  for (Eigen::Index i : active) CHECK(rel_err(s.values[static_cast<std::size_t>(i)], ref[static_cast<std::size_t>(i)]) < 1e-10);
}

TEST_CASE("scores are invariant to the eigenvector sign convention") {
  const auto g = testing::random_graph(70, 0.2, 12);
  const auto dec = truncated_eigs(g, 4);
  auto flipped = dec;
  flipped.eigenvectors.col(1) *= -1.0;
  flipped.eigenvectors.col(3) *= -1.0;
  const auto a = er_scores(dec);
  const auto b = er_scores(flipped);
  for (std::size_t i = 0; i < 70; ++i) CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
}

TEST_CASE("scores from a known matrix") {
  const auto p = ProbabilityMatrix::constant(30, 0.2);
  const auto s = scores_from_truth(p, ScoreModel::er);
  // Row of a constant matrix: 0.2 everywhere except a zero diagonal.
  const double expect = 0.2 * std::sqrt(29.0 / 30.0);
  for (double v : s.values) CHECK(v == doctest::Approx(expect).epsilon(1e-12));
  auto entries = std::vector<double>(9, 0.0);
  const ProbabilityMatrix empty(3, entries);
  CHECK_THROWS_AS(scores_from_truth(empty, ScoreModel::config), DomainError);
}

TEST_CASE("diagnostics on a pure ER matrix") {
  const auto rep = diagnostics(ProbabilityMatrix::constant(50, 0.1), 1);
  CHECK(rep.p_star == 0.1);
  CHECK_FALSE(rep.h_n.has_value());
  CHECK_FALSE(rep.h_prime_n.has_value());
  CHECK(rep.eigenvalues.size() == 50);
  CHECK(rep.eigenvalues[0] == doctest::Approx(4.9));
  CHECK(*rep.gap_r == doctest::Approx(4.9 - 0.1));
  const auto j = nlohmann::json::parse(diagnostics_json(rep));
  for (const char* key : {"p_star", "h_n", "h_prime_n", "eigenvalues", "gap_r"}) CHECK(j.contains(key));
  CHECK(j["h_n"].is_null());
}

TEST_CASE("h(n) grows like p* sqrt(n) for a planted two-block core") {
  std::vector<double> ratios;
  for (std::size_t n : {100, 200, 400}) {
    const std::size_t half = n / 4;
    const auto core = block_model({half, half}, {{0.4, 0.1}, {0.1, 0.4}});
    const auto p = assemble_er(core, n - 2 * half, 0.1);
    std::vector<bool> truth(n, false);
    for (std::size_t i = 0; i < 2 * half; ++i) truth[i] = true;
    const auto rep = diagnostics(p, 2, truth);
    REQUIRE(rep.h_n.has_value());
    ratios.push_back(*rep.h_n / (rep.p_star * std::sqrt(static_cast<double>(n))));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  CHECK(*hi / *lo < 1.2);
}
