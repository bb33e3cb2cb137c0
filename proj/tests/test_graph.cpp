#include <doctest.h>

#include <sstream>

#include "corex/error.hpp"
#include "corex/graph.hpp"
#include "support.hpp"

using namespace corex;

TEST_CASE("from_edges merges repeated and reversed pairs") {
  const std::vector<Edge> edges = {{0, 1}, {1, 0}, {2, 1}, {0, 1}, {3, 2}};
  const auto g = SparseGraph::from_edges(5, edges);
  CHECK(g.num_nodes() == 5);
  CHECK(g.num_edges() == 3);
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(4) == 0);
  CHECK(g.has_edge(1, 2));
  CHECK(g.has_edge(2, 1));
  CHECK_FALSE(g.has_edge(0, 2));
  const auto list = g.edge_list();
  REQUIRE(list.size() == 3);
  CHECK(list[0].u == 0);
  CHECK(list[0].v == 1);
}

TEST_CASE("from_edges rejects self-loops and out-of-range ids") {
  const std::vector<Edge> loop = {{0, 1}, {2, 2}};
  CHECK_THROWS_AS(SparseGraph::from_edges(3, loop), ValidationError);
  const std::vector<Edge> far = {{0, 3}};
  CHECK_THROWS_AS(SparseGraph::from_edges(3, far), RangeError);
}

TEST_CASE("permuted graph keeps the edge set up to relabeling") {
  const auto g = testing::random_graph(30, 0.2, 5);
  std::vector<std::size_t> perm(30);
  for (std::size_t i = 0; i < 30; ++i) perm[i] = (i * 7 + 3) % 30;
  const auto h = g.permuted(perm);
  CHECK(h.num_edges() == g.num_edges());
  for (const auto& e : g.edge_list()) CHECK(h.has_edge(perm[e.u], perm[e.v]));
}

TEST_CASE("edge list reader handles comments, header and blank lines") {
  std::istringstream in("# a comment\nn 6\n0 1\n\n1\t2  # trailing\n4 5\n");
  const auto g = load_edge_list(in);
  CHECK(g.num_nodes() == 6);
  CHECK(g.num_edges() == 3);
  CHECK(g.degree(3) == 0);
}

TEST_CASE("edge list reader infers n from the largest id") {
  std::istringstream in("0 4\n2 3\n");
  CHECK(load_edge_list(in).num_nodes() == 5);
}

TEST_CASE("edge list reader reports the failing line") {
  std::istringstream bad("0 1\n1 x\n");
  try {
    load_edge_list(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream loop("0 1\n3 3\n");
  CHECK_THROWS_AS(load_edge_list(loop), ValidationError);
  std::istringstream over("n 3\n0 5\n");
  CHECK_THROWS_AS(load_edge_list(over), RangeError);
  std::istringstream neg("0 -1\n");
  CHECK_THROWS_AS(load_edge_list(neg), ParseError);
}

TEST_CASE("edge list round trip") {
  const auto g = testing::random_graph(40, 0.1, 11);
  std::stringstream ss;
  write_edge_list(g, ss);
  const auto h = load_edge_list(ss);
  CHECK(h.num_nodes() == g.num_nodes());
  CHECK(h.num_edges() == g.num_edges());
  for (const auto& e : g.edge_list()) CHECK(h.has_edge(e.u, e.v));
}

TEST_CASE("truth csv round trip and validation") {
  std::vector<bool> t = {true, false, true, true, false};
  std::stringstream ss;
  write_truth_csv(t, ss);
  CHECK(load_truth_csv(ss, 5) == t);

  std::istringstream missing("node_id,is_core\n0,1\n1,0\n");
  CHECK_THROWS_AS(load_truth_csv(missing, 3), ValidationError);
  std::istringstream header("id,core\n0,1\n");
  CHECK_THROWS_AS(load_truth_csv(header, 1), ParseError);
  std::istringstream label("node_id,is_core\n0,2\n");
  CHECK_THROWS_AS(load_truth_csv(label, 1), ParseError);
}

TEST_CASE("probability matrix validation") {
  CHECK_NOTHROW(ProbabilityMatrix(2, {0.0, 0.3, 0.3, 0.0}));
  CHECK_THROWS_AS(ProbabilityMatrix(2, {0.0, 0.3, 0.2, 0.0}), ValidationError);
  CHECK_THROWS_AS(ProbabilityMatrix(2, {0.1, 0.3, 0.3, 0.0}), ValidationError);
  CHECK_THROWS_AS(ProbabilityMatrix(2, {0.0, 1.3, 1.3, 0.0}), ValidationError);
  CHECK_THROWS_AS(ProbabilityMatrix(2, {0.0, 0.3, 0.3}), ValidationError);
  const auto c = ProbabilityMatrix::constant(4, 0.25);
  CHECK(c(0, 0) == 0.0);
  CHECK(c(1, 3) == 0.25);
  CHECK(c.row_sums()[2] == doctest::Approx(0.75));
  CHECK(c.mean_off_diagonal() == doctest::Approx(0.25));
  CHECK(c.max_entry() == 0.25);
}

TEST_CASE("degrees and density") {
  const std::vector<Edge> edges = {{0, 1}, {1, 2}, {2, 3}};
  const auto g = SparseGraph::from_edges(4, edges);
  CHECK(degrees(g).values == std::vector<double>{1, 2, 2, 1});
  CHECK(average_density(g) == doctest::Approx(0.5));
  CHECK_THROWS_AS(average_density(SparseGraph::from_edges(1, {})), DomainError);
}

TEST_CASE("sampled edge count stays within binomial bounds") {
  const std::size_t n = 400;
  const double p = 0.05;
  const auto g = sample_adjacency(ProbabilityMatrix::constant(n, p), 17);
  const double pairs = n * (n - 1) / 2.0;
  const double sd = std::sqrt(pairs * p * (1 - p));
  CHECK(std::abs(static_cast<double>(g.num_edges()) - pairs * p) < 6 * sd);
}

TEST_CASE("sampling is a pure function of the seed and respects zero entries") {
  auto entries = std::vector<double>(36, 0.5);
  for (std::size_t i = 0; i < 6; ++i) entries[i * 6 + i] = 0.0;
  entries[1] = entries[6] = 0.0;
  entries[2] = entries[12] = 1.0;
  const ProbabilityMatrix p(6, entries);
  const auto a = sample_adjacency(p, 3);
  const auto b = sample_adjacency(p, 3);
  CHECK(a.edge_list().size() == b.edge_list().size());
  for (const auto& e : a.edge_list()) CHECK(b.has_edge(e.u, e.v));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto g = sample_adjacency(p, s);
    CHECK_FALSE(g.has_edge(0, 1));
    CHECK(g.has_edge(0, 2));
  }
}
