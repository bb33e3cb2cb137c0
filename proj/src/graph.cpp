#include "corex/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "corex/error.hpp"
#include "corex/parallel.hpp"
#include "corex/rng.hpp"

namespace corex {

SparseGraph SparseGraph::from_edges(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::size_t> counts(n + 1, 0);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw RangeError("node id " + std::to_string(std::max(e.u, e.v)) + " out of range for n=" +
                       std::to_string(n));
    }
    if (e.u == e.v) throw ValidationError("self-loop on node " + std::to_string(e.u));
    ++counts[e.u + 1];
    ++counts[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) counts[i + 1] += counts[i];

  std::vector<NodeId> adj(counts[n]);
  std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
  for (const auto& e : edges) {
    adj[fill[e.u]++] = e.v;
    adj[fill[e.v]++] = e.u;
  }

  // Sort each list and squeeze out duplicates.
  SparseGraph g;
  g.offsets_.assign(n + 1, 0);
  std::size_t out = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto first = adj.begin() + static_cast<std::ptrdiff_t>(counts[i]);
    auto last = adj.begin() + static_cast<std::ptrdiff_t>(counts[i + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    for (auto it = first; it != last; ++it) adj[out++] = *it;
    g.offsets_[i + 1] = out;
  }
  adj.resize(out);
  adj.shrink_to_fit();
  g.adjacency_ = std::move(adj);
  g.num_edges_ = out / 2;
  return g;
}

bool SparseGraph::has_edge(std::size_t i, std::size_t j) const noexcept {
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), static_cast<NodeId>(j));
}

std::vector<Edge> SparseGraph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (std::size_t i = 0; i < num_nodes(); ++i) {
    for (NodeId j : neighbors(i)) {
      if (j > i) out.push_back({static_cast<NodeId>(i), j});
    }
  }
  return out;
}

SparseGraph SparseGraph::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != num_nodes()) throw DomainError("permutation length mismatch");
  auto edges = edge_list();
  for (auto& e : edges) {
    e.u = static_cast<NodeId>(perm[e.u]);
    e.v = static_cast<NodeId>(perm[e.v]);
  }
  return from_edges(num_nodes(), edges);
}

ProbabilityMatrix::ProbabilityMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n * n) throw ValidationError("probability matrix must have n*n entries");
  for (std::size_t i = 0; i < n; ++i) {
    if (entries_[i * n + i] != 0.0) throw ValidationError("probability matrix diagonal must be zero");
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = entries_[i * n + j];
      if (!(a >= 0.0 && a <= 1.0)) {
        throw ValidationError("probability out of [0,1] at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
      if (a != entries_[j * n + i]) throw ValidationError("probability matrix is not symmetric");
    }
  }
}

ProbabilityMatrix ProbabilityMatrix::constant(std::size_t n, double value) {
  std::vector<double> e(n * n, value);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 0.0;
  return ProbabilityMatrix(n, std::move(e));
}

std::vector<double> ProbabilityMatrix::row_sums() const {
  std::vector<double> d(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (double x : row(i)) s += x;
    d[i] = s;
  }
  return d;
}

double ProbabilityMatrix::max_entry() const noexcept {
  double m = 0.0;
  for (double x : entries_) m = std::max(m, x);
  return m;
}

double ProbabilityMatrix::mean_off_diagonal() const noexcept {
  if (n_ < 2) return 0.0;
  double s = 0.0;
  for (double x : entries_) s += x;
  return s / (static_cast<double>(n_) * static_cast<double>(n_ - 1));
}

DegreeVector degrees(const SparseGraph& g) {
  DegreeVector d;
  d.values.resize(g.num_nodes());
  for (std::size_t i = 0; i < g.num_nodes(); ++i) d.values[i] = static_cast<double>(g.degree(i));
  return d;
}

double average_density(const SparseGraph& g) {
  const auto n = static_cast<double>(g.num_nodes());
  if (g.num_nodes() < 2) throw DomainError("density needs at least two nodes");
  return 2.0 * static_cast<double>(g.num_edges()) / (n * n - n);
}

SparseGraph sample_adjacency(const ProbabilityMatrix& p, std::uint64_t seed) {
  const std::size_t n = p.size();
  std::vector<std::vector<Edge>> rows(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      CounterRng rng(seed, i);
      auto r = p.row(i);
      for (std::size_t j = i + 1; j < n; ++j) {
        if (rng.uniform() < r[j]) rows[i].push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
      }
    }
  });
  std::vector<Edge> edges;
  for (auto& r : rows) edges.insert(edges.end(), r.begin(), r.end());
  return SparseGraph::from_edges(n, edges);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Splits on whitespace; returns false on anything other than exactly two
// non-negative integers.
bool parse_pair(std::string_view s, std::uint64_t& a, std::uint64_t& b) {
  std::istringstream ss{std::string(s)};
  std::string t1, t2, extra;
  if (!(ss >> t1 >> t2) || (ss >> extra)) return false;
  auto parse = [](const std::string& t, std::uint64_t& out) {
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc{} && ptr == t.data() + t.size();
  };
  return parse(t1, a) && parse(t2, b);
}

}  // namespace

SparseGraph load_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool first_content = true;
  std::size_t declared_n = 0;
  std::uint64_t max_id = 0;
  bool any = false;
  std::vector<Edge> edges;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;

    std::uint64_t a = 0, b = 0;
    if (first_content && s.size() > 1 && s[0] == 'n' && (s[1] == ' ' || s[1] == '\t')) {
      std::uint64_t count = 0;
      auto rest = trim(s.substr(1));
      auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), count);
      if (ec != std::errc{} || ptr != rest.data() + rest.size()) {
        throw ParseError(line_no, "malformed header, expected 'n <count>'");
      }
      declared_n = count;
      header_seen = true;
      first_content = false;
      continue;
    }
    first_content = false;
    if (!parse_pair(s, a, b)) {
      throw ParseError(line_no, "expected two non-negative integer node ids");
    }
    if (a > std::numeric_limits<NodeId>::max() - 1 || b > std::numeric_limits<NodeId>::max() - 1) {
      throw RangeError("line " + std::to_string(line_no) + ": node id too large");
    }
    if (header_seen && (a >= declared_n || b >= declared_n)) {
      throw RangeError("line " + std::to_string(line_no) + ": node id " +
                       std::to_string(std::max(a, b)) + " >= declared n=" + std::to_string(declared_n));
    }
    if (a == b) {
      throw ValidationError("line " + std::to_string(line_no) + ": self-loop on node " +
                            std::to_string(a));
    }
    max_id = std::max({max_id, a, b});
    any = true;
    edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
  }
  const std::size_t n = header_seen ? declared_n : (any ? static_cast<std::size_t>(max_id) + 1 : 0);
  return SparseGraph::from_edges(n, edges);
}

SparseGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return load_edge_list(in);
}

void write_edge_list(const SparseGraph& g, std::ostream& out) {
  out << "n " << g.num_nodes() << '\n';
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    for (NodeId j : g.neighbors(i)) {
      if (j > i) out << i << '\t' << j << '\n';
    }
  }
}

std::vector<bool> load_truth_csv(std::istream& in, std::size_t n) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty truth file");
  ++line_no;
  if (trim(line) != "node_id,is_core") throw ParseError(1, "expected header node_id,is_core");
  std::vector<bool> truth(n, false);
  std::vector<bool> seen(n, false);
  while (std::getline(in, line)) {
    ++line_no;
    auto s = trim(line);
    if (s.empty()) continue;
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) throw ParseError(line_no, "expected node_id,is_core");
    auto id_s = trim(s.substr(0, comma));
    auto flag_s = trim(s.substr(comma + 1));
    std::uint64_t id = 0;
    auto [p, ec] = std::from_chars(id_s.data(), id_s.data() + id_s.size(), id);
    if (ec != std::errc{} || p != id_s.data() + id_s.size()) throw ParseError(line_no, "bad node id");
    if (id >= n) throw RangeError("line " + std::to_string(line_no) + ": node id out of range");
    if (flag_s != "0" && flag_s != "1") throw ParseError(line_no, "is_core must be 0 or 1");
    truth[id] = flag_s == "1";
    seen[id] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ValidationError("truth file does not label every node");
  }
  return truth;
}

std::vector<bool> load_truth_csv(const std::filesystem::path& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return load_truth_csv(in, n);
}

void write_truth_csv(const std::vector<bool>& is_core, std::ostream& out) {
  out << "node_id,is_core\n";
  for (std::size_t i = 0; i < is_core.size(); ++i) out << i << ',' << (is_core[i] ? 1 : 0) << '\n';
}

}  // namespace corex
