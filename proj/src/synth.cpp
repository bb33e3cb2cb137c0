#include "corex/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "corex/error.hpp"
#include "corex/parallel.hpp"
#include "corex/rng.hpp"

namespace corex {

const char* to_string(GraphonKind k) noexcept {
  switch (k) {
    case GraphonKind::g1:
      return "g1";
    case GraphonKind::g2:
      return "g2";
    case GraphonKind::g3:
      return "g3";
    case GraphonKind::custom:
      return "custom";
  }
  return "unknown";
}

const char* to_string(PeripheryKind k) noexcept { return k == PeripheryKind::er ? "er" : "config"; }

GraphonSpec GraphonSpec::table(int index) {
  switch (index) {
    case 1:
      return {GraphonKind::g1, {}};
    case 2:
      return {GraphonKind::g2, {}};
    case 3:
      return {GraphonKind::g3, {}};
    default:
      throw DomainError("graphon index must be 1, 2 or 3");
  }
}

GraphonSpec GraphonSpec::constant(double value) {
  return {GraphonKind::custom, [value](double, double) { return value; }};
}

namespace {

// Block k in 1..6 with x in the open interval ((k-1)/6, k/6); 0 on a boundary.
int g1_block(double x) {
  const double scaled = 6.0 * x;
  const double k = std::ceil(scaled);
  if (k == scaled) return 0;
  return static_cast<int>(k);
}

}  // namespace

double graphon_value(const GraphonSpec& spec, double mu, double nu) {
  if (!(mu >= 0.0 && mu <= 1.0 && nu >= 0.0 && nu <= 1.0)) throw DomainError("graphon arguments must lie in [0,1]");
  switch (spec.kind) {
    case GraphonKind::g1: {
      const int a = g1_block(mu);
      const int b = g1_block(nu);
      return (a != 0 && a == b) ? a / 7.0 : 0.3 / 7.0;
    }
    case GraphonKind::g2:
      return std::sin(5.0 * std::numbers::pi * (mu + nu - 1.0) + 1.0) / 2.0 + 0.5;
    case GraphonKind::g3:
      return 1.0 / (1.0 + std::exp(15.0 * std::pow(0.8 * std::abs(mu - nu), 0.8) - 0.1));
    case GraphonKind::custom: {
      if (!spec.custom) throw DomainError("custom graphon has no function");
      const double v = spec.custom(mu, nu);
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("custom graphon value outside [0,1]");
      return v;
    }
  }
  throw DomainError("unknown graphon");
}

int graphon_rank(GraphonKind kind) noexcept {
  switch (kind) {
    case GraphonKind::g1:
      return 6;
    case GraphonKind::g2:
      return 3;
    default:
      return 0;
  }
}

GraphonCore graphon_core(const GraphonSpec& spec, std::size_t n_core, std::uint64_t seed) {
  if (n_core < 2) throw DomainError("core needs at least two nodes");
  GraphonCore out;
  out.latent.resize(n_core);
  CounterRng rng(seed, 0);
  for (auto& x : out.latent) x = rng.uniform();

  std::vector<double> e(n_core * n_core, 0.0);
  parallel_for(n_core, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < n_core; ++j) e[i * n_core + j] = graphon_value(spec, out.latent[i], out.latent[j]);
    }
  });
  for (std::size_t i = 0; i < n_core; ++i) {
    for (std::size_t j = i + 1; j < n_core; ++j) e[j * n_core + i] = e[i * n_core + j];
  }
  out.p = ProbabilityMatrix(n_core, std::move(e));
  return out;
}

ProbabilityMatrix block_model(const std::vector<std::size_t>& sizes, const std::vector<std::vector<double>>& b) {
  const std::size_t k = sizes.size();
  if (b.size() != k) throw DomainError("block matrix size mismatch");
  std::vector<std::size_t> label;
  for (std::size_t c = 0; c < k; ++c) {
    if (b[c].size() != k) throw DomainError("block matrix must be square");
    label.insert(label.end(), sizes[c], c);
  }
  const std::size_t n = label.size();
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) e[i * n + j] = b[label[i]][label[j]];
    }
  }
  return ProbabilityMatrix(n, std::move(e));
}

ProbabilityMatrix assemble_er(const ProbabilityMatrix& core_p, std::size_t n_periphery, double periphery_level) {
  if (!(periphery_level > 0.0 && periphery_level < 1.0)) throw DomainError("periphery level must lie in (0,1)");
  const std::size_t nc = core_p.size();
  const std::size_t n = nc + n_periphery;
  std::vector<double> e(n * n, periphery_level);
  for (std::size_t i = 0; i < nc; ++i) {
    auto row = core_p.row(i);
    std::copy(row.begin(), row.end(), e.begin() + static_cast<std::ptrdiff_t>(i * n));
  }
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 0.0;
  return ProbabilityMatrix(n, std::move(e));
}

std::vector<double> ConfigAssembly::expected_degrees() const {
  double total = 0.0;
  for (double t : theta) total += t;
  std::vector<double> d(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) d[i] = theta[i] * total / core_theta_total;
  return d;
}

ConfigAssembly assemble_config(const ProbabilityMatrix& core_p, std::size_t n_periphery, std::uint64_t seed,
                               std::optional<std::pair<double, double>> periphery_theta_range) {
  const std::size_t nc = core_p.size();
  const std::size_t n = nc + n_periphery;
  ConfigAssembly out;
  out.theta = core_p.row_sums();
  for (double t : out.theta) out.core_theta_total += t;
  if (!(out.core_theta_total > 0.0)) throw DomainError("configuration periphery needs a nonzero core");

  double lo = 0.0, hi = 0.0;
  if (periphery_theta_range) {
    std::tie(lo, hi) = *periphery_theta_range;
  } else {
    const auto [mn, mx] = std::minmax_element(out.theta.begin(), out.theta.end());
    lo = 0.5 * *mn;
    hi = 1.5 * *mx;
  }
  if (!(lo >= 0.0 && hi >= lo)) throw DomainError("invalid periphery theta range");
  CounterRng rng(seed, 0);
  for (std::size_t k = 0; k < n_periphery; ++k) out.theta.push_back(lo + (hi - lo) * rng.uniform());

  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < nc; ++i) {
    auto row = core_p.row(i);
    std::copy(row.begin(), row.end(), e.begin() + static_cast<std::ptrdiff_t>(i * n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = std::max(i + 1, nc); j < n; ++j) {
      double v = out.theta[i] * out.theta[j] / out.core_theta_total;
      if (v > 1.0) {
        v = 1.0;
        out.clipped += 2;
      }
      e[i * n + j] = v;
      e[j * n + i] = v;
    }
  }
  out.p = ProbabilityMatrix(n, std::move(e));
  return out;
}

void validate(const SynthConfig& cfg) {
  if (cfg.n_core < 1) throw DomainError("n_core must be at least 1");
  if (!(cfg.target_density > 0.0 && cfg.target_density < 1.0)) throw DomainError("target density must lie in (0,1)");
  if (!(cfg.degree_ratio > 0.0) || !std::isfinite(cfg.degree_ratio)) throw DomainError("degree ratio must be positive");
  if (cfg.graphon.kind == GraphonKind::custom && !cfg.graphon.custom) throw DomainError("custom graphon has no function");
}

std::optional<SizePreset> size_preset(const std::string& name) {
  static constexpr SizePreset presets[] = {
      {"balanced", 1000, 1000},
      {"small-core", 700, 1300},
      {"large-core", 1300, 700},
  };
  for (const auto& p : presets) {
    if (name == p.name) return p;
  }
  return std::nullopt;
}

double degree_ratio_of(const ProbabilityMatrix& p, std::size_t n_core) {
  const std::size_t n = p.size();
  if (n_core == 0 || n_core >= n) throw DomainError("degree ratio needs a nonempty core and periphery");
  const auto d = p.row_sums();
  double core = 0.0, peri = 0.0;
  for (std::size_t i = 0; i < n; ++i) (i < n_core ? core : peri) += d[i];
  const double peri_mean = peri / static_cast<double>(n - n_core);
  if (!(peri_mean > 0.0)) throw DomainError("periphery has zero expected degree");
  return (core / static_cast<double>(n_core)) / peri_mean;
}

namespace {

struct BlockSums {
  double core_core = 0.0;       // ordered pairs within the core
  double core_periphery = 0.0;  // i in core, j in periphery
  double periphery_periphery = 0.0;
};

BlockSums block_sums(const ProbabilityMatrix& p, std::size_t nc) {
  BlockSums s;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto row = p.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (i < nc && j < nc) {
        s.core_core += row[j];
      } else if (i < nc) {
        s.core_periphery += row[j];
      } else if (j >= nc) {
        s.periphery_periphery += row[j];
      }
    }
  }
  return s;
}

}  // namespace

RescaleResult rescale(const ProbabilityMatrix& p, std::size_t n_core, PeripheryKind periphery,
                      double target_density, double degree_ratio) {
  const std::size_t n = p.size();
  if (n_core == 0 || n_core > n) throw DomainError("core size out of range");
  if (n < 2) throw DomainError("rescale needs at least two nodes");
  if (!(target_density > 0.0 && target_density < 1.0)) throw DomainError("target density must lie in (0,1)");
  if (!(degree_ratio > 0.0)) throw DomainError("degree ratio must be positive");

  const std::size_t np = n - n_core;
  const BlockSums s = block_sums(p, n_core);
  const auto pp_power = [&](double gamma) { return periphery == PeripheryKind::er ? gamma : gamma * gamma; };

  double gamma = 1.0;
  if (np > 0) {
    if (!(s.core_periphery > 0.0)) throw InfeasibleError("periphery has no connections to scale");
    auto ratio_at = [&](double g) {
      const double core_mean = (s.core_core + g * s.core_periphery) / static_cast<double>(n_core);
      const double peri_mean = (g * s.core_periphery + pp_power(g) * s.periphery_periphery) / static_cast<double>(np);
      return core_mean / peri_mean;
    };
    // ratio_at is decreasing in gamma; bisect on log gamma.
    double lo = -60.0, hi = 60.0;
    if (ratio_at(std::exp(lo)) < degree_ratio || ratio_at(std::exp(hi)) > degree_ratio) {
      throw InfeasibleError("degree ratio " + std::to_string(degree_ratio) + " is not reachable for this matrix");
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (ratio_at(std::exp(mid)) > degree_ratio ? lo : hi) = mid;
    }
    gamma = std::exp(0.5 * (lo + hi));
  }

  const double a_cc = 1.0, a_cp = gamma, a_pp = pp_power(gamma);
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  const double weighted = a_cc * s.core_core + 2.0 * a_cp * s.core_periphery + a_pp * s.periphery_periphery;
  if (!(weighted > 0.0)) throw InfeasibleError("matrix has no mass to rescale");
  double c = target_density * pairs / weighted;

  auto build = [&](double scale, std::size_t& clipped) {
    std::vector<double> e(p.data().begin(), p.data().end());
    clipped = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double f = (i < n_core && j < n_core) ? a_cc : (i < n_core || j < n_core) ? a_cp : a_pp;
        double v = e[i * n + j] * f * scale;
        if (v > 1.0) {
          v = 1.0;
          ++clipped;
        }
        e[i * n + j] = v;
      }
    }
    return e;
  };

  std::size_t clipped = 0;
  std::vector<double> e = build(c, clipped);
  if (clipped > 0) {
    // Clipping lost mass; grow the common scale until the density is met.
    auto density_at = [&](double scale) {
      std::size_t dummy = 0;
      const auto trial = build(scale, dummy);
      double sum = 0.0;
      for (double x : trial) sum += x;
      return sum / pairs;
    };
    double lo = c, hi = c;
    while (density_at(hi) < target_density) {
      hi *= 2.0;
      if (hi > c * 1e12) throw InfeasibleError("target density unreachable after clipping");
    }
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (density_at(mid) < target_density ? lo : hi) = mid;
    }
    c = hi;
    e = build(c, clipped);
  }
  if (static_cast<double>(clipped) > 0.2 * pairs) {
    throw InfeasibleError("rescaling clips " + std::to_string(clipped) + " of " +
                          std::to_string(static_cast<std::size_t>(pairs)) + " entries");
  }

  RescaleResult out;
  out.c_core = c * a_cc;
  out.c_core_periphery = c * a_cp;
  out.c_periphery = c * a_pp;
  out.clipped = clipped;
  out.p = ProbabilityMatrix(n, std::move(e));
  out.realized_density = out.p.mean_off_diagonal();
  if (np > 0) out.realized_ratio = degree_ratio_of(out.p, n_core);
  return out;
}

SynthSeeds synth_seeds(std::uint64_t master) noexcept {
  return {derive_seed(master, 1), derive_seed(master, 2), derive_seed(master, 3)};
}

SynthInstance generate_truth(const SynthConfig& cfg) {
  validate(cfg);
  SynthInstance inst;
  inst.config = cfg;
  inst.seeds = synth_seeds(cfg.seed);

  GraphonCore core = graphon_core(cfg.graphon, cfg.n_core, inst.seeds.core);
  inst.latent = std::move(core.latent);

  ProbabilityMatrix assembled;
  std::vector<double> theta;
  double core_theta_total = 0.0;
  if (cfg.periphery == PeripheryKind::er) {
    const double mean = core.p.mean_off_diagonal();
    inst.initial_periphery_level = (mean > 0.0 && mean < 1.0) ? mean : 0.5;
    assembled = assemble_er(core.p, cfg.n_periphery, inst.initial_periphery_level);
  } else {
    // Shrink the periphery draws so no assembled entry reaches 1. The
    // rescale step moves along the same (1, gamma, gamma^2) family, so the
    // final matrix is unchanged apart from the clipping it avoids.
    const auto sums = core.p.row_sums();
    double total_c = 0.0;
    for (double t : sums) total_c += t;
    const auto [mn, mx] = std::minmax_element(sums.begin(), sums.end());
    double lo = 0.5 * *mn, hi = 1.5 * *mx;
    if (hi > 0.0) {
      const double kappa = std::min({1.0, total_c / (hi * *mx), std::sqrt(total_c) / hi});
      lo *= kappa;
      hi *= kappa;
    }
    ConfigAssembly ca = assemble_config(core.p, cfg.n_periphery, inst.seeds.theta, std::make_pair(lo, hi));
    inst.assembly_clipped = ca.clipped;
    theta = std::move(ca.theta);
    core_theta_total = ca.core_theta_total;
    assembled = std::move(ca.p);
  }

  inst.scaling = rescale(assembled, cfg.n_core, cfg.periphery, cfg.target_density, cfg.degree_ratio);
  inst.p = std::move(inst.scaling.p);
  inst.scaling.p = ProbabilityMatrix();

  if (cfg.periphery == PeripheryKind::config) {
    // theta scales with the block factors: core by c_core, periphery by
    // c_core_periphery; the core total scales by c_core.
    const double total_core = core_theta_total * inst.scaling.c_core;
    double total = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta[i] *= i < cfg.n_core ? inst.scaling.c_core : inst.scaling.c_core_periphery;
      total += theta[i];
    }
    inst.expected_degrees.resize(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) inst.expected_degrees[i] = theta[i] * total / total_core;
  } else {
    inst.expected_degrees = inst.p.row_sums();
  }

  inst.truth.assign(cfg.n_core + cfg.n_periphery, false);
  std::fill(inst.truth.begin(), inst.truth.begin() + static_cast<std::ptrdiff_t>(cfg.n_core), true);
  return inst;
}

SynthInstance generate(const SynthConfig& cfg) {
  SynthInstance inst = generate_truth(cfg);
  inst.graph = sample_adjacency(inst.p, inst.seeds.sample);
  return inst;
}

std::string SynthInstance::metadata_json() const {
  nlohmann::ordered_json j;
  j["graphon"] = to_string(config.graphon.kind);
  j["n_core"] = config.n_core;
  j["n_periphery"] = config.n_periphery;
  j["periphery"] = to_string(config.periphery);
  j["target_density"] = config.target_density;
  j["degree_ratio"] = config.degree_ratio;
  j["seed"] = config.seed;
  j["seeds"] = {{"core", seeds.core}, {"theta", seeds.theta}, {"sample", seeds.sample}};
  j["scalars"] = {{"c_core", scaling.c_core},
                  {"c_core_periphery", scaling.c_core_periphery},
                  {"c_periphery", scaling.c_periphery}};
  j["clip_counts"] = {{"assembly", assembly_clipped}, {"rescale", scaling.clipped}};
  if (config.periphery == PeripheryKind::er) j["initial_periphery_level"] = initial_periphery_level;
  j["realized_density"] = scaling.realized_density;
  j["realized_ratio"] =
      scaling.realized_ratio ? nlohmann::ordered_json(*scaling.realized_ratio) : nlohmann::ordered_json(nullptr);
  j["num_nodes"] = p.size();
  j["num_edges"] = graph.num_edges();
  return j.dump(2);
}

SynthConfig config_from_metadata(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, std::string("metadata is not valid JSON: ") + e.what());
  }
  try {
    SynthConfig cfg;
    const auto g = j.at("graphon").get<std::string>();
    if (g == "g1") {
      cfg.graphon = GraphonSpec::table(1);
    } else if (g == "g2") {
      cfg.graphon = GraphonSpec::table(2);
    } else if (g == "g3") {
      cfg.graphon = GraphonSpec::table(3);
    } else {
      throw ValidationError("metadata graphon '" + g + "' cannot be regenerated");
    }
    cfg.n_core = j.at("n_core").get<std::size_t>();
    cfg.n_periphery = j.at("n_periphery").get<std::size_t>();
    const auto per = j.at("periphery").get<std::string>();
    if (per != "er" && per != "config") throw ValidationError("unknown periphery kind '" + per + "'");
    cfg.periphery = per == "er" ? PeripheryKind::er : PeripheryKind::config;
    cfg.target_density = j.at("target_density").get<double>();
    cfg.degree_ratio = j.at("degree_ratio").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    validate(cfg);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("metadata is missing fields: ") + e.what());
  }
}

}  // namespace corex
