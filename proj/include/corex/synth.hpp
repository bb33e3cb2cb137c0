#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corex/graph.hpp"

namespace corex {

enum class GraphonKind { g1, g2, g3, custom };

const char* to_string(GraphonKind k) noexcept;

/// A symmetric function [0,1]^2 -> [0,1] generating core edge probabilities.
///   g1: k/7 when both arguments lie in ((k-1)/6, k/6), 0.3/7 otherwise (rank 6)
///   g2: sin(5 pi (mu + nu - 1) + 1) / 2 + 0.5 (rank 3)
///   g3: 1 / (1 + exp(15 (0.8 |mu - nu|)^(4/5) - 0.1)) (full rank)
struct GraphonSpec {
  GraphonKind kind = GraphonKind::g1;
  std::function<double(double, double)> custom;

  /// 1, 2 or 3; throws DomainError otherwise.
  static GraphonSpec table(int index);
  static GraphonSpec constant(double value);
};

/// Throws DomainError when mu or nu is outside [0, 1] or a custom graphon
/// returns a value outside [0, 1].
double graphon_value(const GraphonSpec& spec, double mu, double nu);

/// Rank of the tabulated graphons' core matrices; 0 means full rank.
int graphon_rank(GraphonKind kind) noexcept;

struct GraphonCore {
  ProbabilityMatrix p;
  std::vector<double> latent;  // xi_i ~ Uniform[0, 1]
};

/// P_ij = g(xi_i, xi_j) for i != j, zero diagonal.
GraphonCore graphon_core(const GraphonSpec& spec, std::size_t n_core, std::uint64_t seed);

/// Stochastic block model with zero diagonal (tests and eigengap demos).
ProbabilityMatrix block_model(const std::vector<std::size_t>& sizes, const std::vector<std::vector<double>>& b);

/// Core block in the top-left, every pair touching one of the n_periphery
/// appended nodes at `periphery_level`.
ProbabilityMatrix assemble_er(const ProbabilityMatrix& core_p, std::size_t n_periphery, double periphery_level);

struct ConfigAssembly {
  ProbabilityMatrix p;
  std::vector<double> theta;  // core row sums followed by periphery draws
  double core_theta_total = 0.0;
  std::size_t clipped = 0;

  /// d_i = theta_i * sum(theta) / core_theta_total. With these degrees every
  /// pair touching a periphery node satisfies P_ij = d_i d_j / sum_k d_k.
  std::vector<double> expected_degrees() const;
};

/// theta^C_i = core row sums; theta^P_i ~ Uniform(0.5 min theta^C, 1.5 max theta^C)
/// unless `periphery_theta_range` overrides the bounds; P_ij =
/// theta_i theta_j / sum theta^C for pairs touching the periphery, clipped to 1.
ConfigAssembly assemble_config(const ProbabilityMatrix& core_p, std::size_t n_periphery, std::uint64_t seed,
                               std::optional<std::pair<double, double>> periphery_theta_range = std::nullopt);

enum class PeripheryKind { er, config };

const char* to_string(PeripheryKind k) noexcept;

struct SynthConfig {
  GraphonSpec graphon;
  std::size_t n_core = 1000;
  std::size_t n_periphery = 1000;
  PeripheryKind periphery = PeripheryKind::er;
  double target_density = 0.02;
  double degree_ratio = 1.0;  // mean core expected degree / mean periphery expected degree
  std::uint64_t seed = 0;
};

/// Throws DomainError on an invalid configuration.
void validate(const SynthConfig& cfg);

struct SizePreset {
  const char* name;
  std::size_t n_core;
  std::size_t n_periphery;
};

/// "balanced" (1000/1000), "small-core" (700/1300), "large-core" (1300/700).
std::optional<SizePreset> size_preset(const std::string& name);

struct RescaleResult {
  ProbabilityMatrix p;
  double c_core = 1.0;            // core-core entries
  double c_core_periphery = 1.0;  // core-periphery entries
  double c_periphery = 1.0;       // periphery-periphery entries
  std::size_t clipped = 0;        // off-diagonal entries clipped to 1
  double realized_density = 0.0;
  std::optional<double> realized_ratio;
};

/// Scales the core block by c and the periphery by (gamma c, gamma c) for ER
/// peripheries or (gamma c, gamma^2 c) for configuration peripheries, so the
/// constant or product form of periphery rows survives. gamma is found by
/// bisection to match degree_ratio, c then fixes the mean off-diagonal
/// density. Throws InfeasibleError when the ratio is unreachable or more
/// than 20% of entries would clip.
RescaleResult rescale(const ProbabilityMatrix& p, std::size_t n_core, PeripheryKind periphery,
                      double target_density, double degree_ratio);

/// Mean expected degree of the first n_core nodes over that of the rest.
double degree_ratio_of(const ProbabilityMatrix& p, std::size_t n_core);

struct SynthSeeds {
  std::uint64_t core = 0;
  std::uint64_t theta = 0;
  std::uint64_t sample = 0;
};

SynthSeeds synth_seeds(std::uint64_t master) noexcept;

struct SynthInstance {
  SynthConfig config;
  SynthSeeds seeds;
  std::vector<double> latent;
  ProbabilityMatrix p;
  SparseGraph graph;
  std::vector<bool> truth;  // first n_core nodes are core
  double initial_periphery_level = 0.0;  // ER only
  std::size_t assembly_clipped = 0;
  RescaleResult scaling;  // scaling.p is moved into p
  std::vector<double> expected_degrees;

  std::string metadata_json() const;
};

/// Probability matrix only: graphon core, periphery assembly, rescaling.
SynthInstance generate_truth(const SynthConfig& cfg);
/// generate_truth followed by sampling the adjacency.
SynthInstance generate(const SynthConfig& cfg);

/// Parses a metadata record written by SynthInstance::metadata_json back into
/// the configuration that produced it.
SynthConfig config_from_metadata(const std::string& json_text);

}  // namespace corex
