#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "su2kam/arithmetic.hpp"
#include "su2kam/experiments.hpp"
#include "su2kam/kam_driver.hpp"

namespace kam {

/// Reads the TOML subset used by experiment configs into nested JSON objects:
/// [section] headers, dotted keys, strings, booleans, integers, floats and (nested,
/// possibly multi-line) arrays; '#' comments. Throws ConfigError with the line number.
nlohmann::json parse_toml(std::string_view text);
nlohmann::json load_toml_file(const std::string& path);

struct ModeSpec {
  char channel = 'z';  // 't' or 'z'
  Freq k;
  double re = 0, im = 0;
};

/// A map U : T^d -> su(2): explicit modes, seeded random with geometric decay, a planted
/// cocycle file written by `plant`, or zero.
struct MapSpec {
  enum class Kind { None, Modes, Random, File };
  Kind kind = Kind::None;
  std::vector<ModeSpec> modes;
  int band = 4;
  double amplitude = 1e-3;
  double decay = 0.5;
  std::string file;
  std::optional<double> scale_to;  // target ||F||_0 of the planted perturbation
};

struct ExperimentConfig {
  std::vector<long long> alpha_cf;  // periodic or finite quotient list
  bool alpha_periodic = true;
  std::vector<double> alpha_literal;
  double angle = 0.15;
  DiophParams<double> dc_alpha{0.1, 2, 10000};
  MapSpec perturbation;  // F for `run` and the cascade, the exponent of D for plants
  MapSpec plant;
  int planted_resonances = 0;
  std::vector<int> cascade_steps{2, 3, 4};
  CascadeOptions cascade;
  int toy_cases = 100;
  int toy_k_max = 1000;
  double toy_tol = 1e-9;
  SchemeParams scheme;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::string base_dir = ".";  // directory of the config file; relative paths resolve against it

  int dim() const { return alpha_literal.empty() ? 1 : static_cast<int>(alpha_literal.size()); }

  template <class Real>
  std::vector<Real> alpha() const {
    if (!alpha_literal.empty()) return {alpha_literal.begin(), alpha_literal.end()};
    const std::span<const long long> q(alpha_cf);
    return {alpha_periodic ? alpha_from_periodic_cf<Real>(q) : alpha_from_finite_cf<Real>(q)};
  }
};

/// Unknown sections or keys, wrong types and missing seeds for random specs are ConfigErrors.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::string& path);

/// Builds the map described by spec. Random specs need a seed.
template <class Real>
AlgebraMap<Real> build_map(const MapSpec& spec, int dim, std::optional<std::uint64_t> seed, const std::string& base_dir);

}  // namespace kam
