#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "langmuir/distributions.hpp"
#include "langmuir/fixedpoint.hpp"
#include "langmuir/quadrature.hpp"

namespace langmuir::app {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// family plus its numeric parameters (and a path for "table").
struct DistributionSpec {
  std::string family = "box";
  std::map<std::string, double> params;
  std::string path;
};

struct SolverConfig {
  double r_b = 2.0;
  double phi_p = 0.0;
  double lambda = 1.0;
  double mu = 1.0 / 1836.0;
  DistributionSpec ions;
  DistributionSpec electrons;
  std::size_t nodes = 65;
  QuadratureSpec quad;
  double tol_outer = 1e-10;
  double tol_inner = 1e-8;
  double tol_consistency = 1e-6;
  std::size_t max_outer = 200;
  std::size_t max_inner = 100;
  double omega = 1.0;
  Initializer initializer = Initializer::newton;
  std::uint64_t seed = 1;
  std::vector<double> sweep;
  bool sweep_warm_start = false;
};

using KeyValues = std::map<std::string, std::string>;

/// `key = value` lines; '#' starts a comment; later keys override earlier ones.
KeyValues parse_key_values(std::istream& in, const std::string& origin = "config");

/// Splits "key=value" command line overrides.
KeyValues parse_overrides(const std::vector<std::string>& items);

/// Unknown keys and malformed values are errors.
SolverConfig config_from_keys(const KeyValues& kv);

/// File keys, then overrides. Validated.
SolverConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Range checks plus the norm gates of both distributions. Throws ConfigError.
void validate(const SolverConfig& c);

BoundaryDistribution make_distribution(const DistributionSpec& spec);

FixedPointOptions fixed_point_options(const SolverConfig& c, std::size_t threads);

/// All keys with their values, in the file format (sorted).
std::string to_key_values(const SolverConfig& c);

}  // namespace langmuir::app
