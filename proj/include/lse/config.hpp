// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lse/extract.hpp"
#include "lse/functions.hpp"
#include "lse/io.hpp"
#include "lse/oracle.hpp"
#include "lse/qmc.hpp"
#include "lse/refine.hpp"

namespace lse {

/// Target function: "drop_wave", "styblinski_tang", "affine"
/// (coefficients, offset), "sphere" (center, radius) or "constant" (value).
struct FunctionSpec {
  std::string name = "drop_wave";
  std::vector<double> coefficients;
  double offset = 0.0;
  std::vector<double> center;
  double radius = 1.0;
  double value = 0.0;
};

/// Oracle: "deterministic"; "gaussian" with variance v0 * 2^(-rate * level);
/// "monte_carlo" averaging M_l draws of f(x) + sigma * Y, Y standard normal.
struct OracleSpec {
  std::string type = "deterministic";
  double variance0 = 0.0;
  double variance_rate = 2.0;
  double sigma = 1.0;
};

/// Run configuration file contents: RunConfig plus everything the command
/// line tools need.
struct CliConfig {
  RunConfig run;
  FunctionSpec function;
  OracleSpec oracle;
  /// Error tolerance mapped to L before the run when set.
  std::optional<double> epsilon;
  std::vector<int> L_range;
  int n_runs = 1;
  std::size_t n_points = 512;
  PointFamily point_family = PointFamily::kScrambledSobol;
  std::optional<GeometryFormat> geometry_format;
};

/// Parses and validates a configuration document. ConfigError names the
/// offending key or violated invariant. Keys starting with '_' are comments.
CliConfig parse_config(const Json& j);
CliConfig load_config(const std::string& path);

/// Canonical document (every key, defaults filled in, comments dropped)
/// whose serialization is hashed.
Json canonical_config(const CliConfig& cfg);
std::string config_hash(const CliConfig& cfg);

std::shared_ptr<const ScalarField> make_function(const FunctionSpec& spec, int dim);
std::shared_ptr<const EvaluationOracle> make_oracle(const CliConfig& cfg, std::shared_ptr<const ScalarField> f);

/// segments-csv in 2D, obj in 3D unless configured.
GeometryFormat geometry_format_for(const CliConfig& cfg);

}  // namespace lse
