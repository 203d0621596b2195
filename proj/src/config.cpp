// SPDX-License-Identifier: Apache-2.0
#include "lse/config.hpp"

#include <cmath>
#include <set>

#include "lse/bench.hpp"
#include "lse/error.hpp"

namespace lse {

namespace {

const std::set<std::string> kKeys = {
    "function", "domain", "h0",    "L",          "epsilon",     "L_range", "alpha",    "beta",
    "p",        "R",      "c",     "M0",         "h_ell0",      "oracle",  "seed",     "n_runs",
    "n_points", "point_family",    "refinement", "geometry_format",
};

template <class T>
T get(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config: key '") + key + "' has the wrong type");
  }
}

FunctionSpec parse_function(const Json& j) {
  FunctionSpec f;
  if (j.is_string()) {
    f.name = j.get<std::string>();
  } else if (j.is_object()) {
    if (!j.contains("name")) throw ConfigError("config: function object needs a 'name'");
    f.name = get<std::string>(j, "name");
    for (const auto& [k, v] : j.items()) {
      if (k == "name" || k[0] == '_') continue;
      if (k == "coefficients") {
        f.coefficients = get<std::vector<double>>(j, "coefficients");
      } else if (k == "offset") {
        f.offset = get<double>(j, "offset");
      } else if (k == "center") {
        f.center = get<std::vector<double>>(j, "center");
      } else if (k == "radius") {
        f.radius = get<double>(j, "radius");
      } else if (k == "value") {
        f.value = get<double>(j, "value");
      } else {
        throw ConfigError("config: unknown function key '" + k + "'");
      }
    }
  } else {
    throw ConfigError("config: 'function' must be a name or an object");
  }
  static const std::set<std::string> names = {"drop_wave", "styblinski_tang", "affine", "sphere", "constant"};
  if (!names.count(f.name)) throw ConfigError("config: unknown function '" + f.name + "'");
  return f;
}

OracleSpec parse_oracle(const Json& j) {
  OracleSpec o;
  if (j.is_string()) {
    o.type = j.get<std::string>();
  } else if (j.is_object()) {
    if (!j.contains("type")) throw ConfigError("config: oracle object needs a 'type'");
    o.type = get<std::string>(j, "type");
    for (const auto& [k, v] : j.items()) {
      if (k == "type" || k[0] == '_') continue;
      if (k == "variance0") {
        o.variance0 = get<double>(j, "variance0");
      } else if (k == "variance_rate") {
        o.variance_rate = get<double>(j, "variance_rate");
      } else if (k == "sigma") {
        o.sigma = get<double>(j, "sigma");
      } else {
        throw ConfigError("config: unknown oracle key '" + k + "'");
      }
    }
  } else {
    throw ConfigError("config: 'oracle' must be a type name or an object");
  }
  if (o.type != "deterministic" && o.type != "gaussian" && o.type != "monte_carlo") {
    throw ConfigError("config: unknown oracle type '" + o.type + "'");
  }
  if (o.type == "gaussian" && !(o.variance0 >= 0.0)) throw ConfigError("config: oracle.variance0 must be >= 0");
  if (!(o.sigma >= 0.0)) throw ConfigError("config: oracle.sigma must be >= 0");
  return o;
}

}  // namespace

CliConfig parse_config(const Json& input) {
  if (!input.is_object()) throw ConfigError("config: top level must be an object");
  // null means "not set", as written by canonical_config
  Json j = input;
  for (auto it = j.begin(); it != j.end();) it = it->is_null() ? j.erase(it) : std::next(it);
  for (const auto& [k, v] : j.items()) {
    if (!k.empty() && k[0] == '_') continue;
    if (!kKeys.count(k)) throw ConfigError("config: unknown key '" + k + "'");
  }
  CliConfig c;
  RunConfig& r = c.run;
  if (!j.contains("domain")) throw ConfigError("config: 'domain' is required");
  const Json& dom = j.at("domain");
  if (!dom.is_object() || !dom.contains("lower") || !dom.contains("upper")) {
    throw ConfigError("config: 'domain' needs 'lower' and 'upper'");
  }
  r.domain = Domain(get<std::vector<double>>(dom, "lower"), get<std::vector<double>>(dom, "upper"));
  if (!j.contains("h0")) throw ConfigError("config: 'h0' is required");
  r.h0 = get<double>(j, "h0");
  if (j.contains("function")) c.function = parse_function(j.at("function"));
  if (j.contains("oracle")) c.oracle = parse_oracle(j.at("oracle"));
  if (j.contains("alpha")) r.alpha = real_from_json(j.at("alpha"), "config: alpha");
  r.beta = c.oracle.type == "deterministic" ? kInfinity : 0.5;
  if (j.contains("beta")) r.beta = real_from_json(j.at("beta"), "config: beta");
  if (j.contains("p")) r.p = real_from_json(j.at("p"), "config: p");
  if (j.contains("R")) r.R = get<double>(j, "R");
  if (j.contains("c")) r.c = get<double>(j, "c");
  if (j.contains("M0")) r.M0 = get<double>(j, "M0");
  if (j.contains("h_ell0")) r.h_ell0 = get<double>(j, "h_ell0");
  if (j.contains("seed")) r.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("refinement")) {
    const auto m = get<std::string>(j, "refinement");
    if (m != "adaptive" && m != "uniform") throw ConfigError("config: refinement must be 'adaptive' or 'uniform'");
    r.mode = m == "uniform" ? RefinementMode::kUniform : RefinementMode::kAdaptive;
  }
  if (j.contains("n_runs")) c.n_runs = get<int>(j, "n_runs");
  if (c.n_runs < 1) throw ConfigError("config: n_runs must be at least 1");
  if (j.contains("n_points")) {
    const auto n = get<std::int64_t>(j, "n_points");
    if (n < 1) throw ConfigError("config: n_points must be at least 1");
    c.n_points = static_cast<std::size_t>(n);
  }
  if (j.contains("point_family")) c.point_family = parse_point_family(get<std::string>(j, "point_family"));
  if (j.contains("geometry_format")) {
    c.geometry_format = parse_geometry_format(get<std::string>(j, "geometry_format"));
  }

  const int level_keys = j.contains("L") + j.contains("epsilon");
  if (level_keys > 1) throw ConfigError("config: give either 'L' or 'epsilon', not both");
  if (j.contains("L")) r.L = get<int>(j, "L");
  if (j.contains("epsilon")) {
    c.epsilon = real_from_json(j.at("epsilon"), "config: epsilon");
    if (!(*c.epsilon > 0.0)) throw ConfigError("config: epsilon must be positive");
    r.L = level_for_tolerance(*c.epsilon, r);
  }
  if (j.contains("L_range")) {
    const Json& lr = j.at("L_range");
    if (lr.is_object()) {
      const int lo = get<int>(lr, "min"), hi = get<int>(lr, "max");
      for (int l = lo; l <= hi; ++l) c.L_range.push_back(l);
    } else {
      c.L_range = get<std::vector<int>>(j, "L_range");
    }
    if (c.L_range.empty()) throw ConfigError("config: L_range is empty");
    for (std::size_t i = 1; i < c.L_range.size(); ++i) {
      if (c.L_range[i] <= c.L_range[i - 1]) throw ConfigError("config: L_range must be strictly ascending");
    }
    if (!j.contains("L") && !c.epsilon) r.L = c.L_range.back();
  }

  if (c.oracle.type == "deterministic" && !std::isinf(r.beta)) {
    throw ConfigError("config: a deterministic oracle requires beta = inf");
  }
  if (c.oracle.type != "deterministic" && std::isinf(r.beta)) {
    throw ConfigError("config: a noisy oracle requires a finite beta");
  }
  const int d = r.domain.dim();
  make_function(c.function, d);  // dimension checks
  if (c.geometry_format == GeometryFormat::kObj && d != 3) {
    throw ConfigError("config: geometry_format obj requires a 3D domain");
  }
  r.validate();
  for (int L : c.L_range) {
    RunConfig t = r;
    t.L = L;
    t.validate();
  }
  return c;
}

CliConfig load_config(const std::string& path) { return parse_config(read_json_file(path)); }

Json canonical_config(const CliConfig& c) {
  Json j = run_config_to_json(c.run);
  Json f = {{"name", c.function.name}};
  if (c.function.name == "affine") {
    f["coefficients"] = c.function.coefficients;
    f["offset"] = c.function.offset;
  } else if (c.function.name == "sphere") {
    f["center"] = c.function.center;
    f["radius"] = c.function.radius;
  } else if (c.function.name == "constant") {
    f["value"] = c.function.value;
  }
  j["function"] = f;
  Json o = {{"type", c.oracle.type}};
  if (c.oracle.type == "gaussian") {
    o["variance0"] = c.oracle.variance0;
    o["variance_rate"] = c.oracle.variance_rate;
  } else if (c.oracle.type == "monte_carlo") {
    o["sigma"] = c.oracle.sigma;
  }
  j["oracle"] = o;
  j["epsilon"] = c.epsilon ? Json(*c.epsilon) : Json(nullptr);
  if (c.epsilon) j["L"] = nullptr;  // derived from epsilon
  j["L_range"] = c.L_range.empty() ? Json(nullptr) : Json(c.L_range);
  j["n_runs"] = c.n_runs;
  j["n_points"] = c.n_points;
  j["point_family"] = std::string(point_family_name(c.point_family));
  j["geometry_format"] = std::string(geometry_format_name(geometry_format_for(c)));
  return j;
}

std::string config_hash(const CliConfig& c) { return sha256_hex(canonical_config(c).dump()); }

std::shared_ptr<const ScalarField> make_function(const FunctionSpec& s, int dim) {
  std::shared_ptr<const ScalarField> f;
  if (s.name == "drop_wave") {
    f = std::make_shared<DropWave>();
  } else if (s.name == "styblinski_tang") {
    f = std::make_shared<StyblinskiTang>(dim);
  } else if (s.name == "affine") {
    f = std::make_shared<AffineFunction>(s.coefficients, s.offset);
  } else if (s.name == "sphere") {
    f = std::make_shared<SphereDistance>(s.center, s.radius);
  } else if (s.name == "constant") {
    f = std::make_shared<ConstantFunction>(s.value);
  } else {
    throw ConfigError("config: unknown function '" + s.name + "'");
  }
  if (f->dim() != 0 && f->dim() != dim) {
    throw ConfigError("config: function '" + s.name + "' has dimension " + std::to_string(f->dim()) +
                      " but the domain has dimension " + std::to_string(dim));
  }
  return f;
}

std::shared_ptr<const EvaluationOracle> make_oracle(const CliConfig& c, std::shared_ptr<const ScalarField> f) {
  const RunConfig& r = c.run;
  if (c.oracle.type == "deterministic") return std::make_shared<DeterministicOracle>(r.domain, f, r.cost_schedule());
  if (c.oracle.type == "gaussian") {
    return std::make_shared<GaussianNoiseOracle>(r.domain, f,
                                                 GeometricVariance{c.oracle.variance0, c.oracle.variance_rate},
                                                 r.cost_schedule());
  }
  const double sigma = c.oracle.sigma;
  auto sampler = [f, sigma](std::span<const double> x, RandomStream& rng) { return f->value(x) + sigma * rng.normal(); };
  return std::make_shared<MonteCarloOracle>(r.domain, sampler, r.cost_schedule(), sigma);
}

GeometryFormat geometry_format_for(const CliConfig& c) {
  if (c.geometry_format) return *c.geometry_format;
  return c.run.domain.dim() == 3 ? GeometryFormat::kObj : GeometryFormat::kSegmentsCsv;
}

}  // namespace lse
