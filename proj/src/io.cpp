// SPDX-License-Identifier: Apache-2.0
#include "lse/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "lse/error.hpp"
#include "lse/format.hpp"

namespace lse {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256: digest computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

Json real_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from_json(const Json& j, std::string_view what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInfinity;
  }
  throw ConfigError(std::string(what) + ": expected a number or \"inf\", got " + j.dump());
}

namespace {

const Json& field(const Json& j, const char* key, std::string_view where) {
  if (!j.is_object() || !j.contains(key)) throw IoError(std::string(where) + ": missing field '" + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const char* key, std::string_view where) {
  try {
    return field(j, key, where).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw IoError(std::string(where) + ": field '" + key + "' has the wrong type");
  }
}

std::vector<std::size_t> canonical_order(const AdaptiveMesh& mesh) {
  std::vector<std::size_t> order(mesh.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mesh.cells()[a] < mesh.cells()[b]; });
  return order;
}

std::string_view mode_name(RefinementMode m) { return m == RefinementMode::kUniform ? "uniform" : "adaptive"; }

}  // namespace

Json run_config_to_json(const RunConfig& cfg) {
  Json j;
  j["domain"] = {{"lower", std::vector<double>(cfg.domain.lower().begin(), cfg.domain.lower().end())},
                 {"upper", std::vector<double>(cfg.domain.upper().begin(), cfg.domain.upper().end())}};
  j["h0"] = cfg.h0;
  j["L"] = cfg.L;
  j["alpha"] = real_to_json(cfg.alpha);
  j["beta"] = real_to_json(cfg.beta);
  j["p"] = real_to_json(cfg.p);
  j["R"] = cfg.R ? Json(*cfg.R) : Json(nullptr);
  j["c"] = cfg.c;
  j["M0"] = cfg.M0;
  j["seed"] = cfg.seed;
  j["h_ell0"] = cfg.h_ell0 ? Json(*cfg.h_ell0) : Json(nullptr);
  j["refinement"] = mode_name(cfg.mode);
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  const char* where = "run_config";
  RunConfig cfg;
  const Json& d = field(j, "domain", where);
  cfg.domain = Domain(get_as<std::vector<double>>(d, "lower", where), get_as<std::vector<double>>(d, "upper", where));
  cfg.h0 = get_as<double>(j, "h0", where);
  cfg.L = get_as<int>(j, "L", where);
  cfg.alpha = real_from_json(field(j, "alpha", where), "alpha");
  cfg.beta = real_from_json(field(j, "beta", where), "beta");
  cfg.p = real_from_json(field(j, "p", where), "p");
  if (const Json& r = field(j, "R", where); !r.is_null()) cfg.R = r.get<double>();
  cfg.c = get_as<double>(j, "c", where);
  cfg.M0 = get_as<double>(j, "M0", where);
  cfg.seed = get_as<std::uint64_t>(j, "seed", where);
  if (const Json& h = field(j, "h_ell0", where); !h.is_null()) cfg.h_ell0 = h.get<double>();
  const auto mode = get_as<std::string>(j, "refinement", where);
  if (mode != "adaptive" && mode != "uniform") throw IoError("run_config: unknown refinement '" + mode + "'");
  cfg.mode = mode == "uniform" ? RefinementMode::kUniform : RefinementMode::kAdaptive;
  return cfg;
}

Json ledger_to_json(const WorkLedger& ledger) {
  Json levels = Json::array();
  for (const auto& t : ledger.levels()) {
    levels.push_back({{"level", t.level},
                      {"cells_visited", t.cells_visited},
                      {"cells_refined", t.cells_refined},
                      {"evaluations", t.evaluations},
                      {"cost_per_eval", t.cost_per_eval},
                      {"cost", t.cost()},
                      {"sampled", t.sampled}});
  }
  return {{"per_level", levels},
          {"total_cost", ledger.total_cost()},
          {"total_evaluations", ledger.total_evaluations()}};
}

WorkLedger ledger_from_json(const Json& j) {
  WorkLedger ledger;
  const Json& levels = field(j, "per_level", "ledger");
  if (!levels.is_array()) throw IoError("ledger: per_level must be an array");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string where = "ledger level record " + std::to_string(i);
    const Json& r = levels[i];
    LevelTally t;
    t.level = get_as<int>(r, "level", where);
    t.cells_visited = get_as<std::uint64_t>(r, "cells_visited", where);
    t.cells_refined = get_as<std::uint64_t>(r, "cells_refined", where);
    t.evaluations = get_as<std::uint64_t>(r, "evaluations", where);
    t.cost_per_eval = get_as<double>(r, "cost_per_eval", where);
    t.sampled = get_as<bool>(r, "sampled", where);
    ledger.add(t);
  }
  return ledger;
}

Json mesh_to_json(const AdaptiveMesh& mesh, bool with_values) {
  const int d = mesh.dim();
  Json cells = Json::array();
  for (std::size_t i : canonical_order(mesh)) {
    const Cell& c = mesh.cells()[i];
    Json rec;
    rec["level"] = c.level;
    rec["index"] = std::vector<std::int32_t>(c.index.begin(), c.index.begin() + d);
    if (with_values) {
      rec["visited_level"] = c.level;
      auto v = mesh.vertex_values(i);
      rec["vertex_values"] = std::vector<double>(v.begin(), v.end());
    }
    cells.push_back(std::move(rec));
  }
  const Domain& dom = mesh.grid().domain();
  return {{"base_size", mesh.grid().base_size()},
          {"dim", d},
          {"domain",
           {{"lower", std::vector<double>(dom.lower().begin(), dom.lower().end())},
            {"upper", std::vector<double>(dom.upper().begin(), dom.upper().end())}}},
          {"cells", cells}};
}

AdaptiveMesh mesh_from_json(const Grid& grid, const Json& cells, std::string_view what) {
  if (!cells.is_array()) throw IoError(std::string(what) + ": expected an array of cell records");
  const int d = grid.dim();
  const std::size_t nv = static_cast<std::size_t>(grid.vertices_per_cell());
  std::vector<Cell> out;
  std::vector<double> values;
  out.reserve(cells.size());
  values.reserve(cells.size() * nv);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string where = std::string(what) + " record " + std::to_string(i);
    const Json& r = cells[i];
    Cell c;
    c.level = get_as<std::int32_t>(r, "level", where);
    const auto index = get_as<std::vector<std::int64_t>>(r, "index", where);
    if (static_cast<int>(index.size()) != d) {
      throw ValidationError(where + ": index has " + std::to_string(index.size()) + " entries, expected " +
                            std::to_string(d));
    }
    for (int k = 0; k < d; ++k) {
      if (index[k] < std::numeric_limits<std::int32_t>::min() || index[k] > std::numeric_limits<std::int32_t>::max()) {
        throw ValidationError(where + ": index out of range");
      }
      c.index[k] = static_cast<std::int32_t>(index[k]);
    }
    if (r.contains("visited_level") && get_as<std::int32_t>(r, "visited_level", where) != c.level) {
      throw ValidationError(where + ": visited_level differs from the cell level");
    }
    if (!r.contains("vertex_values")) throw ValidationError(where + ": missing approximant (vertex_values)");
    const auto v = get_as<std::vector<double>>(r, "vertex_values", where);
    if (v.size() != nv) {
      throw ValidationError(where + ": approximant has " + std::to_string(v.size()) + " vertex values, expected " +
                            std::to_string(nv));
    }
    out.push_back(c);
    values.insert(values.end(), v.begin(), v.end());
  }
  return AdaptiveMesh(grid, std::move(out), std::move(values));
}

Json checkpoint_to_json(const Checkpoint& cp) {
  const RunResult& r = cp.run;
  Json j = mesh_to_json(r.mesh, true);
  j["format"] = "lse-checkpoint";
  j["version"] = kCheckpointVersion;
  j["config"] = cp.config;
  j["config_hash"] = cp.config_hash;
  j["run_config"] = run_config_to_json(r.config);
  j["seed"] = r.config.seed;
  j["replicate"] = r.replicate;
  j["ell0"] = r.ell0;
  j["has_history"] = r.has_history;
  j["history"] = r.has_history ? mesh_to_json(r.history, true)["cells"] : Json::array();
  j["ledger"] = ledger_to_json(r.ledger);
  return j;
}

Checkpoint checkpoint_from_json(const Json& j) {
  const char* where = "checkpoint";
  if (get_as<std::string>(j, "format", where) != "lse-checkpoint") throw IoError("checkpoint: not a checkpoint file");
  if (const int v = get_as<int>(j, "version", where); v != kCheckpointVersion) {
    throw IoError("checkpoint: unsupported version " + std::to_string(v));
  }
  Checkpoint cp;
  cp.config = field(j, "config", where);
  cp.config_hash = get_as<std::string>(j, "config_hash", where);
  RunResult& r = cp.run;
  r.config = run_config_from_json(field(j, "run_config", where));
  const Grid grid(r.config.domain, r.config.h0);
  if (get_as<double>(j, "base_size", where) != grid.base_size()) {
    throw ValidationError("checkpoint: base_size differs from run_config.h0");
  }
  r.replicate = get_as<std::uint64_t>(j, "replicate", where);
  r.ell0 = get_as<int>(j, "ell0", where);
  r.has_history = get_as<bool>(j, "has_history", where);
  r.mesh = mesh_from_json(grid, field(j, "cells", where), "cell");
  r.history = mesh_from_json(grid, field(j, "history", where), "history cell");
  r.ledger = ledger_from_json(field(j, "ledger", where));
  r.segment_ledger = r.ledger;
  return cp;
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("write to '" + path + "' failed");
}

void write_json_file(const std::string& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

void write_sweep_csv(std::ostream& out, const SweepResult& sweep,
                     const std::vector<std::pair<std::string, std::string>>& metadata) {
  for (const auto& [k, v] : metadata) out << "# " << k << '=' << v << '\n';
  out << "L,h_L,mean_error,std_error,total_work,n_cells\n";
  for (const auto& r : sweep.rows) {
    out << r.L << ',' << format_double(r.h_L) << ',' << format_double(r.error_mean) << ','
        << format_double(r.error_std_error) << ',' << format_double(r.work_total) << ','
        << format_double(r.leaf_cells) << '\n';
  }
}

Json sweep_summary_json(const SweepResult& sweep) {
  auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  Json rows = Json::array();
  for (const auto& r : sweep.rows) {
    rows.push_back({{"L", r.L},
                    {"ell0", r.ell0},
                    {"h_L", r.h_L},
                    {"mean_error", r.error_mean},
                    {"std_error", num(r.error_std_error)},
                    {"total_work", r.work_total},
                    {"n_cells", r.leaf_cells}});
  }
  return {{"rows", rows},
          {"fitted_slope", num(sweep.fitted_slope)},
          {"fitted_intercept", num(sweep.fitted_intercept)},
          {"target_slope", sweep.target_slope},
          {"error_vs_h_slope", num(sweep.error_vs_h_slope)},
          {"point_family", std::string(point_family_name(sweep.point_family))},
          {"n_runs", sweep.n_runs},
          {"points_per_cell", sweep.n_points}};
}

}  // namespace lse
