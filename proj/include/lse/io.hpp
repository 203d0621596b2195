// SPDX-License-Identifier: Apache-2.0
//
// Document formats. All JSON is written with sorted keys and shortest
// round-trip numbers, so equal inputs give byte-identical files.
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lse/bench.hpp"
#include "lse/grid.hpp"
#include "lse/refine.hpp"

namespace lse {

using Json = nlohmann::json;

inline constexpr int kCheckpointVersion = 1;

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// Reals that may be infinite are written as the string "inf".
Json real_to_json(double v);
double real_from_json(const Json& j, std::string_view what);

Json run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const Json& j);

Json ledger_to_json(const WorkLedger& ledger);
WorkLedger ledger_from_json(const Json& j);

/// base_size, domain bounds and one {level, index} record per cell, sorted
/// by level then index; with `with_values`, each record also carries
/// visited_level and vertex_values.
Json mesh_to_json(const AdaptiveMesh& mesh, bool with_values);
/// Cell records only; `what` names the list in error messages. Records are
/// checked for shape, not for partition validity.
AdaptiveMesh mesh_from_json(const Grid& grid, const Json& cells, std::string_view what);

/// Everything needed to extract, validate or resume a run. `config` is the
/// full run configuration document, stored verbatim.
struct Checkpoint {
  Json config;
  std::string config_hash;
  RunResult run;
};

Json checkpoint_to_json(const Checkpoint& cp);
/// IoError/ValidationError naming the offending field or record.
Checkpoint checkpoint_from_json(const Json& j);

Json read_json_file(const std::string& path);
/// Writes `j.dump(2)` plus a trailing newline.
void write_json_file(const std::string& path, const Json& j);
void write_text_file(const std::string& path, std::string_view text);

/// Header `L,h_L,mean_error,std_error,total_work,n_cells`, preceded by
/// `# key=value` metadata lines.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep,
                     const std::vector<std::pair<std::string, std::string>>& metadata);
Json sweep_summary_json(const SweepResult& sweep);

}  // namespace lse
