// SPDX-License-Identifier: Apache-2.0
#include "lse/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lse/bench.hpp"
#include "lse/config.hpp"
#include "lse/error.hpp"
#include "lse/extract.hpp"
#include "lse/io.hpp"
#include "lse/kernels/kernels.hpp"
#include "lse/version.hpp"

namespace lse {

namespace {

std::ostream& out_of(const CliOptions& o) { return o.out ? *o.out : std::cout; }
std::ostream& err_of(const CliOptions& o) { return o.err ? *o.err : std::cerr; }

template <class Fn>
int guarded(const CliOptions& opts, const char* cmd, Fn&& fn) {
  std::ostream& err = err_of(opts);
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << cmd << ": configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ValidationError& e) {
    err << cmd << ": validation failed: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    err << cmd << ": I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << cmd << ": error: " << e.what() << '\n';
    return kExitFailure;
  }
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

CliConfig load_with_overrides(const std::string& path, const CliOptions& opts) {
  Json j = read_json_file(path);
  if (opts.seed && j.is_object()) j["seed"] = *opts.seed;
  return parse_config(j);
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string geometry_file(GeometryFormat f) { return f == GeometryFormat::kObj ? "levelset.obj" : "levelset.csv"; }

void write_geometry_file(const std::string& path, const LevelSetGeometry& geom, GeometryFormat format,
                         const std::string& hash, std::uint64_t seed) {
  std::ostringstream text;
  text << "# seed=" << seed << '\n';
  write_geometry(text, geom, format, hash);
  write_text_file(path, text.str());
}

}  // namespace

int cmd_run(const std::string& config_path, const CliOptions& opts) {
  return guarded(opts, "run", [&] {
    const CliConfig cfg = load_with_overrides(config_path, opts);
    const std::string hash = config_hash(cfg);
    const auto f = make_function(cfg.function, cfg.run.domain.dim());
    const auto oracle = make_oracle(cfg, f);
    const GeometryFormat gformat = geometry_format_for(cfg);
    if (gformat == GeometryFormat::kObj && cfg.run.domain.dim() != 3) {
      throw ConfigError("geometry_format obj requires a 3D domain");
    }
    ensure_dir(opts.out_dir);

    RunOptions ro;
    ro.workers = opts.workers;
    RunResult result;
    if (opts.resume) {
      const Checkpoint prev = checkpoint_from_json(read_json_file(*opts.resume));
      CliConfig prev_cfg = parse_config(prev.config);
      prev_cfg.run.L = cfg.run.L;
      prev_cfg.epsilon = cfg.epsilon;
      prev_cfg.L_range = cfg.L_range;
      if (canonical_config(prev_cfg) != canonical_config(cfg)) {
        const std::string what = cfg.run.first_difference_ignoring_level(prev.run.config);
        throw ConfigError("resume: configuration differs from the checkpoint" +
                          (what.empty() ? std::string(" (function, oracle or metric settings)") : " in '" + what + "'"));
      }
      result = resume(prev.run, cfg.run.L, cfg.run, *oracle, ro);
      if (opts.verbosity > 0) {
        err_of(opts) << "resumed L=" << prev.run.config.L << " -> " << cfg.run.L << ", new evaluations "
                     << result.segment_ledger.total_evaluations() << '\n';
      }
    } else {
      result = run_adaptive(cfg.run, *oracle, ro);
    }

    const Json canon = canonical_config(cfg);
    write_json_file(join(opts.out_dir, "checkpoint.json"), checkpoint_to_json({canon, hash, result}));
    Json ledger = ledger_to_json(result.ledger);
    ledger["config_hash"] = hash;
    ledger["seed"] = cfg.run.seed;
    ledger["segment"] = ledger_to_json(result.segment_ledger);
    write_json_file(join(opts.out_dir, "ledger.json"), ledger);
    const LevelSetGeometry geom = extract_levelset(result.mesh);
    write_geometry_file(join(opts.out_dir, geometry_file(gformat)), geom, gformat, hash, cfg.run.seed);

    Json meta;
    meta["config"] = canon;
    meta["config_hash"] = hash;
    meta["seed"] = cfg.run.seed;
    meta["version"] = kVersion;
    meta["isa"] = std::string(kernels::isa_name(kernels::active_isa()));
    meta["ell0"] = result.ell0;
    meta["L"] = cfg.run.L;
    meta["n_cells"] = result.mesh.size();
    meta["total_cost"] = result.ledger.total_cost();
    meta["geometry_pieces"] = geom.pieces.size();
    meta["resumed_from"] = opts.resume ? Json(*opts.resume) : Json(nullptr);
    meta["timestamp"] = utc_timestamp();
    write_json_file(join(opts.out_dir, "run.json"), meta);

    out_of(opts) << "run: L=" << cfg.run.L << " ell0=" << result.ell0 << " cells=" << result.mesh.size()
                 << " total_cost=" << result.ledger.total_cost() << " pieces=" << geom.pieces.size() << '\n';
    return int{kExitOk};
  });
}

int cmd_sweep(const std::string& config_path, const CliOptions& opts) {
  return guarded(opts, "sweep", [&] {
    const CliConfig cfg = load_with_overrides(config_path, opts);
    if (cfg.L_range.empty()) throw ConfigError("sweep: config needs a nonempty 'L_range'");
    const std::string hash = config_hash(cfg);
    const auto f = make_function(cfg.function, cfg.run.domain.dim());
    const auto oracle = make_oracle(cfg, f);
    ensure_dir(opts.out_dir);
    ErrorOptions eo;
    eo.n_points = cfg.n_points;
    eo.family = cfg.point_family;
    const SweepResult sweep = convergence_sweep(cfg.run, *oracle, *f, cfg.L_range, cfg.n_runs, eo, opts.workers);

    std::ostringstream csv;
    write_sweep_csv(csv, sweep,
                    {{"config_hash", hash},
                     {"seed", std::to_string(cfg.run.seed)},
                     {"point_family", std::string(point_family_name(cfg.point_family))},
                     {"n_runs", std::to_string(cfg.n_runs)},
                     {"points_per_cell", std::to_string(cfg.n_points)}});
    write_text_file(join(opts.out_dir, "sweep.csv"), csv.str());
    Json summary = sweep_summary_json(sweep);
    summary["config_hash"] = hash;
    summary["seed"] = cfg.run.seed;
    write_json_file(join(opts.out_dir, "sweep.json"), summary);
    out_of(opts) << "sweep: " << sweep.rows.size() << " levels, fitted slope " << sweep.fitted_slope
                 << " (target " << sweep.target_slope << ")\n";
    return int{kExitOk};
  });
}

int cmd_extract(const std::string& checkpoint_path, const CliOptions& opts) {
  return guarded(opts, "extract", [&] {
    const Checkpoint cp = checkpoint_from_json(read_json_file(checkpoint_path));
    const int d = cp.run.mesh.dim();
    GeometryFormat format = d == 3 ? GeometryFormat::kObj : GeometryFormat::kSegmentsCsv;
    if (opts.format) format = parse_geometry_format(*opts.format);
    if (format == GeometryFormat::kObj && d != 3) {
      throw ConfigError("extract: obj output requires a 3D checkpoint, this one has d = " + std::to_string(d));
    }
    ensure_dir(opts.out_dir);
    const LevelSetGeometry geom = extract_levelset(cp.run.mesh);
    const std::string path = join(opts.out_dir, geometry_file(format));
    write_geometry_file(path, geom, format, cp.config_hash, cp.run.config.seed);
    out_of(opts) << "extract: " << geom.pieces.size() << " pieces -> " << path << '\n';
    return int{kExitOk};
  });
}

int cmd_validate(const std::string& checkpoint_path, const CliOptions& opts) {
  return guarded(opts, "validate", [&] {
    const Checkpoint cp = checkpoint_from_json(read_json_file(checkpoint_path));
    const AdaptiveMesh& mesh = cp.run.mesh;
    const PartitionReport report = validate_partition(mesh);
    std::ostream& out = out_of(opts);
    out << "validate: " << mesh.size() << " cells, d = " << mesh.dim() << '\n' << report.summary(mesh.dim()) << '\n';
    bool ok = report.ok;
    if (!mesh.has_approximants()) {
      out << "missing approximants\n";
      ok = false;
    }
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      const Cell& c = mesh.cells()[i];
      if (c.level < cp.run.ell0 || c.level > cp.run.config.L) {
        out << "cell " << i << " " << format_cell(c, mesh.dim()) << ": level outside [ell0, L]\n";
        ok = false;
      }
    }
    out << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? int{kExitOk} : int{kExitValidation};
  });
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Adaptive noise-robust level-set estimation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  CliOptions opts;
  std::string input;
  int verbose = 0;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run the adaptive algorithm once");
  run->add_option("config", input, "Run configuration (JSON)")->required();
  run->add_option("--resume", opts.resume, "Checkpoint of an earlier run to extend to the configured L");
  auto* sweep = app.add_subcommand("sweep", "Convergence sweep over L_range");
  sweep->add_option("config", input, "Run configuration (JSON)")->required();
  auto* extract = app.add_subcommand("extract", "Export level-set geometry from a checkpoint");
  extract->add_option("checkpoint", input, "checkpoint.json written by run")->required();
  extract->add_option("--format", opts.format, "segments-csv or obj");
  auto* validate = app.add_subcommand("validate", "Check a checkpoint's partition and approximants");
  validate->add_option("checkpoint", input, "checkpoint.json written by run")->required();

  for (auto* sub : {run, sweep, extract, validate}) {
    sub->add_option("-o,--out", opts.out_dir, "Output directory")->capture_default_str();
    sub->add_option("-j,--workers", opts.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_flag("-v,--verbose", verbose, "More progress output");
  }
  CLI::Option* seed_opt = nullptr;
  for (auto* sub : {run, sweep}) seed_opt = sub->add_option("--seed", seed, "Override the configured seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? int{kExitOk} : int{kExitConfig};
  }
  opts.verbosity = verbose;
  (void)seed_opt;
  if ((run->parsed() && run->count("--seed")) || (sweep->parsed() && sweep->count("--seed"))) opts.seed = seed;

  if (run->parsed()) return cmd_run(input, opts);
  if (sweep->parsed()) return cmd_sweep(input, opts);
  if (extract->parsed()) return cmd_extract(input, opts);
  return cmd_validate(input, opts);
}

}  // namespace lse
