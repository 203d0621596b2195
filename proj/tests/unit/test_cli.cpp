// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "lse/cli.hpp"
#include "lse/config.hpp"
#include "lse/error.hpp"
#include "lse/io.hpp"

using namespace lse;
namespace fs = std::filesystem;

namespace {

Json small_config() {
  return Json{{"function", "drop_wave"},
              {"domain", {{"lower", {-5, -5}}, {"upper", {5, 5}}}},
              {"h0", 0.625},
              {"L", 2},
              {"alpha", 2},
              {"beta", 0.5},
              {"M0", 10000},
              {"oracle", {{"type", "gaussian"}, {"variance0", 0.001}}},
              {"seed", 4}};
}

std::string write_config(const std::string& dir, const Json& j, const std::string& name = "config.json") {
  const std::string path = dir + "/" + name;
  write_json_file(path, j);
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Captured {
  std::ostringstream out, err;
  CliOptions opts(const std::string& dir) {
    CliOptions o;
    o.out_dir = dir;
    o.out = &out;
    o.err = &err;
    return o;
  }
};

int main_with(std::vector<std::string> args) {
  std::vector<const char*> argv = {"lse"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("run writes every artifact") {
    const std::string dir = test::temp_dir("cli_run");
    Captured c;
    REQUIRE(cmd_run(write_config(dir, small_config()), c.opts(dir)) == kExitOk);
    for (const char* f : {"checkpoint.json", "ledger.json", "levelset.csv", "run.json"}) {
      CHECK(fs::exists(dir + "/" + f));
    }
    const Json run = read_json_file(dir + "/run.json");
    const Json ledger = read_json_file(dir + "/ledger.json");
    CHECK(run.at("config_hash") == ledger.at("config_hash"));
    CHECK(run.at("seed") == 4);
    CHECK(slurp(dir + "/levelset.csv").rfind("# seed=4\n# config_hash=", 0) == 0);
    CHECK(ledger.at("total_cost") == ledger.at("segment").at("total_cost"));
  }

  TEST_CASE("invalid configurations exit with the config status and name the key") {
    const std::string dir = test::temp_dir("cli_bad");
    Captured c;
    Json j = small_config();
    j["R"] = 2.5;  // must be below alpha_p = 2
    CHECK(cmd_run(write_config(dir, j), c.opts(dir)) == kExitConfig);
    CHECK(c.err.str().find("R") != std::string::npos);
    CHECK_FALSE(fs::exists(dir + "/checkpoint.json"));

    Json k = small_config();
    k["colour"] = "blue";
    Captured c2;
    CHECK(cmd_run(write_config(dir, k), c2.opts(dir)) == kExitConfig);
    CHECK(c2.err.str().find("colour") != std::string::npos);

    Json both = small_config();
    both["epsilon"] = 0.01;
    CHECK_THROWS_AS(parse_config(both), ConfigError);
    Json det = small_config();
    det["oracle"] = "deterministic";
    CHECK_THROWS_AS(parse_config(det), ConfigError);

    Captured c3;
    CHECK(cmd_run(dir + "/does_not_exist.json", c3.opts(dir)) == kExitIo);
  }

  TEST_CASE("epsilon selects L") {
    Json j = small_config();
    j.erase("L");
    j["epsilon"] = 1e-4;  // sqrt = 0.01; 0.625 / 2^6 <= 0.01
    const CliConfig c = parse_config(j);
    CHECK(c.run.L == 6);
  }

  TEST_CASE("config hash ignores comments and key order") {
    Json a = small_config();
    Json b = small_config();
    b["_comment"] = "notes";
    CHECK(config_hash(parse_config(a)) == config_hash(parse_config(b)));
    b["seed"] = 5;
    CHECK(config_hash(parse_config(a)) != config_hash(parse_config(b)));
    CHECK(parse_config(canonical_config(parse_config(a))).run.L == 2);
  }

  TEST_CASE("sweep writes one row per level and is reproducible") {
    const std::string dir = test::temp_dir("cli_sweep");
    Json j = small_config();
    j.erase("L");
    j["L_range"] = {{"min", 1}, {"max", 4}};
    j["n_runs"] = 2;
    j["n_points"] = 8;
    const std::string cfg = write_config(dir, j);
    Captured c;
    REQUIRE(cmd_sweep(cfg, c.opts(dir + "/a")) == kExitOk);
    Captured c2;
    REQUIRE(cmd_sweep(cfg, c2.opts(dir + "/b")) == kExitOk);
    const std::string csv = slurp(dir + "/a/sweep.csv");
    CHECK(csv == slurp(dir + "/b/sweep.csv"));
    CHECK(slurp(dir + "/a/sweep.json") == slurp(dir + "/b/sweep.json"));
    int rows = 0;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) rows += !line.empty() && line[0] != '#' && line[0] != 'L';
    CHECK(rows == 4);

    Json empty = j;
    empty["L_range"] = Json::array();
    Captured c3;
    CHECK(cmd_sweep(write_config(dir, empty, "empty.json"), c3.opts(dir)) == kExitConfig);
  }

  TEST_CASE("extract and validate a checkpoint") {
    const std::string dir = test::temp_dir("cli_extract");
    Captured c;
    REQUIRE(cmd_run(write_config(dir, small_config()), c.opts(dir + "/run")) == kExitOk);
    const std::string cp = dir + "/run/checkpoint.json";

    Captured e;
    REQUIRE(cmd_extract(cp, e.opts(dir + "/x")) == kExitOk);
    CHECK(slurp(dir + "/x/levelset.csv") == slurp(dir + "/run/levelset.csv"));
    Captured e2;
    CliOptions obj = e2.opts(dir + "/y");
    obj.format = "obj";
    CHECK(cmd_extract(cp, obj) == kExitConfig);

    Captured v;
    CHECK(cmd_validate(cp, v.opts(dir)) == kExitOk);
    CHECK(v.out.str().find("PASS") != std::string::npos);

    Json broken = read_json_file(cp);
    broken["cells"].erase(5);
    write_json_file(dir + "/broken.json", broken);
    Captured v2;
    CHECK(cmd_validate(dir + "/broken.json", v2.opts(dir)) == kExitValidation);
    CHECK(v2.out.str().find("FAIL") != std::string::npos);

    Json bad_record = read_json_file(cp);
    bad_record["cells"][7].erase("level");
    write_json_file(dir + "/bad_record.json", bad_record);
    Captured v3;
    CHECK(cmd_validate(dir + "/bad_record.json", v3.opts(dir)) != kExitOk);
    CHECK(v3.err.str().find("7") != std::string::npos);
  }

  TEST_CASE("three-dimensional runs default to obj") {
    const std::string dir = test::temp_dir("cli_obj");
    Json j = {{"function", {{"name", "sphere"}, {"center", {0, 0, 0}}, {"radius", 0.6}}},
              {"domain", {{"lower", {-1, -1, -1}}, {"upper", {1, 1, 1}}}},
              {"h0", 0.5},
              {"L", 2}};
    Captured c;
    REQUIRE(cmd_run(write_config(dir, j), c.opts(dir)) == kExitOk);
    const std::string obj = slurp(dir + "/levelset.obj");
    CHECK(obj.find("\nv ") != std::string::npos);
    CHECK(obj.find("\nf ") != std::string::npos);
  }

  TEST_CASE("resume through the command line matches a fresh run") {
    const std::string dir = test::temp_dir("cli_resume");
    Json j = small_config();
    const std::string cfg2 = write_config(dir, j, "l2.json");
    j["L"] = 3;
    const std::string cfg3 = write_config(dir, j, "l3.json");
    Captured a, b, c;
    REQUIRE(cmd_run(cfg2, a.opts(dir + "/l2")) == kExitOk);
    REQUIRE(cmd_run(cfg3, b.opts(dir + "/fresh")) == kExitOk);
    CliOptions ro = c.opts(dir + "/resumed");
    ro.resume = dir + "/l2/checkpoint.json";
    REQUIRE(cmd_run(cfg3, ro) == kExitOk);
    CHECK(slurp(dir + "/fresh/checkpoint.json") == slurp(dir + "/resumed/checkpoint.json"));
    CHECK(slurp(dir + "/fresh/levelset.csv") == slurp(dir + "/resumed/levelset.csv"));
    const Json seg = read_json_file(dir + "/resumed/ledger.json").at("segment");
    const Json full = read_json_file(dir + "/fresh/ledger.json");
    CHECK(seg.at("total_cost").get<double>() < full.at("total_cost").get<double>());

    j["seed"] = 5;
    const std::string other = write_config(dir, j, "other.json");
    Captured d;
    CliOptions bad = d.opts(dir + "/bad");
    bad.resume = dir + "/l2/checkpoint.json";
    CHECK(cmd_run(other, bad) == kExitConfig);
    CHECK(d.err.str().find("seed") != std::string::npos);
  }

  TEST_CASE("argument parsing") {
    const std::string dir = test::temp_dir("cli_args");
    const std::string cfg = write_config(dir, small_config());
    CHECK(main_with({"run", cfg, "-o", dir + "/out", "-j", "2", "--seed", "11"}) == kExitOk);
    CHECK(read_json_file(dir + "/out/run.json").at("seed") == 11);
    CHECK(main_with({"frobnicate"}) == kExitConfig);
    CHECK(main_with({"run"}) == kExitConfig);
    CHECK(main_with({"validate", dir + "/out/checkpoint.json"}) == kExitOk);
  }

  TEST_CASE("shipped example configurations parse") {
    int n = 0;
    for (const auto& entry : fs::directory_iterator(LSE_EXAMPLES_DIR)) {
      if (entry.path().extension() != ".json") continue;
      CAPTURE(entry.path().string());
      CHECK_NOTHROW(load_config(entry.path().string()));
      ++n;
    }
    CHECK(n >= 3);
  }
}
