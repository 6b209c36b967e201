#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "greenlab/io.hpp"

using namespace greenlab;
namespace fs = std::filesystem;

namespace {

const char* kIntervalConfig = R"(# test config
[process]
d = 1
alpha = 1.2
a = 1.0

[domain]
kind = interval
lo = -1
hi = 1

[grid]
points = 3
n_paths = 2000
seed = 42
x = -0.5
y = 0.4
z = 1

[scheme]
base_step = 2e-3

[tolerances]
band_stability = 0.2
)";

std::string cli_path() {
  if (const char* env = std::getenv("GREENLAB_BIN")) return env;
  return "../tools/greenlab";
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
  const int rc = std::system((cli_path() + " " + args).c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("format_double round-trips with shortest representation") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.1) == "-0.1");
  for (double v : {0.1, 1.0 / 3.0, 2.5e-17, -1234.5678, 7e300}) {
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK_THROWS_AS(parse_double("12x"), config_error);
  CHECK_THROWS_AS(parse_double(""), config_error);
}

TEST_CASE("config parsing: sections, comments, errors") {
  const ConfigFile cfg = parse_config_text(kIntervalConfig);
  CHECK(cfg.get("process", "alpha") == "1.2");
  CHECK(cfg.get_num("grid", "n_paths") == 2000);
  CHECK(cfg.get_or("process", "variant", "plain") == "plain");
  CHECK(cfg.get_num_or("scheme", "missing", 9.0) == 9.0);
  CHECK_THROWS_AS(cfg.get("process", "nope"), config_error);
  CHECK_THROWS_AS(parse_config_text("key = 1\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("[sec\nkey = 1\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("[sec]\nnovalue\n"), config_error);
}

TEST_CASE("canonical text normalizes floats and sorts keys") {
  const ConfigFile a = parse_config_text("[s]\nb = 0.50\na = 1e0 text\n");
  const ConfigFile b = parse_config_text("[s]\na = 1.0 text\nb = .5\n");
  CHECK(canonical_config_text(a) == canonical_config_text(b));
  CHECK(fnv1a_hex(canonical_config_text(a)) ==
        fnv1a_hex(canonical_config_text(b)));
  const ConfigFile c = parse_config_text("[s]\na = 2 text\nb = .5\n");
  CHECK(fnv1a_hex(canonical_config_text(a)) !=
        fnv1a_hex(canonical_config_text(c)));
  CHECK(fnv1a_hex("").size() == 16);
}

TEST_CASE("domain and process construction from config") {
  const ConfigFile cfg = parse_config_text(kIntervalConfig);
  const Domain d = domain_from_config(cfg);
  CHECK(d.dim() == 1);
  CHECK(d.intervals().size() == 1);
  const ProcessSpec spec = process_from_config(cfg);
  CHECK(spec.alpha == 1.2);
  CHECK(spec.variant == Variant::plain);

  const ConfigFile two = parse_config_text(
      "[domain]\nkind = interval_union\nintervals = -2 -1 ; 1 2\n");
  CHECK(domain_from_config(two).intervals().size() == 2);

  const ConfigFile ball = parse_config_text(
      "[domain]\nkind = ball\ncenter = 0 0\nradius = 1\n");
  CHECK(domain_from_config(ball).kind() == DomainKind::ball);

  const ConfigFile bu = parse_config_text(
      "[domain]\nkind = ball_union\nballs = 0 0 0 1 ; 3 0 0 1\n");
  CHECK(domain_from_config(bu).balls().size() == 2);

  const ConfigFile ann = parse_config_text(
      "[domain]\nkind = annulus\ncenter = 0 0\nr_in = 0.3\nr_out = 1\n");
  CHECK(domain_from_config(ann).kind() == DomainKind::annulus);

  CHECK_THROWS_AS(
      domain_from_config(parse_config_text("[domain]\nkind = cube\n")),
      config_error);
  CHECK_THROWS_AS(
      process_from_config(parse_config_text(
          "[process]\nd = 1\nalpha = 1.2\na = 1\nvariant = odd\n")),
      config_error);
}

TEST_CASE("experiment config assembly and dimension mismatch") {
  const ExperimentConfig ex =
      experiment_from_config(parse_config_text(kIntervalConfig));
  CHECK(ex.n_paths == 2000);
  CHECK(ex.seed == 42);
  CHECK(ex.x[0] == -0.5);
  CHECK(ex.y[0] == 0.4);
  CHECK(ex.scheme.base_step == 2e-3);
  CHECK(ex.tol("band_stability", 0.0) == 0.2);

  std::string bad(kIntervalConfig);
  bad.replace(bad.find("d = 1"), 5, "d = 2");
  CHECK_THROWS_AS(experiment_from_config(parse_config_text(bad)),
                  config_error);
}

TEST_CASE("csv serialization round-trips") {
  CsvTable t;
  t.header = {"x", "y", "g"};
  t.rows.push_back({format_double(0.1), format_double(-2.0 / 3.0), "d1"});
  const std::string text = t.serialize();
  const CsvTable back = CsvTable::parse(text);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(parse_double(back.rows[0][1]) == -2.0 / 3.0);
  CHECK_THROWS_AS(CsvTable::parse("a,b\n1,2,3\n"), config_error);
}

TEST_CASE("svg scatter emits well-formed markup") {
  const std::string svg =
      svg_scatter({0.0, 1.0, 2.0}, {1.0, 4.0, 9.0}, "demo", 1.0, 5.0);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("<rect") != std::string::npos);
  CHECK(svg.find("demo") != std::string::npos);
}

TEST_CASE("cli: special evaluations and exit codes") {
  CHECK(run_cli("special ml --beta 1 --t 2 > /dev/null") == 0);
  CHECK(run_cli("special chi --a 0 --lam 7 > /dev/null") == 0);
  CHECK(run_cli("special nosuch > /dev/null 2>&1") == 2);
  CHECK(run_cli("2>/dev/null") == 2);  // missing subcommand
}

TEST_CASE("cli: bounds emits schema CSV and manifest") {
  TempDir tmp("greenlab_cli_bounds");
  const fs::path cfg = tmp.path / "cfg.ini";
  write_file(cfg.string(), kIntervalConfig);
  CHECK(run_cli("bounds --config " + cfg.string() + " --out " +
                (tmp.path / "out").string()) == 0);
  const CsvTable table =
      CsvTable::parse(read_file(tmp.path / "out" / "bounds.csv"));
  CHECK(table.header == std::vector<std::string>{"x1", "x2", "y1", "y2", "g",
                                                 "branch", "same_component"});
  CHECK(table.rows.size() == 6);  // 3x3 grid minus coincident diagonal
  for (const auto& row : table.rows) {
    CHECK(parse_double(row[4]) > 0.0);
    CHECK(row[5] == "d1");
    CHECK(row[6] == "1");
  }
  const std::string manifest = read_file(tmp.path / "out" / "manifest.json");
  CHECK(manifest.find("\"skipped_coincident_pairs\": 3") != std::string::npos);
  CHECK(manifest.find("config_hash") != std::string::npos);

  CHECK(run_cli("bounds --config " + (tmp.path / "absent.ini").string() +
                " --out " + tmp.path.string() + " 2>/dev/null") == 2);
}

TEST_CASE("cli: verify passes, is deterministic, and rejects bad input") {
  TempDir tmp("greenlab_cli_verify");
  const fs::path cfg = tmp.path / "cfg.ini";
  write_file(cfg.string(), kIntervalConfig);
  const std::string out1 = (tmp.path / "r1").string();
  const std::string out2 = (tmp.path / "r2").string();
  CHECK(run_cli("verify theorem1 --config " + cfg.string() + " --out " + out1) ==
        0);
  CHECK(run_cli("verify theorem1 --config " + cfg.string() + " --out " + out2 +
                " --workers 3") == 0);
  CHECK(read_file(fs::path(out1) / "report.json") ==
        read_file(fs::path(out2) / "report.json"));
  CHECK(read_file(fs::path(out1) / "details.csv") ==
        read_file(fs::path(out2) / "details.csv"));
  CHECK(fs::exists(fs::path(out1) / "ratios.svg"));

  CHECK(run_cli("verify martin --config " + cfg.string() + " --out " +
                (tmp.path / "m").string()) == 0);
  CHECK(run_cli("verify capacity --config " + cfg.string() + " --out " +
                (tmp.path / "c").string()) == 0);
  CHECK(run_cli("verify exit_time --config " + cfg.string() + " --out " +
                (tmp.path / "e").string()) == 0);
  CHECK(run_cli("verify nosuch --config " + cfg.string() + " --out " +
                (tmp.path / "x").string() + " 2>/dev/null") == 2);

  // truncated variant whose cutoff cannot bridge the inter-component gap
  const char* bad = R"([process]
d = 1
alpha = 1.2
a = 1.0
variant = truncated
trunc_lambda = 0.5

[domain]
kind = interval_union
intervals = -2 -1 ; 1 2

[grid]
points = 2
n_paths = 1000
seed = 1
)";
  const fs::path badcfg = tmp.path / "bad.ini";
  write_file(badcfg.string(), bad);
  CHECK(run_cli("verify perturbation --config " + badcfg.string() + " --out " +
                (tmp.path / "p").string() + " 2>/dev/null") == 2);
}

TEST_CASE("cli: verify report json re-parses with schema fields") {
  TempDir tmp("greenlab_cli_json");
  const fs::path cfg = tmp.path / "cfg.ini";
  write_file(cfg.string(), kIntervalConfig);
  const std::string out = (tmp.path / "r").string();
  REQUIRE(run_cli("verify theorem1 --config " + cfg.string() + " --out " + out) ==
          0);
  const std::string text = read_file(fs::path(out) / "report.json");
  for (const char* key :
       {"\"theorem\"", "\"pass\"", "\"band\"", "\"details_path\"",
        "\"manifest\"", "\"config_hash\""})
    CHECK(text.find(key) != std::string::npos);
  CHECK(text.find("timestamp") == std::string::npos);
  // detail CSV re-parses into pair records
  const CsvTable det = CsvTable::parse(read_file(fs::path(out) / "details.csv"));
  CHECK(det.header.size() == 8);
  for (const auto& row : det.rows) {
    CHECK(parse_double(row[4]) > 0.0);  // estimate
    CHECK(parse_double(row[7]) > 0.0);  // ratio
  }
}

TEST_CASE("cli: simulate writes exit statistics") {
  TempDir tmp("greenlab_cli_sim");
  const fs::path cfg = tmp.path / "cfg.ini";
  write_file(cfg.string(), kIntervalConfig);
  const std::string out = (tmp.path / "s").string();
  CHECK(run_cli("simulate --config " + cfg.string() + " --out " + out) == 0);
  const std::string text = read_file(fs::path(out) / "simulate.json");
  CHECK(text.find("exit_time") != std::string::npos);
  CHECK(text.find("jumped_out") != std::string::npos);
}
