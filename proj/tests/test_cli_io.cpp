#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/selftest.hpp"
#include "floquet/io/bands.hpp"
#include "floquet/io/cache.hpp"
#include "floquet/io/config.hpp"
#include "floquet/io/report.hpp"
#include "floquet/io/svg.hpp"
#include "floquet/synthetic.hpp"

using namespace floquet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::current_path() / "cli-scratch" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kConstantConfig = R"({
  "system": "constant",
  "constant": {"period": 1.0, "matrix": {"re": [[0.0, 0.3], [0.0, -0.2]], "im": [[1.0, 0.0], [0.1, 2.0]]}},
  "path": {"steps_per_segment": 16},
  "threads": 1
})";

BandTrack small_track() {
  return sweep_loop(synthetic_braid_system(), straight_loop(ParamPoint::Zero(1), ParamPoint::Constant(1, kTwoPi), 32));
}

}  // namespace

TEST_CASE("config round trip") {
  for (const char* which : {"weak", "strong", "static"}) {
    RunConfig c = demo_config(which);
    c.reference_alpha = Vec2(0.1, 0.2);
    c.path.waypoints = {Vec2(0.1, 0.0), Vec2(1.0, 0.5)};
    c.cache_dir = "some/cache";
    c.integrator.method = IntegrationMethod::DopAdaptive;
    c.tracking.strategy = MatchStrategy::NearestMultiplier;
    const std::string text = serialize_config(c);
    const RunConfig back = parse_config(text);
    CHECK(serialize_config(back) == text);
    CHECK(config_hash(back) == config_hash(c));
    CHECK(back.modulation.inv_kappa[1].cos_coeffs == c.modulation.inv_kappa[1].cos_coeffs);
    CHECK(back.modulation.inv_rho[4].value(0.2, 1.3) == c.modulation.inv_rho[4].value(0.2, 1.3));
  }
  CHECK(config_hash(demo_config("weak")) != config_hash(demo_config("strong")));
}

TEST_CASE("config errors") {
  auto code_of = [](const std::string& text) {
    try {
      validate_config(parse_config(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of(R"({"pathh": {}})") == ErrorCode::ConfigError);
  CHECK(code_of(R"({"path": {"step_per_segment": 100}})") == ErrorCode::ConfigError);
  CHECK(code_of(R"({"path": {"steps_per_segment": 8}})") == ErrorCode::ConfigError);
  CHECK(code_of(R"({"integrator": {"steps": 10}})") == ErrorCode::ConfigError);
  CHECK(code_of(R"({"tolerances": {"gap_flag": -1}})") == ErrorCode::ConfigError);
  CHECK(code_of(R"({"integrator": {"method": "euler"}})") == ErrorCode::ConfigError);
  CHECK(code_of(R"({"path": {"steps_per_segment": "many"}})") == ErrorCode::ConfigError);
  CHECK(code_of("{not json") == ErrorCode::ConfigError);
  CHECK_THROWS_AS(demo_config("medium"), Error);
  CHECK_NOTHROW(validate_config(parse_config("{}")));
}

TEST_CASE("band CSV") {
  const BandTrack t = small_track();
  const std::vector<BandRow> rows = band_rows(t);
  REQUIRE(rows.size() == t.bands() * t.samples());
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK((rows[i - 1].band < rows[i].band || (rows[i - 1].band == rows[i].band && rows[i - 1].s < rows[i].s)));
  const std::string csv = band_csv(rows);
  CHECK(csv.substr(0, csv.find('\n')) == kBandCsvHeader);
  const std::vector<BandRow> back = parse_band_csv(csv);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].band == rows[i].band);
    CHECK(back[i].s == rows[i].s);
    CHECK(back[i].mu == rows[i].mu);
    CHECK(back[i].lambda == rows[i].lambda);
    CHECK(back[i].min_gap_flag == rows[i].min_gap_flag);
    CHECK(back[i].braided == rows[i].braided);
  }
  // Bands 2 and 3 (±e^{iα/2}) form the braid cycle.
  CHECK(rows.front().braided == 0);
  CHECK(rows.back().braided == 1);
  CHECK_THROWS_AS(parse_band_csv("band,s\n"), Error);
  CHECK_THROWS_AS(parse_band_csv(std::string(kBandCsvHeader) + "\n0,1,2\n"), Error);
}

TEST_CASE("SVG output") {
  const BandTrack t = small_track();
  const ParameterLoop loop = straight_loop(ParamPoint::Zero(1), ParamPoint::Constant(1, kTwoPi), 32);
  SvgOptions opts;
  opts.real_part = true;
  const std::string svg = band_svg(t, loop, opts);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(band_svg(t, loop, opts) == svg);
}

TEST_CASE("report formatting") {
  CHECK(cycle_notation(braid_invariant(std::vector<int>{1, 0, 2})) == "(1 2)(3)");
  const BandTrack t = small_track();
  const InvariantReport r = assemble_report(t, TypeIIbResult{}, ParamPoint::Zero(1), 1, {{"samples", "33"}});
  const std::string json = report_json(r);
  CHECK(json.find("\"order\": 2") != std::string::npos);
  CHECK(report_text(r).find("order 2") != std::string::npos);
  CHECK(report_json(r) == json);
}

TEST_CASE("capacitance cache files") {
  const fs::path dir = scratch("cache-unit");
  const ResonatorLattice lat = build_geometry();
  const CapacitanceOptions opts;
  const Vec2 alpha(0.7, 0.35);
  CapacitanceCache cache(lat, opts, dir.string());
  const CapacitanceMatrix c = cache.get(alpha);
  CHECK(fs::is_empty(dir));
  CHECK(cache.flush() == 1);
  const fs::path file = dir / capacitance_cache_name(cache.hash(), alpha, opts);
  REQUIRE(fs::exists(file));
  const std::optional<CapacitanceMatrix> back = load_cached_capacitance(dir.string(), cache.hash(), alpha, opts);
  REQUIRE(back);
  CHECK(back->C == c.C);

  CapacitanceCache again(lat, opts, dir.string());
  CHECK(again.get(alpha).C == c.C);
  CHECK(again.hits() == 1);
  CHECK(again.misses() == 0);

  CHECK(!load_cached_capacitance(dir.string(), "0000000000000000", alpha, opts));
  CHECK_THROWS_AS(capacitance_from_json("{\"alpha\": [0, 0]}"), Error);
}

TEST_CASE("selftest") {
  const auto clean = cli::run_selftest({});
  for (const auto& c : clean) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
  std::ostringstream sink;
  CHECK(cli::print_selftest(clean, sink) == 0);

  cli::SelftestOptions fault;
  fault.inject_branch_fault = true;
  bool caught = false;
  for (const auto& c : cli::run_selftest(fault))
    if (c.name == "type-IIb-liouville") caught = !c.passed && c.detail.find("OracleMismatch") != std::string::npos;
  CHECK(caught);

  cli::SelftestOptions coarse;
  coarse.reduced_precision = true;
  int failed = 0;
  for (const auto& c : cli::run_selftest(coarse)) failed += c.passed ? 0 : 1;
  CHECK(failed > 0);

  CHECK(run_cli({"selftest"}).code == 0);
  CHECK(run_cli({"selftest", "--inject-fault"}).code != 0);
}

TEST_CASE("command line: constant system") {
  const fs::path dir = scratch("constant");
  {
    std::ofstream(dir / "config.json") << kConstantConfig;
  }
  const std::string cfg = (dir / "config.json").string();
  const Run bands = run_cli({"bands", "--config", cfg, "--out", (dir / "a").string()});
  REQUIRE_MESSAGE(bands.code == 0, bands.err);
  const std::string csv = slurp(dir / "a" / "bands.csv");
  for (const BandRow& r : parse_band_csv(csv)) CHECK(r.braided == 0);
  // Every band is a constant line.
  const std::vector<BandRow> rows = parse_band_csv(csv);
  for (const BandRow& r : rows) CHECK(std::abs(r.lambda - rows[r.band * (rows.size() / 2)].lambda) < 1e-12);
  CHECK(fs::exists(dir / "a" / "bands.svg"));

  // Byte determinism, also across thread counts.
  const Run again = run_cli({"bands", "--config", cfg, "--out", (dir / "b").string(), "--threads", "3"});
  REQUIRE(again.code == 0);
  CHECK(slurp(dir / "b" / "bands.csv") == csv);
  CHECK(slurp(dir / "b" / "bands.svg") == slurp(dir / "a" / "bands.svg"));

  const Run json = run_cli({"bands", "--config", cfg, "--out", (dir / "c").string(), "--format", "json"});
  REQUIRE(json.code == 0);
  CHECK(fs::exists(dir / "c" / "bands.json"));

  const Run inv = run_cli({"invariants", "--config", cfg, "--out", (dir / "d").string()});
  REQUIRE_MESSAGE(inv.code == 0, inv.err);
  CHECK(inv.out.find("order 1") != std::string::npos);
  const Run inv2 = run_cli({"invariants", "--config", cfg, "--out", (dir / "e").string()});
  CHECK(slurp(dir / "d" / "report.json") == slurp(dir / "e" / "report.json"));
  CHECK(slurp(dir / "d" / "report.txt") == slurp(dir / "e" / "report.txt"));
}

TEST_CASE("command line: errors and exit codes") {
  const fs::path dir = scratch("errors");
  {
    std::ofstream(dir / "bad.json") << R"({"path": {"stepz": 3}})";
  }
  const Run bad = run_cli({"bands", "--config", (dir / "bad.json").string()});
  CHECK(bad.code == cli::kExitConfig);
  CHECK(bad.err.find("ConfigError") != std::string::npos);
  CHECK(run_cli({"bands", "--config", (dir / "missing.json").string()}).code == cli::kExitConfig);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitConfig);
  CHECK(run_cli({"bands", "--format", "xml"}).code == cli::kExitConfig);
  CHECK(run_cli({"--help"}).code == 0);

  CHECK(cli::exit_code(ErrorCode::DegeneracyUnresolved) == cli::kExitDegeneracy);
  CHECK(cli::exit_code(ErrorCode::NotConverged) == cli::kExitNumerical);
  CHECK(cli::exit_code(ErrorCode::OracleMismatch) == cli::kExitNumerical);
  CHECK(cli::exit_code(ErrorCode::ConfigError) == cli::kExitConfig);
}

TEST_CASE("command line: capacitance") {
  const fs::path dir = scratch("capacitance");
  const std::string cache = (dir / "cache").string();
  const Run first = run_cli({"capacitance", "--alpha", "M", "--cache", cache});
  REQUIRE_MESSAGE(first.code == 0, first.err);
  CHECK(first.out.find("cache miss") != std::string::npos);
  CHECK(first.out.find("hermiticity residual") != std::string::npos);
  REQUIRE(std::distance(fs::directory_iterator(cache), fs::directory_iterator()) == 1);
  const fs::path file = fs::directory_iterator(cache)->path();
  const std::string bytes = slurp(file);
  const CapacitanceMatrix c = read_capacitance_file(file.string());
  CHECK(c.hermiticity_residual <= 1e-8);
  CHECK(c.convergence_delta <= 1e-6);

  const Run second = run_cli({"capacitance", "--alpha", "M", "--cache", cache});
  REQUIRE(second.code == 0);
  CHECK(second.out.find("cache hit") != std::string::npos);
  CHECK(slurp(file) == bytes);

  const Run coarse = run_cli({"capacitance", "--alpha", "0.5,1.0", "--cutoff", "2", "--cache", cache});
  CHECK(coarse.code == cli::kExitNumerical);
  CHECK(coarse.err.find("NotConverged") != std::string::npos);

  const Run singular = run_cli({"capacitance", "--alpha", "G", "--cache", cache});
  CHECK(singular.code == cli::kExitNumerical);
  CHECK(singular.err.find("SingularAlpha") != std::string::npos);
  CHECK(run_cli({"capacitance", "--alpha", "1.0"}).code == cli::kExitConfig);
}
