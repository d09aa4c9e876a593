#include "cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "cli/selftest.hpp"
#include "floquet/io/bands.hpp"
#include "floquet/io/cache.hpp"
#include "floquet/io/report.hpp"
#include "floquet/io/svg.hpp"
#include "floquet/pipeline.hpp"

namespace floquet::cli {

namespace fs = std::filesystem;

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

std::string bands_json(const std::vector<BandRow>& rows) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const BandRow& r : rows)
    j.push_back({{"band", r.band},
                 {"s", r.s},
                 {"mu", {r.mu.real(), r.mu.imag()}},
                 {"lambda", {r.lambda.real(), r.lambda.imag()}},
                 {"min_gap_flag", r.min_gap_flag},
                 {"braided", r.braided}});
  return j.dump(1) + "\n";
}

Vec2 parse_alpha(const std::string& text, const ResonatorLattice& lat) {
  if (text == "K" || text == "M" || text == "G") {
    const SymmetryPoints p = symmetry_points(lat);
    return text == "K" ? p.K : text == "M" ? p.M : p.gamma;
  }
  const auto comma = text.find(',');
  if (comma == std::string::npos) fail(ErrorCode::ConfigError, "alpha must be 'x,y' or one of G, K, M");
  auto num = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || !std::isfinite(v)) fail(ErrorCode::ConfigError, "bad alpha component '" + s + "'");
    return v;
  };
  return {num(text.substr(0, comma)), num(text.substr(comma + 1))};
}

void summarize_track(const BandTrack& track, std::ostream& out) {
  out << "bands " << track.bands() << ", samples " << track.samples() << ", refinements "
      << track.refinement_log.size() << ", min overlap^2 " << sci(track.min_overlap2) << ", min gap "
      << sci(track.min_gap) << '\n';
}

}  // namespace

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::OverlappingResonators:
    case ErrorCode::IoError:
      return kExitConfig;
    case ErrorCode::DegeneracyUnresolved:
      return kExitDegeneracy;
    default:
      return kExitNumerical;
  }
}

RunConfig resolve_config(const CommonFlags& flags) {
  RunConfig config = flags.config_path.empty() ? RunConfig{} : load_config(flags.config_path);
  if (!flags.out_dir.empty()) config.output_dir = flags.out_dir;
  if (!flags.cache_dir.empty()) config.cache_dir = flags.cache_dir;
  if (flags.steps) config.path.steps_per_segment = *flags.steps;
  if (flags.time_steps) config.integrator.steps = *flags.time_steps;
  if (flags.threads) config.threads = *flags.threads;
  if (flags.format != "csv" && flags.format != "json")
    fail(ErrorCode::ConfigError, "--format must be csv or json");
  validate_config(config);
  return config;
}

int cmd_bands(const RunConfig& config, const CommonFlags& flags, std::ostream& out) {
  const Pipeline pipeline(config);
  const BandTrack track = pipeline.sweep();
  const std::vector<BandRow> rows = band_rows(track, config.gap_flag);
  const fs::path dir(config.output_dir);
  const fs::path table = dir / (flags.format == "json" ? "bands.json" : "bands.csv");
  write_file(table, flags.format == "json" ? bands_json(rows) : band_csv(rows));
  SvgOptions svg;
  svg.real_part = flags.real_part;
  write_file(dir / "bands.svg", band_svg(track, pipeline.loop(), svg));
  summarize_track(track, out);
  out << "braid " << cycle_notation(braid_invariant(track)) << '\n';
  out << "wrote " << table.string() << " and " << (dir / "bands.svg").string() << '\n';
  return kExitOk;
}

int cmd_invariants(const RunConfig& config, const CommonFlags& flags, std::ostream& out) {
  const Pipeline pipeline(config);
  const BandTrack track = pipeline.sweep();
  const InvariantReport report = pipeline.invariants(track);
  const fs::path dir(config.output_dir);
  write_file(dir / "report.json", report_json(report));
  write_file(dir / "report.txt", report_text(report));
  out << (flags.format == "json" ? report_json(report) : report_text(report));
  return kExitOk;
}

int cmd_capacitance(const RunConfig& config, const CapacitanceRequest& request, std::ostream& out) {
  const ResonatorLattice lat = build_geometry(config.geometry);
  CapacitanceOptions options = config.capacitance;
  if (request.quad_points) options.quad_points = *request.quad_points;
  if (request.cutoff) options.cutoff = *request.cutoff;
  if (options.quad_points < 4 || !(options.cutoff > 0.0))
    fail(ErrorCode::ConfigError, "quad points must be >= 4 and the cutoff positive");
  if (!(options.convergence_tol > 0.0)) options.convergence_tol = 1e-6;
  const Vec2 alpha = parse_alpha(request.alpha, lat);
  const std::string dir =
      config.cache_dir.empty() ? (fs::path(config.output_dir) / "cache").string() : config.cache_dir;
  const std::string hash = geometry_hash(lat);

  std::optional<CapacitanceMatrix> c = load_cached_capacitance(dir, hash, alpha, options);
  const bool hit = c.has_value();
  if (!hit) c = capacitance_matrix(lat, alpha, options);
  const std::string path = (fs::path(dir) / capacitance_cache_name(hash, alpha, options)).string();
  if (!hit) save_cached_capacitance(dir, hash, *c, options);

  const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<CMatrix>(0.5 * (c->C + c->C.adjoint())).eigenvalues();
  out << "alpha " << sci(alpha.x()) << ' ' << sci(alpha.y()) << '\n';
  out << "cache " << (hit ? "hit" : "miss") << ' ' << path << '\n';
  out << "size " << c->C.rows() << ", quad points " << c->quad_points << ", cutoff " << sci(c->lattice_sum_cutoff)
      << '\n';
  out << "hermiticity residual " << sci(c->hermiticity_residual) << '\n';
  out << "eigenvalues [" << sci(eig.minCoeff()) << ", " << sci(eig.maxCoeff()) << "]\n";
  out << "convergence delta " << sci(c->convergence_delta) << '\n';
  return kExitOk;
}

int cmd_demo(const std::string& which, const CommonFlags& flags, std::ostream& out) {
  RunConfig config = demo_config(which);
  CommonFlags f = flags;
  f.config_path.clear();
  if (!f.out_dir.empty()) config.output_dir = f.out_dir;
  if (!f.cache_dir.empty()) config.cache_dir = f.cache_dir;
  if (f.steps) config.path.steps_per_segment = *f.steps;
  if (f.time_steps) config.integrator.steps = *f.time_steps;
  if (f.threads) config.threads = *f.threads;
  validate_config(config);
  write_file(fs::path(config.output_dir) / "config.json", serialize_config(config));

  const Pipeline pipeline(config);
  const BandTrack track = pipeline.sweep();
  const InvariantReport report = pipeline.invariants(track);
  const fs::path dir(config.output_dir);
  const std::vector<BandRow> rows = band_rows(track, config.gap_flag);
  write_file(dir / (f.format == "json" ? "bands.json" : "bands.csv"),
             f.format == "json" ? bands_json(rows) : band_csv(rows));
  SvgOptions svg;
  svg.real_part = f.real_part;
  svg.title = "Floquet exponents, " + which + " modulation";
  write_file(dir / "bands.svg", band_svg(track, pipeline.loop(), svg));
  write_file(dir / "report.json", report_json(report));
  write_file(dir / "report.txt", report_text(report));
  summarize_track(track, out);
  out << report_text(report);
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Floquet normal forms and topological invariants of parameterized periodic ODEs", "floquet"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  CommonFlags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "Run configuration (JSON)");
    sub->add_option("--out", flags.out_dir, "Output directory");
    sub->add_option("--cache", flags.cache_dir, "Capacitance cache directory");
    sub->add_option("--steps", flags.steps, "Path steps per segment")->check(CLI::PositiveNumber);
    sub->add_option("--time-steps", flags.time_steps, "Integrator steps per period")->check(CLI::PositiveNumber);
    sub->add_option("--threads", flags.threads, "Worker threads (0 = hardware)");
    sub->add_option("--format", flags.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--real-part", flags.real_part, "Add a Re(mu) panel to the SVG");
  };

  CLI::App* bands = app.add_subcommand("bands", "Band structure along the loop (CSV/JSON + SVG)");
  add_common(bands);
  CLI::App* inv = app.add_subcommand("invariants", "Topological invariant report");
  add_common(inv);
  CLI::App* cap = app.add_subcommand("capacitance", "Capacitance matrix at one quasi-momentum");
  add_common(cap);
  CapacitanceRequest request;
  cap->add_option("--alpha", request.alpha, "Quasi-momentum 'x,y' or G, K, M")->required();
  cap->add_option("--quad", request.quad_points, "Boundary nodes per disk");
  cap->add_option("--cutoff", request.cutoff, "Spectral cutoff radius");
  CLI::App* self = app.add_subcommand("selftest", "Analytic oracle checks");
  SelftestOptions st;
  self->add_flag("--inject-fault", st.inject_branch_fault, "Corrupt one log branch of F (fixture)");
  self->add_flag("--reduced-precision", st.reduced_precision, "Integrate with 16 steps per period");
  CLI::App* demo = app.add_subcommand("demo", "Write and run a demo configuration");
  add_common(demo);
  std::string which;
  demo->add_option("which", which, "weak, strong or static")
      ->required()
      ->check(CLI::IsMember({"weak", "strong", "static"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*self) return print_selftest(run_selftest(st), out);
    if (*demo) return cmd_demo(which, flags, out);
    const RunConfig config = resolve_config(flags);
    if (*bands) return cmd_bands(config, flags, out);
    if (*inv) return cmd_invariants(config, flags, out);
    return cmd_capacitance(config, request, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace floquet::cli
