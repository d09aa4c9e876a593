#include "floquet/io/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace floquet {

using nlohmann::ordered_json;

namespace {

void expect_keys(const ordered_json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) fail(ErrorCode::ConfigError, where + " must be an object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) fail(ErrorCode::ConfigError, "unknown key '" + item.key() + "' in " + where);
}

template <typename T>
void read(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ordered_json vec2_json(const Vec2& v) { return ordered_json::array({v.x(), v.y()}); }

Vec2 vec2_from(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(ErrorCode::ConfigError, where + " must be a 2-element array");
  return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json trig_json(const TrigPolynomial& p) {
  return {{"constant", p.constant}, {"cos", p.cos_coeffs}, {"sin", p.sin_coeffs}};
}

TrigPolynomial trig_from(const ordered_json& j, const std::string& where) {
  expect_keys(j, {"constant", "cos", "sin"}, where);
  TrigPolynomial p;
  p.cos_coeffs.clear();
  read(j, "constant", p.constant);
  read(j, "cos", p.cos_coeffs);
  read(j, "sin", p.sin_coeffs);
  return p;
}

ordered_json matrix_json(const CMatrix& m) {
  ordered_json re = ordered_json::array(), im = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json rr = ordered_json::array(), ii = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

CMatrix matrix_from(const ordered_json& j, const std::string& where) {
  expect_keys(j, {"re", "im"}, where);
  const auto& re = j.at("re");
  const std::size_t n = re.size();
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (re[r].size() != n) fail(ErrorCode::ConfigError, where + " must be square");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = re[r][c].get<double>();
  }
  if (j.contains("im")) {
    const auto& im = j.at("im");
    if (im.size() != n) fail(ErrorCode::ConfigError, where + ".im has the wrong size");
    for (std::size_t r = 0; r < n; ++r) {
      if (im[r].size() != n) fail(ErrorCode::ConfigError, where + ".im must be square");
      for (std::size_t c = 0; c < n; ++c) m(r, c) += cplx(0.0, im[r][c].get<double>());
    }
  }
  return m;
}

std::string method_name(IntegrationMethod m) { return m == IntegrationMethod::Rk4Fixed ? "rk4" : "dopri"; }
std::string strategy_name(MatchStrategy s) { return s == MatchStrategy::EigenvectorOverlap ? "overlap" : "nearest"; }

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["system"] = c.system;
  {
    ordered_json g;
    g["lattice"] = {vec2_json(c.geometry.lattice.col(0)), vec2_json(c.geometry.lattice.col(1))};
    g["radius"] = c.geometry.radius;
    g["trimer_spread"] = c.geometry.trimer_spread;
    ordered_json disks = ordered_json::array();
    for (const Disk& d : c.geometry.custom) disks.push_back({{"center", vec2_json(d.center)}, {"radius", d.radius}});
    g["disks"] = disks;
    j["geometry"] = g;
  }
  {
    ordered_json m;
    m["omega"] = c.modulation.omega;
    m["delta"] = c.modulation.delta;
    m["unit_rho_at_zero"] = c.modulation.unit_rho_at_zero;
    ordered_json res = ordered_json::array();
    for (std::size_t n = 0; n < c.modulation.size(); ++n)
      res.push_back({{"inv_kappa", trig_json(c.modulation.inv_kappa[n])}, {"inv_rho", trig_json(c.modulation.inv_rho[n])}});
    m["resonators"] = res;
    j["modulation"] = m;
  }
  j["constant"] = {{"period", c.constant_period}, {"matrix", matrix_json(c.constant_matrix)}};
  {
    ordered_json p;
    p["steps_per_segment"] = c.path.steps_per_segment;
    p["gamma_offset"] = c.path.gamma_offset;
    p["k_offset"] = c.path.k_offset;
    ordered_json w = ordered_json::array();
    for (const Vec2& v : c.path.waypoints) w.push_back(vec2_json(v));
    p["waypoints"] = w;
    j["path"] = p;
  }
  j["integrator"] = {{"method", method_name(c.integrator.method)},
                     {"steps", c.integrator.steps},
                     {"rel_tol", c.integrator.rel_tol},
                     {"abs_tol", c.integrator.abs_tol},
                     {"max_steps", c.integrator.max_steps}};
  j["capacitance"] = {{"quad_points", c.capacitance.quad_points},
                      {"cutoff", c.capacitance.cutoff},
                      {"ewald_eta", c.capacitance.ewald_eta},
                      {"convergence_tol", c.capacitance.convergence_tol}};
  j["tracking"] = {{"strategy", strategy_name(c.tracking.strategy)},
                   {"accept_overlap2", c.tracking.accept_overlap2},
                   {"min_step_fraction", c.tracking.min_step_fraction}};
  j["tolerances"] = {{"cond_limit", c.cond_limit}, {"gap_flag", c.gap_flag}};
  j["reference_alpha"] = c.reference_alpha ? vec2_json(*c.reference_alpha) : ordered_json(nullptr);
  j["output_dir"] = c.output_dir;
  j["cache_dir"] = c.cache_dir;
  j["threads"] = c.threads;
  return j;
}

RunConfig from_json(const ordered_json& j) {
  expect_keys(j, {"system", "geometry", "modulation", "constant", "path", "integrator", "capacitance", "tracking",
                  "tolerances", "reference_alpha", "output_dir", "cache_dir", "threads"},
              "config");
  RunConfig c;
  read(j, "system", c.system);
  if (j.contains("geometry")) {
    const auto& g = j.at("geometry");
    expect_keys(g, {"lattice", "radius", "trimer_spread", "disks"}, "geometry");
    if (g.contains("lattice")) {
      const auto& l = g.at("lattice");
      if (!l.is_array() || l.size() != 2) fail(ErrorCode::ConfigError, "geometry.lattice must hold two vectors");
      c.geometry.lattice.col(0) = vec2_from(l[0], "geometry.lattice[0]");
      c.geometry.lattice.col(1) = vec2_from(l[1], "geometry.lattice[1]");
    }
    read(g, "radius", c.geometry.radius);
    read(g, "trimer_spread", c.geometry.trimer_spread);
    if (g.contains("disks")) {
      for (const auto& d : g.at("disks")) {
        expect_keys(d, {"center", "radius"}, "geometry.disks[]");
        c.geometry.custom.push_back({vec2_from(d.at("center"), "disk center"), d.at("radius").get<double>()});
      }
    }
  }
  if (j.contains("modulation")) {
    const auto& m = j.at("modulation");
    expect_keys(m, {"omega", "delta", "unit_rho_at_zero", "resonators"}, "modulation");
    read(m, "omega", c.modulation.omega);
    read(m, "delta", c.modulation.delta);
    read(m, "unit_rho_at_zero", c.modulation.unit_rho_at_zero);
    if (m.contains("resonators")) {
      c.modulation.inv_kappa.clear();
      c.modulation.inv_rho.clear();
      for (const auto& r : m.at("resonators")) {
        expect_keys(r, {"inv_kappa", "inv_rho"}, "modulation.resonators[]");
        c.modulation.inv_kappa.push_back(r.contains("inv_kappa") ? trig_from(r.at("inv_kappa"), "inv_kappa")
                                                                 : TrigPolynomial{});
        c.modulation.inv_rho.push_back(r.contains("inv_rho") ? trig_from(r.at("inv_rho"), "inv_rho") : TrigPolynomial{});
      }
    }
  }
  if (j.contains("constant")) {
    const auto& k = j.at("constant");
    expect_keys(k, {"period", "matrix"}, "constant");
    read(k, "period", c.constant_period);
    if (k.contains("matrix")) c.constant_matrix = matrix_from(k.at("matrix"), "constant.matrix");
  }
  if (j.contains("path")) {
    const auto& p = j.at("path");
    expect_keys(p, {"steps_per_segment", "gamma_offset", "k_offset", "waypoints"}, "path");
    read(p, "steps_per_segment", c.path.steps_per_segment);
    read(p, "gamma_offset", c.path.gamma_offset);
    read(p, "k_offset", c.path.k_offset);
    if (p.contains("waypoints"))
      for (const auto& w : p.at("waypoints")) c.path.waypoints.push_back(vec2_from(w, "path.waypoints[]"));
  }
  if (j.contains("integrator")) {
    const auto& i = j.at("integrator");
    expect_keys(i, {"method", "steps", "rel_tol", "abs_tol", "max_steps"}, "integrator");
    std::string method = method_name(c.integrator.method);
    read(i, "method", method);
    if (method == "rk4")
      c.integrator.method = IntegrationMethod::Rk4Fixed;
    else if (method == "dopri")
      c.integrator.method = IntegrationMethod::DopAdaptive;
    else
      fail(ErrorCode::ConfigError, "integrator.method must be 'rk4' or 'dopri'");
    read(i, "steps", c.integrator.steps);
    read(i, "rel_tol", c.integrator.rel_tol);
    read(i, "abs_tol", c.integrator.abs_tol);
    read(i, "max_steps", c.integrator.max_steps);
  }
  if (j.contains("capacitance")) {
    const auto& k = j.at("capacitance");
    expect_keys(k, {"quad_points", "cutoff", "ewald_eta", "convergence_tol"}, "capacitance");
    read(k, "quad_points", c.capacitance.quad_points);
    read(k, "cutoff", c.capacitance.cutoff);
    read(k, "ewald_eta", c.capacitance.ewald_eta);
    read(k, "convergence_tol", c.capacitance.convergence_tol);
  }
  if (j.contains("tracking")) {
    const auto& t = j.at("tracking");
    expect_keys(t, {"strategy", "accept_overlap2", "min_step_fraction"}, "tracking");
    std::string strategy = strategy_name(c.tracking.strategy);
    read(t, "strategy", strategy);
    if (strategy == "overlap")
      c.tracking.strategy = MatchStrategy::EigenvectorOverlap;
    else if (strategy == "nearest")
      c.tracking.strategy = MatchStrategy::NearestMultiplier;
    else
      fail(ErrorCode::ConfigError, "tracking.strategy must be 'overlap' or 'nearest'");
    read(t, "accept_overlap2", c.tracking.accept_overlap2);
    read(t, "min_step_fraction", c.tracking.min_step_fraction);
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    expect_keys(t, {"cond_limit", "gap_flag"}, "tolerances");
    read(t, "cond_limit", c.cond_limit);
    read(t, "gap_flag", c.gap_flag);
  }
  if (j.contains("reference_alpha") && !j.at("reference_alpha").is_null())
    c.reference_alpha = vec2_from(j.at("reference_alpha"), "reference_alpha");
  read(j, "output_dir", c.output_dir);
  read(j, "cache_dir", c.cache_dir);
  read(j, "threads", c.threads);
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    fail(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  try {
    c = from_json(j);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::ConfigError, std::string("config has a wrongly typed value: ") + e.what());
  }
  validate_config(c);
  return c;
}

std::string serialize_config(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ConfigError, "cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void save_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path);
  out << serialize_config(config);
}

void validate_config(const RunConfig& c) {
  auto positive = [](double x, const char* what) {
    if (!(x > 0.0)) fail(ErrorCode::ConfigError, std::string(what) + " must be positive");
  };
  if (c.system != "honeycomb" && c.system != "constant")
    fail(ErrorCode::ConfigError, "system must be 'honeycomb' or 'constant'");
  if (c.path.steps_per_segment < 16) fail(ErrorCode::ConfigError, "path.steps_per_segment must be at least 16");
  if (c.integrator.steps < 16) fail(ErrorCode::ConfigError, "integrator.steps must be at least 16");
  if (c.integrator.max_steps < c.integrator.steps) fail(ErrorCode::ConfigError, "integrator.max_steps too small");
  positive(c.integrator.rel_tol, "integrator.rel_tol");
  positive(c.integrator.abs_tol, "integrator.abs_tol");
  positive(c.path.gamma_offset, "path.gamma_offset");
  if (!(c.path.k_offset >= 0.0 && c.path.k_offset < 1.0))
    fail(ErrorCode::ConfigError, "path.k_offset must lie in [0, 1)");
  positive(c.capacitance.cutoff, "capacitance.cutoff");
  positive(c.capacitance.ewald_eta, "capacitance.ewald_eta");
  if (c.capacitance.quad_points < 4) fail(ErrorCode::ConfigError, "capacitance.quad_points must be at least 4");
  if (c.capacitance.convergence_tol < 0.0) fail(ErrorCode::ConfigError, "capacitance.convergence_tol must be >= 0");
  positive(c.tracking.accept_overlap2, "tracking.accept_overlap2");
  positive(c.tracking.min_step_fraction, "tracking.min_step_fraction");
  positive(c.cond_limit, "tolerances.cond_limit");
  positive(c.gap_flag, "tolerances.gap_flag");
  if (c.system == "honeycomb") {
    positive(c.geometry.radius, "geometry.radius");
    const std::size_t disks = c.geometry.custom.empty() ? 6 : c.geometry.custom.size();
    if (c.modulation.size() != disks)
      fail(ErrorCode::ConfigError, "modulation.resonators must list one entry per disk");
    positive(c.modulation.omega, "modulation.omega");
    positive(c.modulation.delta, "modulation.delta");
  } else {
    positive(c.constant_period, "constant.period");
    if (c.constant_matrix.rows() == 0) fail(ErrorCode::ConfigError, "constant.matrix must be non-empty");
  }
}

std::string config_hash(const RunConfig& config) {
  RunConfig numeric = config;
  numeric.output_dir.clear();
  numeric.cache_dir.clear();
  numeric.threads = 0;
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize_config(numeric)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

RunConfig demo_config(const std::string& which) {
  RunConfig c;
  if (which == "weak") {
    c.modulation = demo_weak();
    c.path.steps_per_segment = 100;
  } else if (which == "strong") {
    c.modulation = demo_strong();
    c.path.steps_per_segment = 200;
  } else if (which == "static") {
    c.modulation = kappa_modulation(0.2, 1.0 / 9000.0, 0.0, std::vector<double>(6, 0.0));
    c.path.k_offset = 1e-3;
    c.path.steps_per_segment = 100;
  } else {
    fail(ErrorCode::ConfigError, "unknown demo '" + which + "' (expected weak, strong or static)");
  }
  c.output_dir = "floquet-out/" + which;
  return c;
}

}  // namespace floquet
