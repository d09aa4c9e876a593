#include "floquet/io/cache.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "format.hpp"

namespace floquet {

using nlohmann::ordered_json;

std::string capacitance_cache_name(const std::string& geometry_hash, const Vec2& alpha,
                                   const CapacitanceOptions& options) {
  return "cap-" + geometry_hash + "-" + detail::hex_bits(alpha.x()) + "-" + detail::hex_bits(alpha.y()) + "-q" +
         std::to_string(options.quad_points) + "-c" + detail::hex_bits(options.cutoff) + ".json";
}

std::string capacitance_to_json(const std::string& geometry_hash, const CapacitanceMatrix& c,
                                const CapacitanceOptions& options) {
  ordered_json j;
  j["geometry_hash"] = geometry_hash;
  j["alpha"] = {c.alpha.x(), c.alpha.y()};
  j["quad_points"] = c.quad_points;
  j["cutoff"] = c.lattice_sum_cutoff;
  j["ewald_eta"] = options.ewald_eta;
  j["hermiticity_residual"] = c.hermiticity_residual;
  j["convergence_delta"] = c.convergence_delta;
  j["size"] = c.C.rows();
  ordered_json re = ordered_json::array(), im = ordered_json::array();
  for (Eigen::Index r = 0; r < c.C.rows(); ++r) {
    ordered_json rr = ordered_json::array(), ii = ordered_json::array();
    for (Eigen::Index k = 0; k < c.C.cols(); ++k) {
      rr.push_back(c.C(r, k).real());
      ii.push_back(c.C(r, k).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump(1) + "\n";
}

CapacitanceMatrix capacitance_from_json(const std::string& text, std::string* geometry_hash) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::IoError, std::string("malformed capacitance file: ") + e.what());
  }
  try {
    CapacitanceMatrix c;
    const auto alpha = j.at("alpha");
    c.alpha = Vec2(alpha.at(0).get<double>(), alpha.at(1).get<double>());
    c.quad_points = j.at("quad_points").get<int>();
    c.lattice_sum_cutoff = j.at("cutoff").get<double>();
    const auto n = j.at("size").get<Eigen::Index>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (n < 1 || re.size() != static_cast<std::size_t>(n) || im.size() != static_cast<std::size_t>(n))
      fail(ErrorCode::ConfigError, "capacitance matrix size mismatch");
    c.C.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (re[r].size() != static_cast<std::size_t>(n) || im[r].size() != static_cast<std::size_t>(n))
        fail(ErrorCode::ConfigError, "capacitance matrix row size mismatch");
      for (Eigen::Index k = 0; k < n; ++k) c.C(r, k) = cplx(re[r][k].get<double>(), im[r][k].get<double>());
    }
    c.hermiticity_residual = (c.C - c.C.adjoint()).norm() / std::max(c.C.norm(), 1e-300);
    c.convergence_delta = j.value("convergence_delta", -1.0);
    if (geometry_hash) *geometry_hash = j.value("geometry_hash", std::string());
    return c;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::ConfigError, std::string("invalid capacitance file: ") + e.what());
  }
}

CapacitanceMatrix read_capacitance_file(const std::string& path, std::string* geometry_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return capacitance_from_json(text.str(), geometry_hash);
}

std::optional<CapacitanceMatrix> load_cached_capacitance(const std::string& directory, const std::string& hash,
                                                         const Vec2& alpha, const CapacitanceOptions& options) {
  const std::filesystem::path path = std::filesystem::path(directory) / capacitance_cache_name(hash, alpha, options);
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::string stored;
  CapacitanceMatrix c = read_capacitance_file(path.string(), &stored);
  if (stored != hash || c.alpha != alpha) return std::nullopt;
  return c;
}

std::string save_cached_capacitance(const std::string& directory, const std::string& hash,
                                    const CapacitanceMatrix& c, const CapacitanceOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create cache directory " + directory + ": " + ec.message());
  const std::filesystem::path path = std::filesystem::path(directory) / capacitance_cache_name(hash, c.alpha, options);
  // Write to a temporary name first so concurrent readers never see a partial file.
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot write " + tmp.string());
    out << capacitance_to_json(hash, c, options);
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::IoError, "cannot write " + path.string() + ": " + ec.message());
  return path.string();
}

}  // namespace floquet
