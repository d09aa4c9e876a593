#pragma once

#include <optional>
#include <string>

#include "floquet/capacitance.hpp"

namespace floquet {

/// File name of a cache entry: cap-<hash>-<bits of α₁>-<bits of α₂>-q<Q>-c<cutoff bits>.json.
std::string capacitance_cache_name(const std::string& geometry_hash, const Vec2& alpha,
                                   const CapacitanceOptions& options);

/// JSON text of one capacitance entry (fixed key order, 17 significant digits).
std::string capacitance_to_json(const std::string& geometry_hash, const CapacitanceMatrix& c,
                                const CapacitanceOptions& options);

/// Parses an entry written by capacitance_to_json, or any file in the same
/// schema (external solvers). Throws IoError or ConfigError.
CapacitanceMatrix capacitance_from_json(const std::string& text, std::string* geometry_hash = nullptr);

CapacitanceMatrix read_capacitance_file(const std::string& path, std::string* geometry_hash = nullptr);

/// Returns the cached entry if present and matching the geometry hash.
std::optional<CapacitanceMatrix> load_cached_capacitance(const std::string& directory, const std::string& hash,
                                                         const Vec2& alpha, const CapacitanceOptions& options);

/// Writes the entry (creating the directory) and returns its path.
std::string save_cached_capacitance(const std::string& directory, const std::string& hash,
                                    const CapacitanceMatrix& c, const CapacitanceOptions& options);

}  // namespace floquet
