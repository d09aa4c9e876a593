#pragma once

#include <string>

#include "floquet/invariants.hpp"

namespace floquet {

/// Cycle notation with 1-based bands, fixed points included: "(1 2)(3)(4)".
std::string cycle_notation(const BraidInvariant& braid);

std::string report_json(const InvariantReport& report);
std::string report_text(const InvariantReport& report);

}  // namespace floquet
