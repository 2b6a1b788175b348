#pragma once

#include <json.hpp>

#include "e2espin/scan.hpp"

namespace e2espin {

// Everything known at one angle pair: amplitudes, cross sections, both concurrence
// evaluations, entropies, CHSH. Throws DegenerateStateError where the final spin state vanishes.
nlohmann::json point_report(const ScanConfig& cfg, double theta_a_deg, double theta_b_deg);

} // namespace e2espin
