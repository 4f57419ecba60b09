#pragma once

#include <string>

#include "rtg/spec_io.hpp"

namespace rtg {

// Request/response layer behind the C API. Each command takes a JSON request and
// returns the rendered report (CSV or JSON, per request["format"]).
//
// Common request keys: seed, threads, format ("csv" | "json" | "newick"), exact, force.
// A target is given as "model", "measure", or "example" (power_tail | half_delay |
// mixed with optional gamma / horizon / windows).
std::string run_command(const std::string& name, const json& request);

}  // namespace rtg
