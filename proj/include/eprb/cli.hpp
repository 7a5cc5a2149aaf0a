#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "eprb/types.hpp"

namespace eprb {

inline constexpr const char* kToolVersion = "0.1.0";

/// Angles are stored in radians so a manifest reproduces a run exactly.
nlohmann::json sim_config_to_json(const SimConfig& cfg);
/// Accepts settings as *_rad or *_deg lists; missing keys keep `base`.
SimConfig sim_config_from_json(const nlohmann::json& j,
                               SimConfig base = SimConfig{});

namespace cli {

/// Runs one `eprb` command line (args[0] is the program name). Returns the
/// process exit code: 0 on success, 1 on runtime failure, 2 on usage error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cli
}  // namespace eprb
