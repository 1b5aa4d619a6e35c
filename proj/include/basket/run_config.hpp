#pragma once

#include <map>
#include <string>
#include <string_view>

#include "basket/simulate.hpp"

namespace basket {

inline constexpr std::string_view kVersion = "0.1.0";

// A fully resolved run: the simulation plan plus the output directory.
struct RunConfig {
  SimPlan plan;
  std::string out_dir = "results";
};

// Parses the flat key/value-with-sections configuration format. Resolution
// order: defaults, then global keys, then `overrides` (command-line values),
// then the prior-mean mapping, then per-method `[section]` keys. Unknown keys
// and invariant violations are reported with their key path.
RunConfig parse_config(std::string_view text,
                       const std::map<std::string, std::string>& overrides = {});

// Renders the resolved configuration back into the same format. The echo is
// idempotent: parsing it yields a config that renders identically. Execution
// details that do not affect results (output directory, worker count) are
// omitted.
std::string render_config(const RunConfig& config);

}  // namespace basket
