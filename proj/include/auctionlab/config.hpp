#pragma once

#include "auctionlab/distribution.hpp"
#include "auctionlab/strategy.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace auctionlab::lab {

using json = nlohmann::json;

/// Throws ConfigInvalid when j contains keys outside required+optional, or
/// misses a required key.
void validate_keys(const json& j, const char* where, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional);

Distribution distribution_from_json(const json& j);
json distribution_to_json(const Distribution& d);

Strategy strategy_from_json(const json& j, Distribution base);
json strategy_to_json(const Strategy& s);

/// Formats a double with 12 significant digits, '.' decimal point.
std::string format_number(double v);

// Command runners. Each takes the parsed config JSON (already read from
// --config or the built-in default) and returns the artifact it emits.
std::string cmd_best_response(const json& config);
json cmd_nash(const json& config);
json cmd_phase(const json& config);
std::string cmd_erm(const json& config, std::uint64_t seed);
std::string cmd_mechanisms(const json& config);

json default_config(const std::string& command);

/// Full CLI entry point: parses argv, dispatches subcommands, maps errors to
/// exit codes (0 ok, 2 config error, 3 assumption violation, 4 acceptance
/// failure).
int run_cli(int argc, char** argv);

} // namespace auctionlab::lab
