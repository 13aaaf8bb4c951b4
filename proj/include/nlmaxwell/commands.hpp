#pragma once

// Command dispatch behind the command-line tool.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "nlmaxwell/config.hpp"

namespace nlmaxwell {

enum class Command { run, sweep, mms, validate_graph };

std::optional<Command> parse_command(const std::string& name);
std::string to_string(Command command);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;  // I/O and unexpected errors
inline constexpr int config = 2;
inline constexpr int solver = 3;
inline constexpr int not_confirming = 4;
}  // namespace exit_code

struct ExecOptions {
    std::string out_dir = "out";
    bool strict = false;
    unsigned threads = 1;
    std::optional<std::uint64_t> seed;  // overrides the config seed
    std::string config_text;            // raw input, hashed into the manifest
};

/// Runs a command, writes its artifacts and manifest.json into out_dir and
/// prints a one-line summary to `out` (errors go to `err`). Returns the exit code.
int execute(const ScenarioConfig& cfg, Command command, const ExecOptions& options, std::ostream& out,
            std::ostream& err);

/// 64-bit FNV-1a hash, hex encoded.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace nlmaxwell
