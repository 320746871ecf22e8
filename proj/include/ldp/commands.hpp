#pragma once

// The command-line subcommands as library calls, so the CLI, the acceptance run and the
// tests all exercise the same code. A command is a pure function of its Config: it returns
// CSV tables by file name plus headline results, and write_run puts them on disk next to a
// JSON run summary.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ldp/config.hpp"
#include "ldp/control.hpp"

namespace ldp {

struct CommandOutput {
  std::vector<std::pair<std::string, std::string>> files;  // file name, CSV content
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
};

/// simulate, rate, minimize, ldp-scan, convergence, particles, kolmogorov, compare, metrics.
const std::vector<std::string>& command_names();

/// One-line description per command, for help output.
std::string command_help(const std::string& name);

CommandOutput run_command(const std::string& name, const Config& cfg);

/// Writes every table and summary.json (command, config echo, seed, config hash, per-file
/// blob hashes, combined content hash, results, wall time). Returns the summary.
nlohmann::ordered_json write_run(const std::filesystem::path& dir, const std::string& name,
                                 const Config& cfg, const CommandOutput& out, double wall_seconds);

/// Content hash of a run: blob hash over "name\n<blob hash>\n" lines of the tables in order.
std::string outputs_hash(const CommandOutput& out);

/// Control table (t, a, h), one row per (step, cell) in row-major order.
std::string control_csv(const Control& h, const Grid& grid);
Control parse_control_csv(const std::string& csv, const Grid& grid);

}  // namespace ldp
