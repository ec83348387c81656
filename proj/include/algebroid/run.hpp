#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "algebroid/config.hpp"
#include "algebroid/geo.hpp"
#include "algebroid/report.hpp"

namespace gla {

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<double> dt;
};

struct RunResult {
  Report report;
  std::vector<std::string> notices;
  std::optional<Trajectory> trajectory;
  int exit_code() const { return report.any_failed() ? 1 : 0; }
};

const std::vector<std::string>& command_names();

// Applies the overrides to the config, then runs one command. Throws std::invalid_argument for unknown commands.
RunResult run_command(const std::string& command, SystemConfig cfg, const RunOptions& opts);

// Nonlinear connection used by frame/curvature/identity checks: the configured one, else the canonical one.
NlConnection working_connection(const SystemConfig& cfg);
// The configured distinguished connection, else the Berwald connection of working_connection.
DConnection working_dconnection(const SystemConfig& cfg);

}  // namespace gla
