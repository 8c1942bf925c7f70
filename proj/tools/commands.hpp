#pragma once

#include <string>

#include "config.hpp"

namespace kppfbcli {

/// Dispatch a validated config to the solver library and write the declared
/// outputs under out_dir. Returns the process exit code (0 ok, 1 numerical
/// regime, 2 invalid setup); on nonzero an error.json has been written.
int run_command(const ExperimentConfig& cfg, const std::string& out_dir, int jobs, bool verbose);

} // namespace kppfbcli
