#pragma once

// Experiment config: a flat, sectioned key = value text format. Unknown keys
// are errors (with a nearest-key suggestion) and validation reports every
// violation, not just the first.

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace kppfbcli {

struct ConfigError {
    std::string key;     // offending key (possibly section-qualified) or ""
    std::string message;
};

struct TemporalMode {
    double amplitude = 0.0;
    double frequency = 1.0;
    double phase = 0.0;
};

struct SpatialModeCfg {
    double amplitude = 0.0;
    int index = 1;
    double phase = 0.0;
};

struct CoefficientBlock {
    double mean = 1.0;
    std::vector<TemporalMode> modes;
    std::string spatial = "constant"; // constant | periodic
    double spatial_period = 0.0;
    std::vector<SpatialModeCfg> spatial_modes;
};

struct ExperimentConfig {
    std::string command;

    CoefficientBlock a;
    CoefficientBlock b;

    // numerics
    int n = 0;              // 0 -> auto
    double dt = 0.0;        // 0 -> auto
    double horizon = 2000.0;
    double window = 1.0;
    double truncation = 40.0;

    // problem
    double l = 0.0;
    double h0 = 0.0;
    std::optional<double> g0;
    double mu = 0.0;
    double amplitude = 1.0;
    std::string bc = "mixed"; // mixed | dirichlet | neumann
    double gamma = 0.0;
    double time_shift = 0.0;
    double l_star = 0.0;
    std::string domain = "half-line"; // pullback: half-line | bounded
    double at_time = 0.0;
    std::vector<double> depths;
    std::vector<double> snapshot_times;

    // thresholds
    double eps_hprime = 1e-5;
    double eps_u = 1e-4;
    double margin = -1.0;
    double stagnation_window = 50.0;

    // stop
    double t_max = 200.0;
    double h_max = 1e9;
    double record_dt = 0.0;

    // bisection
    double lo = 0.0;
    double hi = 0.0;
    double tol = 0.0;

    // sweep grids
    std::vector<double> sweep_mu;
    std::vector<double> sweep_h0;
    std::vector<double> sweep_amplitude;

    // output
    std::string out_dir = ".";
};

/// Known commands, in CLI order.
const std::vector<std::string>& known_commands();

/// Parse + validate `text` for `command`; fills `out` with defaults applied.
/// Returns every violation found (empty means the config is valid).
std::vector<ConfigError> parse_config(const std::string& text, const std::string& command,
                                      ExperimentConfig& out);

} // namespace kppfbcli
