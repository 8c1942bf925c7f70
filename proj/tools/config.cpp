#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

namespace kppfbcli {

namespace {

struct Entry {
    std::string section;
    std::string key;
    std::vector<std::string> tokens;
    int line = 0;
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

const std::map<std::string, std::vector<std::string>>& known_keys() {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"", {"command"}},
        {"coefficient.a", {"mean", "mode", "spatial", "spatial_period", "spatial_mode"}},
        {"coefficient.b", {"mean", "mode", "spatial", "spatial_period", "spatial_mode"}},
        {"numerics", {"n", "dt", "horizon", "window", "truncation"}},
        {"problem",
         {"l", "h0", "g0", "mu", "amplitude", "bc", "gamma", "time_shift", "l_star", "domain",
          "at_time", "depths", "snapshot_times"}},
        {"thresholds", {"eps_hprime", "eps_u", "margin", "stagnation_window"}},
        {"stop", {"t_max", "h_max", "record_dt"}},
        {"bisection", {"lo", "hi", "tol"}},
        {"sweep", {"mu", "h0", "amplitude"}},
        {"output", {"dir"}},
    };
    return keys;
}

std::string suggestion_for(const std::string& section, const std::string& key) {
    auto it = known_keys().find(section);
    if (it == known_keys().end()) return "";
    std::string best;
    size_t best_d = 3; // suggest only within edit distance 2
    for (const auto& k : it->second) {
        const size_t d = edit_distance(key, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

class Parser {
public:
    Parser(const std::string& text, const std::string& command, ExperimentConfig& out)
        : cfg_(out) {
        cfg_.command = command;
        tokenize(text);
    }

    std::vector<ConfigError> run() {
        read_entries();
        if (errors_.empty()) validate();
        return errors_;
    }

private:
    ExperimentConfig& cfg_;
    std::vector<Entry> entries_;
    std::vector<ConfigError> errors_;

    void error(const std::string& key, const std::string& message) {
        errors_.push_back({key, message});
    }

    void tokenize(const std::string& text) {
        std::istringstream is(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    error("", "line " + std::to_string(lineno) + ": unterminated section header");
                    continue;
                }
                section = trim(line.substr(1, line.size() - 2));
                if (known_keys().find(section) == known_keys().end())
                    error(section, "unknown section [" + section + "]");
                continue;
            }
            const size_t eq = line.find('=');
            if (eq == std::string::npos) {
                error("", "line " + std::to_string(lineno) + ": expected key = value");
                continue;
            }
            Entry e;
            e.section = section;
            e.key = trim(line.substr(0, eq));
            e.tokens = split_ws(trim(line.substr(eq + 1)));
            e.line = lineno;
            if (e.key.empty()) {
                error("", "line " + std::to_string(lineno) + ": missing key");
                continue;
            }
            const auto it = known_keys().find(section);
            if (it != known_keys().end() &&
                std::find(it->second.begin(), it->second.end(), e.key) == it->second.end()) {
                std::string msg = "unknown key '" + e.key + "'";
                if (!section.empty()) msg += " in [" + section + "]";
                const std::string hint = suggestion_for(section, e.key);
                if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
                error(e.key, msg);
                continue;
            }
            entries_.push_back(std::move(e));
        }
    }

    std::string qualified(const Entry& e) const {
        return e.section.empty() ? e.key : e.section + "." + e.key;
    }

    bool parse_double(const Entry& e, const std::string& tok, double& out) {
        char* end = nullptr;
        out = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0' || !std::isfinite(out)) {
            error(qualified(e), "value '" + tok + "' is not a finite number");
            return false;
        }
        return true;
    }

    void take_double(const Entry& e, double& dst) {
        if (e.tokens.size() != 1) {
            error(qualified(e), "expected a single numeric value");
            return;
        }
        double v;
        if (parse_double(e, e.tokens[0], v)) dst = v;
    }

    void take_int(const Entry& e, int& dst) {
        double v = 0;
        if (e.tokens.size() != 1 || !parse_double(e, e.tokens[0], v)) {
            if (e.tokens.size() != 1) error(qualified(e), "expected a single integer value");
            return;
        }
        if (v != std::floor(v)) {
            error(qualified(e), "expected an integer value");
            return;
        }
        dst = static_cast<int>(v);
    }

    void take_list(const Entry& e, std::vector<double>& dst) {
        std::vector<double> vals;
        for (const auto& tok : e.tokens) {
            double v;
            if (!parse_double(e, tok, v)) return;
            vals.push_back(v);
        }
        if (vals.empty()) {
            error(qualified(e), "expected at least one value");
            return;
        }
        dst = std::move(vals);
    }

    void take_string(const Entry& e, std::string& dst,
                     const std::vector<std::string>& allowed = {}) {
        if (e.tokens.size() != 1) {
            error(qualified(e), "expected a single value");
            return;
        }
        if (!allowed.empty() &&
            std::find(allowed.begin(), allowed.end(), e.tokens[0]) == allowed.end()) {
            std::string msg = "value '" + e.tokens[0] + "' must be one of {";
            for (size_t i = 0; i < allowed.size(); ++i)
                msg += (i ? ", " : "") + allowed[i];
            error(qualified(e), msg + "}");
            return;
        }
        dst = e.tokens[0];
    }

    void take_coefficient(const Entry& e, CoefficientBlock& blk) {
        if (e.key == "mean") {
            take_double(e, blk.mean);
        } else if (e.key == "mode") {
            if (e.tokens.size() != 3) {
                error(qualified(e), "mode needs three values: amplitude frequency phase");
                return;
            }
            TemporalMode m;
            if (parse_double(e, e.tokens[0], m.amplitude) &&
                parse_double(e, e.tokens[1], m.frequency) && parse_double(e, e.tokens[2], m.phase))
                blk.modes.push_back(m);
        } else if (e.key == "spatial") {
            take_string(e, blk.spatial, {"constant", "periodic"});
        } else if (e.key == "spatial_period") {
            take_double(e, blk.spatial_period);
        } else if (e.key == "spatial_mode") {
            if (e.tokens.size() != 3) {
                error(qualified(e), "spatial_mode needs three values: amplitude index phase");
                return;
            }
            SpatialModeCfg m;
            double idx = 0;
            if (parse_double(e, e.tokens[0], m.amplitude) && parse_double(e, e.tokens[1], idx) &&
                parse_double(e, e.tokens[2], m.phase)) {
                m.index = static_cast<int>(idx);
                blk.spatial_modes.push_back(m);
            }
        }
    }

    void read_entries() {
        for (const auto& e : entries_) {
            if (e.section.empty()) {
                std::string cmd;
                take_string(e, cmd, known_commands());
                if (!cmd.empty() && cmd != cfg_.command)
                    error("command", "config names command '" + cmd + "' but '" + cfg_.command +
                                         "' was invoked");
            } else if (e.section == "coefficient.a") {
                take_coefficient(e, cfg_.a);
            } else if (e.section == "coefficient.b") {
                take_coefficient(e, cfg_.b);
            } else if (e.section == "numerics") {
                if (e.key == "n") take_int(e, cfg_.n);
                else if (e.key == "dt") take_double(e, cfg_.dt);
                else if (e.key == "horizon") take_double(e, cfg_.horizon);
                else if (e.key == "window") take_double(e, cfg_.window);
                else if (e.key == "truncation") take_double(e, cfg_.truncation);
            } else if (e.section == "problem") {
                if (e.key == "l") take_double(e, cfg_.l);
                else if (e.key == "h0") take_double(e, cfg_.h0);
                else if (e.key == "g0") { double v = 0; take_double(e, v); cfg_.g0 = v; }
                else if (e.key == "mu") take_double(e, cfg_.mu);
                else if (e.key == "amplitude") take_double(e, cfg_.amplitude);
                else if (e.key == "bc") take_string(e, cfg_.bc, {"mixed", "dirichlet", "neumann"});
                else if (e.key == "gamma") take_double(e, cfg_.gamma);
                else if (e.key == "time_shift") take_double(e, cfg_.time_shift);
                else if (e.key == "l_star") take_double(e, cfg_.l_star);
                else if (e.key == "domain") take_string(e, cfg_.domain, {"half-line", "bounded"});
                else if (e.key == "at_time") take_double(e, cfg_.at_time);
                else if (e.key == "depths") take_list(e, cfg_.depths);
                else if (e.key == "snapshot_times") take_list(e, cfg_.snapshot_times);
            } else if (e.section == "thresholds") {
                if (e.key == "eps_hprime") take_double(e, cfg_.eps_hprime);
                else if (e.key == "eps_u") take_double(e, cfg_.eps_u);
                else if (e.key == "margin") take_double(e, cfg_.margin);
                else if (e.key == "stagnation_window") take_double(e, cfg_.stagnation_window);
            } else if (e.section == "stop") {
                if (e.key == "t_max") take_double(e, cfg_.t_max);
                else if (e.key == "h_max") take_double(e, cfg_.h_max);
                else if (e.key == "record_dt") take_double(e, cfg_.record_dt);
            } else if (e.section == "bisection") {
                if (e.key == "lo") take_double(e, cfg_.lo);
                else if (e.key == "hi") take_double(e, cfg_.hi);
                else if (e.key == "tol") take_double(e, cfg_.tol);
            } else if (e.section == "sweep") {
                if (e.key == "mu") take_list(e, cfg_.sweep_mu);
                else if (e.key == "h0") take_list(e, cfg_.sweep_h0);
                else if (e.key == "amplitude") take_list(e, cfg_.sweep_amplitude);
            } else if (e.section == "output") {
                if (e.key == "dir") take_string(e, cfg_.out_dir);
            }
        }
    }

    void require_positive(double v, const std::string& key) {
        if (!(v > 0.0)) error(key, key + " must be > 0");
    }

    void validate_coefficient(const CoefficientBlock& blk, const std::string& name) {
        for (const auto& m : blk.modes)
            if (!(m.frequency > 0.0))
                error(name + ".mode", "mode frequency must be > 0");
        if (blk.spatial == "periodic") {
            if (!(blk.spatial_period > 0.0))
                error(name + ".spatial_period", "periodic spatial profile needs spatial_period > 0");
            double amp = 0.0;
            for (const auto& m : blk.spatial_modes) {
                if (m.index < 1) error(name + ".spatial_mode", "spatial mode index must be >= 1");
                amp += std::abs(m.amplitude);
            }
            if (amp >= 1.0)
                error(name + ".spatial_mode", "spatial amplitudes must sum below 1");
        } else if (!blk.spatial_modes.empty() || blk.spatial_period != 0.0) {
            error(name + ".spatial", "spatial modes given but spatial = constant");
        }
    }

    void validate() {
        const std::string& cmd = cfg_.command;
        validate_coefficient(cfg_.a, "coefficient.a");
        validate_coefficient(cfg_.b, "coefficient.b");

        if (cfg_.n != 0 && cfg_.n < 8) error("numerics.n", "n must be >= 8");
        if (cfg_.dt < 0.0) error("numerics.dt", "dt must be > 0");
        if (cfg_.mu < 0.0) error("problem.mu", "mu must be >= 0");
        require_positive(cfg_.horizon, "numerics.horizon");
        require_positive(cfg_.window, "numerics.window");
        require_positive(cfg_.truncation, "numerics.truncation");
        if (!(cfg_.amplitude > 0.0)) error("problem.amplitude", "amplitude must be > 0");

        const bool needs_h0 = cmd == "simulate" || cmd == "double-front" || cmd == "classify" ||
                              cmd == "critical-mu";
        if (needs_h0 && !(cfg_.h0 > 0.0)) error("problem.h0", "h0 must be > 0");

        if (cmd == "lyapunov" && !(cfg_.l > 0.0)) error("problem.l", "l must be > 0");

        if (cmd == "double-front") {
            if (!cfg_.g0) error("problem.g0", "double-front needs g0");
            else if (!(*cfg_.g0 < cfg_.h0)) error("problem.g0", "need g0 < h0");
        }

        if (cmd == "critical-length" || cmd == "critical-mu") {
            if (!(cfg_.lo >= 0.0) || !(cfg_.hi > cfg_.lo))
                error("bisection", "need 0 <= lo < hi");
            require_positive(cfg_.tol, "bisection.tol");
        }

        if (cmd == "classify" || cmd == "critical-mu" || cmd == "sweep") {
            if (!(cfg_.l_star > 0.0))
                error("problem.l_star", cmd + " needs a positive l_star reference");
        }

        if (cmd == "sweep") {
            if (cfg_.sweep_mu.empty()) error("sweep.mu", "sweep needs a mu list");
            if (cfg_.sweep_h0.empty()) error("sweep.h0", "sweep needs an h0 list");
            if (cfg_.sweep_amplitude.empty()) cfg_.sweep_amplitude = {1.0};
            for (double h0 : cfg_.sweep_h0)
                if (!(h0 > 0.0)) error("sweep.h0", "sweep h0 values must be > 0");
            for (double mu : cfg_.sweep_mu)
                if (!(mu >= 0.0)) error("sweep.mu", "sweep mu values must be >= 0");
        }

        if (cmd == "pullback") {
            if (cfg_.domain == "bounded" && !(cfg_.l > 0.0))
                error("problem.l", "bounded pullback needs l > 0");
            for (size_t i = 1; i < cfg_.depths.size(); ++i)
                if (!(cfg_.depths[i] > cfg_.depths[i - 1]))
                    error("problem.depths", "depth schedule must be increasing");
        }
    }
};

} // namespace

const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> cmds = {
        "lyapunov", "critical-length", "simulate", "double-front",
        "pullback", "classify", "critical-mu", "sweep"};
    return cmds;
}

std::vector<ConfigError> parse_config(const std::string& text, const std::string& command,
                                      ExperimentConfig& out) {
    if (std::find(known_commands().begin(), known_commands().end(), command) ==
        known_commands().end())
        return {{"command", "unknown command '" + command + "'"}};
    Parser parser(text, command, out);
    return parser.run();
}

} // namespace kppfbcli
