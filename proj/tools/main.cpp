#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "outputs.hpp"

namespace {

void usage(std::ostream& os) {
    os << "usage: kppfb <command> --config <path> [--out <dir>] [--jobs <k>] [--verbose]\n"
          "commands:\n"
          "  lyapunov         principal Lyapunov exponent of the linearization\n"
          "  critical-length  bisection for the habitat length with zero exponent\n"
          "  simulate         single-front free boundary run\n"
          "  double-front     double-front free boundary run\n"
          "  pullback         positive almost periodic solution by pullback\n"
          "  classify         run and classify spreading vs vanishing\n"
          "  critical-mu      bisection for the critical expansion coefficient\n"
          "  sweep            verdict table over a (mu, h0, amplitude) grid\n";
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage(std::cerr);
        return 2;
    }
    const std::string command = argv[1];
    if (command == "--help" || command == "-h" || command == "help") {
        usage(std::cout);
        return 0;
    }

    std::string config_path;
    std::string out_dir;
    int jobs = 1;
    bool verbose = false;
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        auto value = [&](const char* flag) -> std::string {
            if (i + 1 >= argc) {
                std::cerr << "error: " << flag << " needs a value\n";
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--config")
            config_path = value("--config");
        else if (arg == "--out")
            out_dir = value("--out");
        else if (arg == "--jobs")
            jobs = std::max(1, std::atoi(value("--jobs").c_str()));
        else if (arg == "--verbose")
            verbose = true;
        else {
            std::cerr << "error: unknown flag '" << arg << "'\n";
            usage(std::cerr);
            return 2;
        }
    }

    if (config_path.empty()) {
        std::cerr << "error: --config is required\n";
        return 2;
    }
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot read config file " << config_path << "\n";
        return 2;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    kppfbcli::ExperimentConfig cfg;
    const auto violations = kppfbcli::parse_config(buffer.str(), command, cfg);
    const std::string resolved_out = !out_dir.empty() ? out_dir : cfg.out_dir;
    if (!violations.empty()) {
        std::ostringstream msg;
        for (const auto& v : violations) {
            std::cerr << "config error";
            if (!v.key.empty()) std::cerr << " [" << v.key << "]";
            std::cerr << ": " << v.message << "\n";
            msg << (msg.tellp() > 0 ? "; " : "") << v.message;
        }
        kppfbcli::write_error_json(resolved_out + "/error.json", 2, msg.str(), command);
        return 2;
    }

    return kppfbcli::run_command(cfg, resolved_out, jobs, verbose);
}
