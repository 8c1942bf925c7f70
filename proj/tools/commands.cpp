#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <vector>

#include "kppfb.h"
#include "outputs.hpp"

namespace fs = std::filesystem;

namespace kppfbcli {

namespace {

// Owns the mode arrays a kppfb_coeff_desc points into.
struct CoeffHolder {
    std::vector<double> amp, freq, phase;
    std::vector<double> samp, sphase;
    std::vector<int> sindex;
    kppfb_coeff_desc desc{};

    explicit CoeffHolder(const CoefficientBlock& blk) {
        for (const auto& m : blk.modes) {
            amp.push_back(m.amplitude);
            freq.push_back(m.frequency);
            phase.push_back(m.phase);
        }
        desc.temporal = {blk.mean, static_cast<int>(amp.size()),
                         amp.empty() ? nullptr : amp.data(),
                         freq.empty() ? nullptr : freq.data(),
                         phase.empty() ? nullptr : phase.data()};
        if (blk.spatial == "periodic") {
            for (const auto& m : blk.spatial_modes) {
                samp.push_back(m.amplitude);
                sindex.push_back(m.index);
                sphase.push_back(m.phase);
            }
            desc.spatial = {blk.spatial_period, static_cast<int>(samp.size()),
                            samp.empty() ? nullptr : samp.data(),
                            sindex.empty() ? nullptr : sindex.data(),
                            sphase.empty() ? nullptr : sphase.data()};
        } else {
            desc.spatial = {0.0, 0, nullptr, nullptr, nullptr};
        }
    }
};

using ReactionPtr = std::unique_ptr<kppfb_reaction, decltype(&kppfb_reaction_free)>;

ReactionPtr make_reaction(const ExperimentConfig& cfg) {
    CoeffHolder a(cfg.a), b(cfg.b);
    kppfb_reaction* r = nullptr;
    if (kppfb_reaction_create(&a.desc, &b.desc, cfg.time_shift, &r) != KPPFB_OK)
        throw std::runtime_error(kppfb_last_error());
    return ReactionPtr(r, kppfb_reaction_free);
}

kppfb_bc bc_from(const std::string& name) {
    if (name == "dirichlet") return KPPFB_BC_DIRICHLET;
    if (name == "neumann") return KPPFB_BC_NEUMANN;
    return KPPFB_BC_MIXED;
}

kppfb_lyap_opts lyap_opts(const ExperimentConfig& cfg) {
    return {cfg.n, cfg.dt, cfg.horizon, cfg.window, 0.0};
}

kppfb_front_params front_params(const ExperimentConfig& cfg, bool double_front) {
    kppfb_front_params p{};
    p.h0 = cfg.h0;
    p.g0 = cfg.g0.value_or(0.0);
    p.double_front = double_front ? 1 : 0;
    p.mu = cfg.mu;
    p.amplitude = cfg.amplitude;
    p.cells = cfg.n;
    p.dt = cfg.dt;
    return p;
}

kppfb_stop_params stop_params(const ExperimentConfig& cfg) {
    return {cfg.t_max, cfg.h_max, cfg.eps_hprime, cfg.eps_u, cfg.stagnation_window,
            cfg.record_dt};
}

kppfb_thresholds thresholds(const ExperimentConfig& cfg) {
    return {cfg.eps_hprime, cfg.eps_u, cfg.margin, cfg.stagnation_window};
}

const char* stop_name(int reason) {
    switch (reason) {
        case KPPFB_STOP_TMAX: return "t_max";
        case KPPFB_STOP_HMAX: return "h_max";
        case KPPFB_STOP_STAGNATION: return "stagnation";
        case KPPFB_STOP_STEP_ERROR: return "step_error";
    }
    return "?";
}

const char* outcome_str(int o) {
    switch (o) {
        case KPPFB_SPREADING: return "spreading";
        case KPPFB_VANISHING: return "vanishing";
        case KPPFB_UNDETERMINED: return "undetermined";
    }
    return "?";
}

// Raised by command bodies when a library call failed; carries the exit code.
struct CommandFailure {
    int exit_code;
    std::string message;
};

void check(kppfb_status st) {
    if (st == KPPFB_OK) return;
    const int code = st == KPPFB_ERR_INVALID ? 2 : 1;
    throw CommandFailure{code, kppfb_last_error()};
}

struct TrajectoryData {
    std::vector<double> t, h, g, sup_u, hprime;
    bool is_double = false;
    int stop_reason = 0;
    std::string error;
};

TrajectoryData fetch(const kppfb_trajectory* traj) {
    TrajectoryData d;
    const long n = kppfb_trajectory_size(traj);
    d.t.resize(n);
    d.h.resize(n);
    d.g.resize(n);
    d.sup_u.resize(n);
    d.hprime.resize(n);
    long len = 0;
    check(kppfb_trajectory_column(traj, KPPFB_COL_T, d.t.data(), n, &len));
    check(kppfb_trajectory_column(traj, KPPFB_COL_H, d.h.data(), n, &len));
    check(kppfb_trajectory_column(traj, KPPFB_COL_G, d.g.data(), n, &len));
    check(kppfb_trajectory_column(traj, KPPFB_COL_SUP_U, d.sup_u.data(), n, &len));
    check(kppfb_trajectory_column(traj, KPPFB_COL_HPRIME, d.hprime.data(), n, &len));
    d.is_double = kppfb_trajectory_is_double(traj) != 0;
    d.stop_reason = kppfb_trajectory_stop_reason(traj);
    d.error = kppfb_trajectory_error(traj);
    return d;
}

void write_trajectory_csv(const TrajectoryData& d, const std::string& path) {
    std::vector<std::string> header = d.is_double
                                          ? std::vector<std::string>{"t", "h", "g", "sup_u", "hprime"}
                                          : std::vector<std::string>{"t", "h", "sup_u", "hprime"};
    std::vector<std::vector<std::string>> rows;
    rows.reserve(d.t.size());
    for (size_t i = 0; i < d.t.size(); ++i) {
        std::vector<std::string> row{fmt(d.t[i]), fmt(d.h[i])};
        if (d.is_double) row.push_back(fmt(d.g[i]));
        row.push_back(fmt(d.sup_u[i]));
        row.push_back(fmt(d.hprime[i]));
        rows.push_back(std::move(row));
    }
    write_file_atomic(path, csv_table(header, rows));
}

void write_snapshots_csv(const kppfb_trajectory* traj, const std::string& path) {
    std::vector<std::string> header{"t", "x_physical", "u"};
    std::vector<std::vector<std::string>> rows;
    const long count = kppfb_trajectory_snapshot_count(traj);
    std::vector<double> x(1 << 16), u(1 << 16);
    for (long i = 0; i < count; ++i) {
        double t = 0;
        long len = 0;
        check(kppfb_trajectory_snapshot(traj, i, &t, x.data(), u.data(),
                                        static_cast<long>(x.size()), &len));
        for (long j = 0; j < len; ++j)
            rows.push_back({fmt(t), fmt(x[j]), fmt(u[j])});
    }
    write_file_atomic(path, csv_table(header, rows));
}

using TrajectoryPtr = std::unique_ptr<kppfb_trajectory, decltype(&kppfb_trajectory_free)>;

TrajectoryPtr run_front(const ExperimentConfig& cfg, bool double_front) {
    auto reaction = make_reaction(cfg);
    auto params = front_params(cfg, double_front);
    auto stop = stop_params(cfg);
    kppfb_trajectory* traj = nullptr;
    check(kppfb_front_run(reaction.get(), &params, &stop,
                          cfg.snapshot_times.empty() ? nullptr : cfg.snapshot_times.data(),
                          static_cast<int>(cfg.snapshot_times.size()), &traj));
    return TrajectoryPtr(traj, kppfb_trajectory_free);
}

int cmd_lyapunov(const ExperimentConfig& cfg, const std::string& out, bool verbose) {
    CoeffHolder a(cfg.a);
    const auto opts = lyap_opts(cfg);
    kppfb_lyap_result res{};
    check(kppfb_lyapunov(&a.desc, cfg.l, bc_from(cfg.bc), cfg.gamma, &opts, &res, nullptr, 0,
                         nullptr));
    if (verbose)
        std::cerr << "lambda = " << fmt(res.value) << " (spread " << fmt(res.window_spread)
                  << ")\n";
    write_file_atomic(out + "/lyapunov.csv",
                      csv_table({"l", "bc", "gamma", "value", "window_spread", "horizon"},
                                {{fmt(cfg.l), cfg.bc, fmt(cfg.gamma), fmt(res.value),
                                  fmt(res.window_spread), fmt(res.horizon)}}));
    return 0;
}

int cmd_critical_length(const ExperimentConfig& cfg, const std::string& out, bool verbose) {
    CoeffHolder a(cfg.a);
    const auto opts = lyap_opts(cfg);
    double l_star = 0.0;
    check(kppfb_critical_length(&a.desc, bc_from(cfg.bc), cfg.lo, cfg.hi, cfg.tol, &opts,
                                &l_star));
    if (verbose) std::cerr << "l* = " << fmt(l_star) << "\n";
    write_file_atomic(out + "/critical_length.csv",
                      csv_table({"l_star", "bracket_lo", "bracket_hi", "tol"},
                                {{fmt(l_star), fmt(cfg.lo), fmt(cfg.hi), fmt(cfg.tol)}}));
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, const std::string& out, bool double_front) {
    auto traj = run_front(cfg, double_front);
    const TrajectoryData d = fetch(traj.get());
    write_trajectory_csv(d, out + "/trajectory.csv");
    if (!cfg.snapshot_times.empty()) write_snapshots_csv(traj.get(), out + "/snapshots.csv");
    if (d.is_double)
        emit_plotdata({"t", "h", "g"}, {d.t, d.h, d.g}, out + "/front.dat");
    else
        emit_plotdata({"t", "h"}, {d.t, d.h}, out + "/front.dat");
    if (d.stop_reason == KPPFB_STOP_STEP_ERROR)
        throw CommandFailure{1, "run stopped on a step error: " + d.error};
    return 0;
}

int cmd_pullback(const ExperimentConfig& cfg, const std::string& out, bool verbose) {
    auto reaction = make_reaction(cfg);
    const bool bounded = cfg.domain == "bounded";
    const double length = bounded ? cfg.l : cfg.truncation;
    kppfb_pullback* pb = nullptr;
    check(kppfb_pullback_run(reaction.get(),
                             bounded ? KPPFB_DOMAIN_BOUNDED_MIXED : KPPFB_DOMAIN_HALF_LINE,
                             length, cfg.n, cfg.dt,
                             cfg.depths.empty() ? nullptr : cfg.depths.data(),
                             static_cast<int>(cfg.depths.size()), cfg.tol, cfg.at_time, &pb));
    std::unique_ptr<kppfb_pullback, decltype(&kppfb_pullback_free)> guard(pb, kppfb_pullback_free);

    double depth = 0, change = 0, inf = 0;
    int converged = 0;
    check(kppfb_pullback_info(pb, &depth, &change, &inf, &converged));
    if (verbose)
        std::cerr << "pullback depth " << fmt(depth) << ", change " << fmt(change) << "\n";
    write_file_atomic(out + "/pullback_summary.csv",
                      csv_table({"depth_used", "last_change", "interior_infimum", "converged"},
                                {{fmt(depth), fmt(change), fmt(inf),
                                  converged ? "1" : "0"}}));

    std::vector<double> x(1 << 16), u(1 << 16);
    long len = 0;
    check(kppfb_pullback_profile(pb, x.data(), u.data(), static_cast<long>(x.size()), &len));
    x.resize(len);
    u.resize(len);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(len);
    for (long j = 0; j < len; ++j) rows.push_back({fmt(cfg.at_time), fmt(x[j]), fmt(u[j])});
    write_file_atomic(out + "/pullback_profile.csv", csv_table({"t", "x_physical", "u"}, rows));
    emit_plotdata({"x", "u"}, {x, u}, out + "/pullback_profile.dat");
    return 0;
}

std::vector<std::string> verdict_row(double mu, double h0, double amplitude,
                                     const kppfb_verdict& v, const std::string& reason) {
    return {fmt(mu), fmt(h0), fmt(amplitude), outcome_str(v.outcome),
            fmt(v.final_h), fmt(v.final_sup_u), reason};
}

int cmd_classify(const ExperimentConfig& cfg, const std::string& out, bool verbose) {
    auto traj = run_front(cfg, cfg.g0.has_value());
    kppfb_verdict v{};
    const auto th = thresholds(cfg);
    check(kppfb_classify(traj.get(), cfg.l_star, &th, &v));
    if (verbose) std::cerr << "verdict: " << outcome_str(v.outcome) << "\n";
    write_file_atomic(
        out + "/verdict.csv",
        csv_table({"mu", "h0", "amplitude", "outcome", "final_h", "final_sup_u", "stop_reason"},
                  {verdict_row(cfg.mu, cfg.h0, cfg.amplitude, v, stop_name(v.stop_reason))}));
    return 0;
}

int cmd_critical_mu(const ExperimentConfig& cfg, const std::string& out, bool verbose) {
    auto reaction = make_reaction(cfg);
    auto params = front_params(cfg, cfg.g0.has_value());
    auto stop = stop_params(cfg);
    const auto th = thresholds(cfg);
    kppfb_mu_result* res = nullptr;
    check(kppfb_critical_mu(reaction.get(), &params, cfg.lo, cfg.hi, cfg.tol, cfg.l_star, &stop,
                            &th, &res));
    std::unique_ptr<kppfb_mu_result, decltype(&kppfb_mu_result_free)> guard(res,
                                                                            kppfb_mu_result_free);

    double lo = 0, hi = 0;
    int iterations = 0;
    check(kppfb_mu_result_bracket(res, &lo, &hi, &iterations));
    if (verbose) std::cerr << "mu* in [" << fmt(lo) << ", " << fmt(hi) << "]\n";

    std::ostringstream os;
    os << "{\n  \"mu_lo\": " << fmt(lo) << ",\n  \"mu_hi\": " << fmt(hi)
       << ",\n  \"iterations\": " << iterations << ",\n  \"probes\": [\n";
    const long count = kppfb_mu_result_probe_count(res);
    for (long i = 0; i < count; ++i) {
        double mu = 0, final_h = 0, t_used = 0;
        int outcome = 0;
        check(kppfb_mu_result_probe(res, i, &mu, &outcome, &final_h, &t_used));
        os << "    {\"mu\": " << fmt(mu) << ", \"outcome\": \"" << outcome_str(outcome)
           << "\", \"final_h\": " << fmt(final_h) << ", \"t_max_used\": " << fmt(t_used) << "}"
           << (i + 1 < count ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    write_file_atomic(out + "/critical_mu.json", os.str());
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& out, int jobs, bool verbose) {
    auto reaction = make_reaction(cfg);
    auto params = front_params(cfg, false);
    auto stop = stop_params(cfg);
    const auto th = thresholds(cfg);
    kppfb_sweep_result* res = nullptr;
    check(kppfb_sweep(reaction.get(), cfg.sweep_mu.data(),
                      static_cast<int>(cfg.sweep_mu.size()), cfg.sweep_h0.data(),
                      static_cast<int>(cfg.sweep_h0.size()), cfg.sweep_amplitude.data(),
                      static_cast<int>(cfg.sweep_amplitude.size()), cfg.l_star, &params, &stop,
                      &th, jobs, &res));
    std::unique_ptr<kppfb_sweep_result, decltype(&kppfb_sweep_result_free)> guard(
        res, kppfb_sweep_result_free);

    const long n = kppfb_sweep_size(res);
    std::vector<std::vector<std::string>> rows;
    std::vector<double> col_mu, col_h0, col_amp, col_outcome, col_h, col_u;
    char err[256];
    for (long i = 0; i < n; ++i) {
        double mu = 0, h0 = 0, amp = 0;
        kppfb_verdict v{};
        check(kppfb_sweep_cell(res, i, &mu, &h0, &amp, &v, err, sizeof(err)));
        const bool failed = err[0] != '\0';
        rows.push_back(verdict_row(mu, h0, amp, v, failed ? err : stop_name(v.stop_reason)));
        if (failed) rows.back()[3] = "error";
        col_mu.push_back(mu);
        col_h0.push_back(h0);
        col_amp.push_back(amp);
        col_outcome.push_back(failed ? -1.0 : v.outcome);
        col_h.push_back(v.final_h);
        col_u.push_back(v.final_sup_u);
    }
    write_file_atomic(out + "/sweep.csv",
                      csv_table({"mu", "h0", "amplitude", "outcome", "final_h", "final_sup_u",
                                 "stop_reason"},
                                rows));
    emit_plotdata({"mu", "h0", "amplitude", "outcome", "final_h", "final_sup_u"},
                  {col_mu, col_h0, col_amp, col_outcome, col_h, col_u}, out + "/sweep.dat");
    if (verbose) std::cerr << n << " sweep cells written\n";
    return 0;
}

} // namespace

int run_command(const ExperimentConfig& cfg, const std::string& out_dir, int jobs, bool verbose) {
    fs::create_directories(out_dir);
    try {
        if (cfg.command == "lyapunov") return cmd_lyapunov(cfg, out_dir, verbose);
        if (cfg.command == "critical-length") return cmd_critical_length(cfg, out_dir, verbose);
        if (cfg.command == "simulate") return cmd_simulate(cfg, out_dir, false);
        if (cfg.command == "double-front") return cmd_simulate(cfg, out_dir, true);
        if (cfg.command == "pullback") return cmd_pullback(cfg, out_dir, verbose);
        if (cfg.command == "classify") return cmd_classify(cfg, out_dir, verbose);
        if (cfg.command == "critical-mu") return cmd_critical_mu(cfg, out_dir, verbose);
        if (cfg.command == "sweep") return cmd_sweep(cfg, out_dir, jobs, verbose);
        throw CommandFailure{2, "unknown command '" + cfg.command + "'"};
    } catch (const CommandFailure& f) {
        std::cerr << "error: " << f.message << "\n";
        write_error_json(out_dir + "/error.json", f.exit_code, f.message, cfg.command);
        return f.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        write_error_json(out_dir + "/error.json", 1, e.what(), cfg.command);
        return 1;
    }
}

} // namespace kppfbcli
