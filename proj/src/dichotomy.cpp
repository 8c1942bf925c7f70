#include "kppfb/dichotomy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace kppfb {

namespace {

FrontState make_state(const FrontRunSpec& spec, double mu) {
    if (spec.g0)
        return make_double_front(*spec.g0, spec.h0, mu, spec.amplitude, spec.cells);
    return make_single_front(spec.h0, mu, spec.amplitude, spec.cells);
}

FrontTrajectory run_spec(const KppReaction& f, const FrontRunSpec& spec, double mu,
                         const StopRule& stop) {
    return run_until(make_state(spec, mu), f, stop, {}, spec.dt);
}

void check_probe_monotonicity(const std::vector<MuProbe>& probes) {
    // no Vanishing may sit above a Spreading probe
    double lowest_spreading = std::numeric_limits<double>::infinity();
    for (const auto& p : probes)
        if (p.outcome == Outcome::Spreading) lowest_spreading = std::min(lowest_spreading, p.mu);
    for (const auto& p : probes)
        if (p.outcome == Outcome::Vanishing && p.mu > lowest_spreading)
            fail(ErrorCode::Numerical,
                 "verdicts are not monotone in mu; threshold below numerical resolution");
}

} // namespace

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Spreading: return "spreading";
        case Outcome::Vanishing: return "vanishing";
        case Outcome::Undetermined: return "undetermined";
    }
    return "?";
}

DichotomyVerdict classify(const FrontTrajectory& traj, double l_star,
                          const Thresholds& thresholds) {
    if (traj.size() == 0) fail(ErrorCode::InvalidArgument, "cannot classify an empty trajectory");
    if (!(l_star > 0.0)) fail(ErrorCode::InvalidArgument, "l_star must be positive");

    const FrontState& fs = traj.final_state;
    DichotomyVerdict v;
    v.final_h = fs.h;
    v.final_g = traj.double_front ? fs.g : 0.0;
    v.final_sup_u = fs.profile.sup_norm();
    v.final_hprime = fs.hprime;
    v.l_star = l_star;
    v.stop_reason = traj.stop_reason;
    v.fingerprint = traj.fingerprint;

    const double extent = traj.double_front ? fs.h - fs.g : fs.h;
    const double line = l_star + thresholds.margin_for(l_star);
    if (extent >= line)
        v.outcome = Outcome::Spreading;
    else if (traj.stop_reason == StopReason::Stagnation)
        v.outcome = Outcome::Vanishing;
    else
        v.outcome = Outcome::Undetermined;
    return v;
}

DichotomyVerdict classify_run(const KppReaction& f, const FrontRunSpec& spec, double mu,
                              double l_star, const StopRule& stop, const Thresholds& thresholds,
                              int max_extensions, FrontTrajectory* traj_out) {
    StopRule local = stop;
    local.eps_hprime = thresholds.eps_hprime;
    local.eps_u = thresholds.eps_u;
    local.stagnation_window = thresholds.stagnation_window;
    for (int attempt = 0;; ++attempt) {
        FrontTrajectory traj = run_spec(f, spec, mu, local);
        DichotomyVerdict v = classify(traj, l_star, thresholds);
        if (v.outcome != Outcome::Undetermined || attempt >= max_extensions) {
            if (traj_out) *traj_out = std::move(traj);
            return v;
        }
        local.t_max *= 2.0;
    }
}

CriticalMuResult critical_mu(const KppReaction& f, const FrontRunSpec& spec, double mu_lo,
                             double mu_hi, double tol, double l_star, const StopRule& stop,
                             const Thresholds& thresholds) {
    if (!(0.0 <= mu_lo && mu_lo < mu_hi)) fail(ErrorCode::InvalidArgument, "need 0 <= mu_lo < mu_hi");
    if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
    if (!(spec.h0 < l_star) && !spec.g0)
        fail(ErrorCode::InvalidArgument, "critical mu is defined for h0 < l_star");
    if (spec.g0 && !(spec.h0 - *spec.g0 < l_star))
        fail(ErrorCode::InvalidArgument, "critical mu is defined for h0 - g0 < L_star");

    CriticalMuResult res;
    res.mu_lo = mu_lo;
    res.mu_hi = mu_hi;

    auto probe = [&](double mu) {
        FrontTrajectory traj;
        DichotomyVerdict v = classify_run(f, spec, mu, l_star, stop, thresholds, 4, &traj);
        double used = traj.times.empty() ? 0.0 : traj.times.back() - traj.times.front();
        res.probes.push_back({mu, v.outcome, v.final_h, used});
        check_probe_monotonicity(res.probes);
        return v;
    };

    res.verdict_lo = probe(mu_lo);
    if (res.verdict_lo.outcome != Outcome::Vanishing)
        fail(ErrorCode::InvalidArgument, "bracket does not straddle: mu_lo probe is not vanishing");
    res.verdict_hi = probe(mu_hi);
    if (res.verdict_hi.outcome != Outcome::Spreading)
        fail(ErrorCode::InvalidArgument, "bracket does not straddle: mu_hi probe is not spreading");

    while (res.mu_hi - res.mu_lo > tol) {
        const double mid = 0.5 * (res.mu_lo + res.mu_hi);
        DichotomyVerdict v = probe(mid);
        if (v.outcome == Outcome::Undetermined)
            fail(ErrorCode::Numerical,
                 "probe stayed undetermined after t_max extension; cannot shrink the bracket");
        ++res.iterations;
        if (v.outcome == Outcome::Spreading) {
            res.mu_hi = mid;
            res.verdict_hi = v;
        } else {
            res.mu_lo = mid;
            res.verdict_lo = v;
        }
    }
    return res;
}

AuditReport dichotomy_audit(const FrontTrajectory& traj, const PullbackResult& u_star,
                            double window_hi) {
    AuditReport rep;
    const FrontState& fs = traj.final_state;
    rep.time_mismatch = std::abs(fs.time() - u_star.profile.time());
    rep.window_lo = 0.0;
    rep.window_hi = window_hi;
    const double reach = fs.h - 1.0;
    if (window_hi > reach) {
        rep.window_hi = std::max(reach, 0.0);
        rep.clipped = true;
    }
    const int samples = 512;
    for (int i = 0; i <= samples; ++i) {
        const double x = rep.window_lo + (rep.window_hi - rep.window_lo) * i / samples;
        rep.sup_deviation = std::max(rep.sup_deviation, std::abs(fs.u_at(x) - u_star.profile.at(x)));
    }
    return rep;
}

std::vector<SweepCell> sweep(const KppReaction& f, std::span<const double> mus,
                             std::span<const double> h0s, std::span<const double> amplitudes,
                             double l_star, const StopRule& stop, const Thresholds& thresholds,
                             const FrontRunSpec& base, int jobs) {
    if (mus.empty() || h0s.empty() || amplitudes.empty())
        fail(ErrorCode::InvalidArgument, "sweep grid must be nonempty");

    std::vector<SweepCell> cells;
    cells.reserve(mus.size() * h0s.size() * amplitudes.size());
    for (double mu : mus)
        for (double h0 : h0s)
            for (double amp : amplitudes) cells.push_back({mu, h0, amp, std::nullopt, {}});

    auto run_cell = [&](SweepCell& cell) {
        try {
            FrontRunSpec spec = base;
            spec.h0 = cell.h0;
            spec.amplitude = cell.amplitude;
            if (base.g0) spec.g0 = -cell.h0; // symmetric double-front sweeps
            FrontTrajectory traj = run_spec(f, spec, cell.mu, stop);
            cell.verdict = classify(traj, l_star, thresholds);
        } catch (const Error& e) {
            cell.error = e.what();
        }
    };

    jobs = std::max(1, jobs);
    if (jobs == 1 || cells.size() <= 1) {
        for (auto& cell : cells) run_cell(cell);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) return;
                run_cell(cells[i]);
            }
        };
        std::vector<std::thread> pool;
        const int k = std::min<std::size_t>(jobs, cells.size());
        pool.reserve(k);
        for (int i = 0; i < k; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return cells;
}

} // namespace kppfb
