#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kppfb/asymptotics.hpp"
#include "kppfb/coefficients.hpp"
#include "kppfb/stefan.hpp"

namespace kppfb {

enum class Outcome { Spreading, Vanishing, Undetermined };
const char* outcome_name(Outcome o);

struct Thresholds {
    double eps_hprime = 1e-5;
    double eps_u = 1e-4;
    double margin = -1.0;           // < 0 -> 0.05 * l_star
    double stagnation_window = 50.0;

    double margin_for(double l_star) const { return margin < 0.0 ? 0.05 * l_star : margin; }
};

struct DichotomyVerdict {
    Outcome outcome = Outcome::Undetermined;
    double final_h = 0.0;
    double final_g = 0.0; // 0 for single front
    double final_sup_u = 0.0;
    double final_hprime = 0.0;
    double l_star = 0.0;  // reference used (L* for double fronts)
    StopReason stop_reason = StopReason::TMax;
    std::string fingerprint;
};

/// Pure function of the trajectory and thresholds. Spreading once the front
/// extent (h, or h-g for double fronts) ends at or beyond l_star + margin;
/// Vanishing when the run stagnated below that line; Undetermined otherwise
/// (extend t_max and re-run).
DichotomyVerdict classify(const FrontTrajectory& traj, double l_star,
                          const Thresholds& thresholds);

/// Run geometry shared by the threshold search and the sweep.
struct FrontRunSpec {
    double h0 = 1.0;
    std::optional<double> g0;  // set for double-front runs
    double amplitude = 1.0;
    int cells = 0;   // 0 -> default resolution
    double dt = 0.0; // 0 -> default step
};

struct MuProbe {
    double mu = 0.0;
    Outcome outcome = Outcome::Undetermined;
    double final_h = 0.0;
    double t_max_used = 0.0;
};

struct CriticalMuResult {
    double mu_lo = 0.0;
    double mu_hi = 0.0;
    DichotomyVerdict verdict_lo, verdict_hi;
    int iterations = 0;
    std::vector<MuProbe> probes;
};

/// Bisection for the critical expansion coefficient: requires h0 < l_star,
/// Vanishing at mu_lo and Spreading at mu_hi. Probes whose runs linger are
/// retried with doubled t_max (up to 16x) before giving up; the recorded
/// verdicts must be monotone in mu.
CriticalMuResult critical_mu(const KppReaction& f, const FrontRunSpec& spec, double mu_lo,
                             double mu_hi, double tol, double l_star, const StopRule& stop,
                             const Thresholds& thresholds);

/// classify() on a fresh run at the given mu, extending t_max while the
/// verdict stays Undetermined (factor 2 up to max_extensions doublings).
DichotomyVerdict classify_run(const KppReaction& f, const FrontRunSpec& spec, double mu,
                              double l_star, const StopRule& stop, const Thresholds& thresholds,
                              int max_extensions = 4, FrontTrajectory* traj_out = nullptr);

struct AuditReport {
    double sup_deviation = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    bool clipped = false;          // window ran past h(T)-1 and was cut back
    double time_mismatch = 0.0;    // |trajectory final time - pullback time|
};

/// Sup over the window [0, M] of |u(T,.) - u*(T,.)| for a spreading run
/// against the half-line pullback profile (report-only).
AuditReport dichotomy_audit(const FrontTrajectory& traj, const PullbackResult& u_star,
                            double window_hi);

struct SweepCell {
    double mu = 0.0, h0 = 0.0, amplitude = 0.0;
    std::optional<DichotomyVerdict> verdict;
    std::string error; // set when the cell failed
};

/// Verdict per (mu, h0, amplitude) grid cell, rows ordered mu-major then h0
/// then amplitude regardless of jobs. Cell errors are recorded and the sweep
/// continues.
std::vector<SweepCell> sweep(const KppReaction& f, std::span<const double> mus,
                             std::span<const double> h0s, std::span<const double> amplitudes,
                             double l_star, const StopRule& stop, const Thresholds& thresholds,
                             const FrontRunSpec& base = {}, int jobs = 1);

} // namespace kppfb
