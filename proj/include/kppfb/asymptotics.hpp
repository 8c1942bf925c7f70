#pragma once

#include <optional>
#include <vector>

#include "kppfb/coefficients.hpp"
#include "kppfb/grid.hpp"
#include "kppfb/parabolic.hpp"

namespace kppfb {

/// Part metric rho(u1,u2) = ln max(sup u1/u2, sup u2/u1, 1) over the compared
/// nodes (Dirichlet end nodes excluded by one node). Both functions must be
/// strictly positive there.
double part_metric(const GridFunction& u1, const GridFunction& u2);

struct PartMetricTrace {
    std::vector<double> times;
    std::vector<double> rho;
    std::optional<std::size_t> first_violation; // index where rho increased beyond slack
};

/// rho sampled along two runs on a common fixed domain; flags the first
/// sample where the non-increase rho(t2) <= rho(t1) + slack fails.
PartMetricTrace part_metric_trace(const FixedTrajectory& run1, const FixedTrajectory& run2,
                                  double slack = 1e-6);

enum class PullbackDomain {
    BoundedMixed, // (0, l) with u_x(0)=0, u(l)=0
    HalfLine,     // (0, L) truncation with no-flux walls
};

struct PullbackOptions {
    double length = 40.0;   // l (bounded) or truncation L (half line)
    int n = 0;              // total cells; 0 -> 256 per unit length
    double dt = 0.0;        // 0 -> dx
    std::vector<double> depths = {25.0, 50.0, 100.0, 200.0, 400.0};
    double tol = 1e-4;      // stop when successive depths agree this well
    double at_time = 0.0;   // the profile is produced at this physical time
    double lambda_horizon = 200.0; // exponent check horizon (bounded domains)
};

struct PullbackResult {
    GridFunction profile;      // at time at_time
    double depth_used = 0.0;
    double last_change = 0.0;  // sup difference between the last two depths
    double interior_infimum = 0.0;
    bool converged = false;
};

/// Pullback construction of the positive almost periodic solution: for each
/// depth T integrate from at_time - T with data identically carrying_bound(f)
/// and keep the profile at at_time. Successive depths must decrease nodewise
/// (up to 1e-8); convergence is declared when they agree within tol. On a
/// bounded mixed domain a negative principal exponent is rejected up front,
/// and a collapsing limit reports the vanishing regime.
PullbackResult pullback_positive_solution(const KppReaction& f, PullbackDomain domain,
                                          const PullbackOptions& opts = {});

struct UniquenessReport {
    double sup_difference = 0.0;
    double part_metric_value = 0.0;
};

/// Runs both initial data to time T on the same domain and reports how far
/// apart they end up (report-only; thresholds are the caller's business).
UniquenessReport uniqueness_check(const KppReaction& f, const GridFunction& u0_a,
                                  const GridFunction& u0_b, double T, double dt = 0.0);

} // namespace kppfb
