#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kppfb/coefficients.hpp"
#include "kppfb/grid.hpp"

namespace kppfb {

enum class Side { Left, Right };

/// One-sided second-order three-point derivative of the profile at the
/// queried boundary, in reference coordinates (divide by the physical domain
/// length to get the physical slope).
double front_derivative(const GridFunction& profile, Side side);

/// Moving-domain state in front-fixing coordinates: the profile lives on the
/// unit reference mesh, xi = x/h (single front) or xi = (x-g)/(h-g) (double
/// front). h strictly increases along trajectories, g strictly decreases.
struct FrontState {
    GridFunction profile; // on [0,1]; mixed bc (single) or Dirichlet (double)
    double h = 1.0;
    double g = 0.0;          // left front; only meaningful when double_front
    bool double_front = false;
    double mu = 1.0;
    double hprime = 0.0;     // last corrected front speeds (physical)
    double gprime = 0.0;

    double time() const { return profile.time(); }
    double width() const { return double_front ? h - g : h; }
    /// Physical coordinate of reference node j.
    double x_physical(int j) const;
    /// Linear interpolation of u at physical x (0 outside the domain).
    double u_at(double x) const;
};

/// Default initial data A*cos(pi*x/(2*h0)), which satisfies u'(0)=u(h0)=0.
FrontState make_single_front(double h0, double mu, double amplitude, int cells = 0);
/// Single front with caller-supplied reference profile v(xi) = u(h0*xi).
FrontState make_single_front(double h0, double mu, GridFunction reference_profile);
/// Default double-front data A*sin(pi*xi) on [g0, h0] (vanishes at both fronts).
FrontState make_double_front(double g0, double h0, double mu, double amplitude, int cells = 0);
FrontState make_double_front(double g0, double h0, double mu, GridFunction reference_profile);

/// One predictor-corrector step of the single-front problem
///   v_t = h^-2 v_xixi + xi (h'/h) v_xi + v f(t, h xi, v),  h' = -(mu/h) v_xi(1)
/// with the geometry frozen at midpoint values for the PDE solve and the
/// front advanced by the trapezoid of predicted and corrected speeds.
void step_single_front(FrontState& state, const KppReaction& f, double dt);

/// Double-front analogue with both Stefan conditions updated the same way.
void step_double_front(FrontState& state, const KppReaction& f, double dt);

enum class StopReason { TMax, HMax, Stagnation, StepError };
const char* stop_reason_name(StopReason r);

struct StopRule {
    double t_max = 200.0;
    double h_max = 1e9;            // bound on h (single) or h-g (double)
    double eps_hprime = 1e-5;      // stagnation: front speed threshold
    double eps_u = 1e-4;           // stagnation: amplitude threshold
    double stagnation_window = 50; // both must hold this long
    double record_dt = 0.0;        // sample spacing; 0 -> every step
};

struct FrontTrajectory {
    bool double_front = false;
    std::vector<double> times, h, g, sup_u, hprime;
    std::vector<FrontState> snapshots; // at requested times
    FrontState final_state;
    StopReason stop_reason = StopReason::TMax;
    std::string error;      // set when stop_reason == StepError
    std::string fingerprint;

    std::size_t size() const { return times.size(); }
};

/// Iterate front steps until a stop rule fires; records the (t, h, g, sup u,
/// h') series, snapshots at the requested times, and the reason for
/// stopping. Step failures are reported via stop_reason = StepError with the
/// partial trajectory attached. dt <= 0 selects the reference-mesh spacing
/// capped by the reaction stability bound.
FrontTrajectory run_until(FrontState start, const KppReaction& f, const StopRule& stop,
                          std::span<const double> snapshot_times = {}, double dt = 0.0);

/// Default time step for a front state (reference dx capped by 1/(4 sup|f|)).
double default_front_dt(const FrontState& state, const KppReaction& f);

} // namespace kppfb
