#include "kppfb/stefan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cn_core.hpp"

namespace kppfb {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRetreatTol = 1e-10; // front speeds below -this are an error

int default_cells(double physical_extent) {
    const int n = static_cast<int>(std::lround(256.0 * physical_extent));
    return std::clamp(n, 32, 8192);
}

Mesh1D unit_mesh(int cells) { return Mesh1D(1.0, cells); }

// Nonnegativity guard shared with the fixed-domain stepper.
void enforce_nonnegative(std::vector<double>& v) {
    for (double& x : v) {
        if (x < 0.0) {
            if (x < -1e-12)
                fail(ErrorCode::Numerical,
                     "front step produced a negative overshoot; dt too large for the reaction");
            x = 0.0;
        }
    }
}

// Normalizes tiny negative front speeds (roundoff of the slope stencil) to
// zero and rejects a genuinely retreating front.
double clamp_front_speed(double speed, const char* which) {
    if (speed < 0.0) {
        if (speed < -kRetreatTol)
            fail(ErrorCode::Numerical, std::string(which) +
                 " front retreated; the time step is too coarse for the Stefan coupling");
        return 0.0;
    }
    return speed;
}

struct FrontWorkspace {
    std::vector<double> drift, r1, r2, pred, out, sa, sb, xphys;
    detail::CnWorkspace cn;
};

// reaction row u*f(t, x_phys, u); spatial tables rebuilt only when the
// coefficient actually varies in space (x_phys moves with the front).
void reaction_row(const KppReaction& f, double t, std::span<const double> xphys,
                  std::span<const double> u, FrontWorkspace& ws, std::vector<double>& dst) {
    const int n = static_cast<int>(u.size());
    if (f.is_logistic()) {
        const bool sa_const = f.coeff_a().spatial().is_constant();
        const bool sb_const = f.coeff_b().spatial().is_constant();
        ws.sa.resize(n);
        ws.sb.resize(n);
        for (int j = 0; j < n; ++j) {
            ws.sa[j] = sa_const ? 1.0 : f.coeff_a().spatial()(xphys[j]);
            ws.sb[j] = sb_const ? 1.0 : f.coeff_b().spatial()(xphys[j]);
        }
        double ta, tb;
        f.temporal_factors(t, ta, tb);
        for (int j = 0; j < n; ++j) dst[j] = u[j] * (ta * ws.sa[j] - tb * ws.sb[j] * u[j]);
    } else {
        for (int j = 0; j < n; ++j) dst[j] = u[j] * f(t, xphys[j], u[j]);
    }
}

// Shared predictor-corrector body. For the single front the left end is a
// fixed Neumann wall (g frozen at 0 with zero speed).
void step_front(FrontState& s, const KppReaction& f, double dt, FrontWorkspace& ws) {
    if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::InvalidArgument, "dt must be > 0");
    const Mesh1D& mesh = s.profile.mesh();
    const int n = mesh.nodes();
    const double t = s.profile.time();
    const double w = s.width();

    // (1) front speeds from the current profile
    const double slope_r = front_derivative(s.profile, Side::Right);
    double hp = clamp_front_speed(-s.mu * slope_r / w, "right");
    double gp = 0.0;
    if (s.double_front) {
        const double slope_l = front_derivative(s.profile, Side::Left);
        gp = -clamp_front_speed(s.mu * slope_l / w, "left"); // gp <= 0
    }

    // (2) predicted geometry and midpoint values
    const double h_pred = s.h + dt * hp;
    const double g_pred = s.double_front ? s.g + dt * gp : 0.0;
    const double h_mid = s.h + 0.5 * dt * hp;
    const double g_mid = s.double_front ? s.g + 0.5 * dt * gp : 0.0;
    const double w_mid = s.double_front ? h_mid - g_mid : h_mid;
    if (!(w_mid > 0.0)) fail(ErrorCode::Numerical, "front domain collapsed");

    // (3) one IMEX step with the geometry frozen at midpoint values
    const double diffusion = 1.0 / (w_mid * w_mid);
    ws.drift.resize(n);
    ws.xphys.resize(n);
    const double dxi = mesh.dx();
    for (int j = 0; j < n; ++j) {
        const double xi = j * dxi;
        ws.drift[j] = s.double_front ? ((1.0 - xi) * gp + xi * hp) / w_mid : xi * hp / w_mid;
        ws.xphys[j] = s.double_front ? g_mid + xi * w_mid : xi * h_mid;
    }
    ws.r1.resize(n);
    ws.r2.resize(n);
    ws.pred.resize(n);
    ws.out.resize(n);
    auto u = s.profile.values();
    reaction_row(f, t, ws.xphys, u, ws, ws.r1);
    detail::cn_step(mesh, s.profile.bc(), u, ws.pred, dt, diffusion, ws.drift, {}, ws.r1, ws.cn);
    for (int j = 0; j < n; ++j) ws.pred[j] = 0.5 * (u[j] + ws.pred[j]);
    reaction_row(f, t + 0.5 * dt, ws.xphys, ws.pred, ws, ws.r2);
    detail::cn_step(mesh, s.profile.bc(), u, ws.out, dt, diffusion, ws.drift, {}, ws.r2, ws.cn);
    enforce_nonnegative(ws.out);
    s.profile.raw() = ws.out;
    s.profile.pin_dirichlet();

    // (4) corrected speeds from the new profile, trapezoid update of fronts
    const double w_pred = s.double_front ? h_pred - g_pred : h_pred;
    const double slope_r_new = front_derivative(s.profile, Side::Right);
    const double hp_new = clamp_front_speed(-s.mu * slope_r_new / w_pred, "right");
    s.h += 0.5 * dt * (hp + hp_new);
    s.hprime = hp_new;
    if (s.double_front) {
        const double slope_l_new = front_derivative(s.profile, Side::Left);
        const double gp_new = -clamp_front_speed(s.mu * slope_l_new / w_pred, "left");
        s.g += 0.5 * dt * (gp + gp_new);
        s.gprime = gp_new;
    }
    s.profile.set_time(t + dt);
}

void init_speeds(FrontState& s) {
    const double w = s.width();
    s.hprime = clamp_front_speed(-s.mu * front_derivative(s.profile, Side::Right) / w, "right");
    s.gprime = s.double_front
                   ? -clamp_front_speed(s.mu * front_derivative(s.profile, Side::Left) / w, "left")
                   : 0.0;
}

std::string make_fingerprint(const FrontState& s, const StopRule& stop, double dt) {
    std::ostringstream os;
    os.precision(12);
    os << (s.double_front ? "double" : "single") << ";h0=" << s.h;
    if (s.double_front) os << ";g0=" << s.g;
    os << ";mu=" << s.mu << ";n=" << s.profile.mesh().cells << ";dt=" << dt
       << ";t_max=" << stop.t_max << ";h_max=" << stop.h_max;
    return os.str();
}

} // namespace

double front_derivative(const GridFunction& profile, Side side) {
    const int n = profile.nodes();
    if (n < 3) fail(ErrorCode::InvalidArgument, "profile too short for the boundary stencil");
    const double dx = profile.mesh().dx();
    if (side == Side::Right)
        return (profile[n - 3] - 4.0 * profile[n - 2] + 3.0 * profile[n - 1]) / (2.0 * dx);
    return (-3.0 * profile[0] + 4.0 * profile[1] - profile[2]) / (2.0 * dx);
}

double FrontState::x_physical(int j) const {
    const double xi = profile.mesh().x(j);
    return double_front ? g + xi * (h - g) : xi * h;
}

double FrontState::u_at(double x) const {
    const double lo = double_front ? g : 0.0;
    if (x < lo || x > h) return 0.0;
    const double xi = (x - lo) / (h - lo);
    return profile.at(xi);
}

FrontState make_single_front(double h0, double mu, double amplitude, int cells) {
    if (!(h0 > 0.0)) fail(ErrorCode::InvalidArgument, "h0 must be positive");
    if (!(amplitude > 0.0)) fail(ErrorCode::InvalidArgument, "initial amplitude must be positive");
    const int n = cells > 0 ? cells : default_cells(h0);
    GridFunction v = GridFunction::sample(unit_mesh(n), BcTag::NeumannLeft_DirichletRight,
                                          [&](double xi) { return amplitude * std::cos(0.5 * kPi * xi); });
    return make_single_front(h0, mu, std::move(v));
}

FrontState make_single_front(double h0, double mu, GridFunction reference_profile) {
    if (!(h0 > 0.0)) fail(ErrorCode::InvalidArgument, "h0 must be positive");
    if (!(mu >= 0.0)) fail(ErrorCode::InvalidArgument, "mu must be nonnegative");
    if (reference_profile.bc() != BcTag::NeumannLeft_DirichletRight)
        fail(ErrorCode::InvalidArgument, "single-front reference profile needs mixed bc");
    if (reference_profile.min_value() < 0.0)
        fail(ErrorCode::InvalidArgument, "initial profile must be nonnegative");
    FrontState s{.profile = std::move(reference_profile), .h = h0, .g = 0.0,
                 .double_front = false, .mu = mu};
    init_speeds(s);
    return s;
}

FrontState make_double_front(double g0, double h0, double mu, double amplitude, int cells) {
    if (!(g0 < h0)) fail(ErrorCode::InvalidArgument, "need g0 < h0");
    if (!(amplitude > 0.0)) fail(ErrorCode::InvalidArgument, "initial amplitude must be positive");
    const int n = cells > 0 ? cells : default_cells(h0 - g0);
    GridFunction v = GridFunction::sample(unit_mesh(n), BcTag::Dirichlet_Dirichlet,
                                          [&](double xi) { return amplitude * std::sin(kPi * xi); });
    return make_double_front(g0, h0, mu, std::move(v));
}

FrontState make_double_front(double g0, double h0, double mu, GridFunction reference_profile) {
    if (!(g0 < h0)) fail(ErrorCode::InvalidArgument, "need g0 < h0");
    if (!(mu >= 0.0)) fail(ErrorCode::InvalidArgument, "mu must be nonnegative");
    if (reference_profile.bc() != BcTag::Dirichlet_Dirichlet)
        fail(ErrorCode::InvalidArgument, "double-front reference profile needs Dirichlet bc");
    if (reference_profile.min_value() < 0.0)
        fail(ErrorCode::InvalidArgument, "initial profile must be nonnegative");
    FrontState s{.profile = std::move(reference_profile), .h = h0, .g = g0,
                 .double_front = true, .mu = mu};
    init_speeds(s);
    return s;
}

void step_single_front(FrontState& state, const KppReaction& f, double dt) {
    if (state.double_front) fail(ErrorCode::InvalidArgument, "state is a double-front state");
    FrontWorkspace ws;
    step_front(state, f, dt, ws);
}

void step_double_front(FrontState& state, const KppReaction& f, double dt) {
    if (!state.double_front) fail(ErrorCode::InvalidArgument, "state is a single-front state");
    FrontWorkspace ws;
    step_front(state, f, dt, ws);
}

double default_front_dt(const FrontState& state, const KppReaction& f) {
    const double u_max = std::max(state.profile.sup_norm(), f.carrying_bound());
    const double bound = f.sup_abs_f(std::max(u_max, 1e-12));
    double dt = state.profile.mesh().dx();
    if (bound > 0.0) dt = std::min(dt, 0.25 / bound);
    return dt;
}

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::TMax: return "t_max";
        case StopReason::HMax: return "h_max";
        case StopReason::Stagnation: return "stagnation";
        case StopReason::StepError: return "step_error";
    }
    return "?";
}

FrontTrajectory run_until(FrontState start, const KppReaction& f, const StopRule& stop,
                          std::span<const double> snapshot_times, double dt) {
    if (!(stop.t_max >= 0.0) || !(stop.h_max > 0.0) || !(stop.eps_hprime > 0.0) ||
        !(stop.eps_u > 0.0) || !(stop.stagnation_window > 0.0))
        fail(ErrorCode::InvalidArgument, "stop thresholds must be positive");
    if (dt <= 0.0) dt = default_front_dt(start, f);

    FrontTrajectory traj;
    traj.double_front = start.double_front;
    traj.fingerprint = make_fingerprint(start, stop, dt);

    std::vector<double> snaps(snapshot_times.begin(), snapshot_times.end());
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;

    auto record = [&](const FrontState& s) {
        traj.times.push_back(s.time());
        traj.h.push_back(s.h);
        traj.g.push_back(s.double_front ? s.g : 0.0);
        traj.sup_u.push_back(s.profile.sup_norm());
        traj.hprime.push_back(s.hprime);
    };

    FrontWorkspace ws;
    FrontState s = std::move(start);
    const double t0 = s.time();
    record(s);
    while (next_snap < snaps.size() && snaps[next_snap] <= t0 + 1e-12) {
        traj.snapshots.push_back(s);
        ++next_snap;
    }

    double last_record = s.time();
    double stagnant_since = -1.0; // -1: conditions not currently met
    traj.stop_reason = StopReason::TMax;

    while (true) {
        if (s.time() >= t0 + stop.t_max - 1e-12) {
            traj.stop_reason = StopReason::TMax;
            break;
        }
        const double extent = s.double_front ? s.h - s.g : s.h;
        if (extent >= stop.h_max) {
            traj.stop_reason = StopReason::HMax;
            break;
        }

        double step_dt = std::min(dt, t0 + stop.t_max - s.time());
        if (next_snap < snaps.size())
            step_dt = std::min(step_dt, std::max(snaps[next_snap] - s.time(), 1e-12));

        try {
            step_front(s, f, step_dt, ws);
        } catch (const Error& e) {
            traj.stop_reason = StopReason::StepError;
            traj.error = e.what();
            break;
        }

        if (next_snap < snaps.size() && s.time() >= snaps[next_snap] - 1e-9) {
            traj.snapshots.push_back(s);
            ++next_snap;
        }
        if (stop.record_dt <= 0.0 || s.time() - last_record >= stop.record_dt - 1e-12) {
            record(s);
            last_record = s.time();
        }

        const double speed = s.double_front ? std::max(s.hprime, -s.gprime) : s.hprime;
        if (speed < stop.eps_hprime && s.profile.sup_norm() < stop.eps_u) {
            if (stagnant_since < 0.0) stagnant_since = s.time();
            if (s.time() - stagnant_since >= stop.stagnation_window) {
                traj.stop_reason = StopReason::Stagnation;
                break;
            }
        } else {
            stagnant_since = -1.0;
        }
    }

    if (traj.times.back() != s.time()) record(s);
    traj.final_state = std::move(s);
    return traj;
}

} // namespace kppfb
