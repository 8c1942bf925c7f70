#include "kppfb/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cn_core.hpp"

namespace kppfb {

namespace {

constexpr double kOvershootFloor = -1e-12;

void check_dt(double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::InvalidArgument, "dt must be > 0");
}

// Clamp the harmless sub-roundoff negatives the CN solve can produce and
// reject anything larger (the reaction step outran its stability bound).
void enforce_nonnegative(std::vector<double>& v) {
    for (double& x : v) {
        if (x < 0.0) {
            if (x < kOvershootFloor)
                fail(ErrorCode::Numerical,
                     "semilinear step produced a negative overshoot; dt too large for the reaction");
            x = 0.0;
        }
    }
}

} // namespace

struct LinearPropagator::Impl {
    Mesh1D mesh;
    BcTag bc;
    SeparableCoefficient a;
    double gamma;
    std::vector<double> spatial; // S(x_j)
    std::vector<double> drift;
    std::vector<double> react;
    std::vector<double> out;
    detail::CnWorkspace ws;

    Impl(Mesh1D m, BcTag b, SeparableCoefficient coeff, double g)
        : mesh(m), bc(b), a(std::move(coeff)), gamma(g) {
        const int n = mesh.nodes();
        spatial.resize(n);
        for (int j = 0; j < n; ++j) spatial[j] = a.spatial()(mesh.x(j));
        if (gamma != 0.0) drift.assign(n, gamma);
        react.resize(n);
        out.resize(n);
    }

    void step_at(GridFunction& state, double t_react, double dt, double theta) {
        const double ta = a.temporal()(t_react);
        const int n = mesh.nodes();
        for (int j = 0; j < n; ++j) react[j] = ta * spatial[j];
        detail::cn_step(mesh, bc, state.values(), out, dt, 1.0, drift, react, {}, ws, theta);
        state.raw() = out;
        state.pin_dirichlet();
    }
};

LinearPropagator::LinearPropagator(Mesh1D mesh, BcTag bc, SeparableCoefficient a, double gamma)
    : impl_(std::make_unique<Impl>(mesh, bc, std::move(a), gamma)) {}
LinearPropagator::~LinearPropagator() = default;
LinearPropagator::LinearPropagator(LinearPropagator&&) noexcept = default;
LinearPropagator& LinearPropagator::operator=(LinearPropagator&&) noexcept = default;

void LinearPropagator::step(GridFunction& state, double dt) {
    check_dt(dt);
    impl_->step_at(state, state.time() + 0.5 * dt, dt, 0.5);
    state.set_time(state.time() + dt);
}

void LinearPropagator::step_frozen(GridFunction& state, double t_freeze, double dt) {
    check_dt(dt);
    impl_->step_at(state, t_freeze, dt, 0.5);
}

void LinearPropagator::step_damped(GridFunction& state, double dt) {
    check_dt(dt);
    const double q = 0.25 * dt;
    for (int k = 0; k < 4; ++k) {
        impl_->step_at(state, state.time() + 0.5 * q, q, 1.0);
        state.set_time(state.time() + q);
    }
}

void LinearPropagator::step_frozen_damped(GridFunction& state, double t_freeze, double dt) {
    check_dt(dt);
    const double q = 0.25 * dt;
    for (int k = 0; k < 4; ++k) impl_->step_at(state, t_freeze, q, 1.0);
}

GridFunction step_linear(const GridFunction& state, const SeparableCoefficient& a,
                         double gamma, double dt) {
    LinearPropagator prop(state.mesh(), state.bc(), a, gamma);
    GridFunction next = state;
    prop.step(next, dt);
    return next;
}

struct SemilinearPropagator::Impl {
    Mesh1D mesh;
    BcTag bc;
    KppReaction f;
    bool logistic;
    std::vector<double> sa, sb;  // spatial factors of a and b on the mesh
    std::vector<double> r1, r2, pred, out;
    detail::CnWorkspace ws;

    Impl(Mesh1D m, BcTag b, KppReaction reaction)
        : mesh(m), bc(b), f(std::move(reaction)), logistic(f.is_logistic()) {
        const int n = mesh.nodes();
        if (logistic) {
            sa.resize(n);
            sb.resize(n);
            for (int j = 0; j < n; ++j) {
                sa[j] = f.coeff_a().spatial()(mesh.x(j));
                sb[j] = f.coeff_b().spatial()(mesh.x(j));
            }
        }
        r1.resize(n);
        r2.resize(n);
        pred.resize(n);
        out.resize(n);
    }

    // reaction term u*f(t,x,u) over the mesh row
    void reaction_row(double t, std::span<const double> u, std::vector<double>& dst) {
        const int n = mesh.nodes();
        if (logistic) {
            double ta, tb;
            f.temporal_factors(t, ta, tb);
            for (int j = 0; j < n; ++j) dst[j] = u[j] * (ta * sa[j] - tb * sb[j] * u[j]);
        } else {
            for (int j = 0; j < n; ++j) dst[j] = u[j] * f(t, mesh.x(j), u[j]);
        }
    }

    void step(GridFunction& state, double dt) {
        const double t = state.time();
        auto u = state.values();
        reaction_row(t, u, r1);
        detail::cn_step(mesh, bc, u, pred, dt, 1.0, {}, {}, r1, ws);
        const int n = mesh.nodes();
        for (int j = 0; j < n; ++j) pred[j] = 0.5 * (u[j] + pred[j]);
        reaction_row(t + 0.5 * dt, pred, r2);
        detail::cn_step(mesh, bc, u, out, dt, 1.0, {}, {}, r2, ws);
        enforce_nonnegative(out);
        state.raw() = out;
        state.pin_dirichlet();
        state.set_time(t + dt);
    }
};

SemilinearPropagator::SemilinearPropagator(Mesh1D mesh, BcTag bc, KppReaction f)
    : impl_(std::make_unique<Impl>(mesh, bc, std::move(f))) {}
SemilinearPropagator::~SemilinearPropagator() = default;
SemilinearPropagator::SemilinearPropagator(SemilinearPropagator&&) noexcept = default;
SemilinearPropagator& SemilinearPropagator::operator=(SemilinearPropagator&&) noexcept = default;

void SemilinearPropagator::step(GridFunction& state, double dt) {
    check_dt(dt);
    if (state.min_value() < 0.0)
        fail(ErrorCode::InvalidArgument, "semilinear step requires a nonnegative state");
    impl_->step(state, dt);
}

const KppReaction& SemilinearPropagator::reaction() const { return impl_->f; }

GridFunction step_semilinear(const GridFunction& state, const KppReaction& f, double dt) {
    SemilinearPropagator prop(state.mesh(), state.bc(), f);
    GridFunction next = state;
    prop.step(next, dt);
    return next;
}

FixedTrajectory run_semilinear(const KppReaction& f, GridFunction u0, double dt,
                               std::span<const double> sample_times) {
    if (dt <= 0.0) dt = u0.mesh().dx();
    SemilinearPropagator prop(u0.mesh(), u0.bc(), f);

    FixedTrajectory traj;
    traj.mesh = u0.mesh();
    traj.bc = u0.bc();

    GridFunction state = std::move(u0);
    for (double ts : sample_times) {
        if (ts < state.time() - 1e-12)
            fail(ErrorCode::InvalidArgument, "sample times must be increasing and >= start time");
        const double span = ts - state.time();
        if (span > 1e-12) {
            const double t0 = state.time();
            const long steps = std::max(1L, std::lround(std::ceil(span / dt - 1e-9)));
            const double h = span / static_cast<double>(steps);
            for (long k = 0; k < steps; ++k) {
                prop.step(state, h);
                state.set_time(t0 + (k + 1) * h);
            }
        }
        state.set_time(ts);
        traj.times.push_back(ts);
        traj.profiles.emplace_back(state.values().begin(), state.values().end());
    }
    return traj;
}

GridFunction advance_semilinear(const KppReaction& f, GridFunction state, double t_end,
                                double dt) {
    const double times[] = {t_end};
    FixedTrajectory traj = run_semilinear(f, std::move(state), dt, times);
    return traj.profile(0);
}

} // namespace kppfb
