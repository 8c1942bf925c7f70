#pragma once

#include <memory>
#include <span>
#include <vector>

#include "kppfb/coefficients.hpp"
#include "kppfb/grid.hpp"

namespace kppfb {

/// One Crank-Nicolson step of v_t = v_xx + gamma*v_x + a(t,x)*v with the
/// coefficient frozen at the midpoint time. Fails on a zero pivot in the
/// tridiagonal solve.
GridFunction step_linear(const GridFunction& state, const SeparableCoefficient& a,
                         double gamma, double dt);

/// One IMEX step of u_t = u_xx + u*f(t,x,u): diffusion Crank-Nicolson,
/// reaction explicit at the midpoint via one predictor pass. Preserves
/// nonnegativity for dt <= 1/(2*sup|f|); fails on overshoot below -1e-12.
GridFunction step_semilinear(const GridFunction& state, const KppReaction& f, double dt);

/// Repeated linear steps with cached spatial tables and scratch reuse.
class LinearPropagator {
public:
    LinearPropagator(Mesh1D mesh, BcTag bc, SeparableCoefficient a, double gamma = 0.0);
    ~LinearPropagator();
    LinearPropagator(LinearPropagator&&) noexcept;
    LinearPropagator& operator=(LinearPropagator&&) noexcept;

    void step(GridFunction& state, double dt);
    /// Step with the coefficient frozen at time t_freeze (autonomous flow);
    /// does not advance the state clock.
    void step_frozen(GridFunction& state, double t_freeze, double dt);
    /// Advance by dt as four backward-Euler quarter steps. L-stable, so it
    /// damps the high-frequency modes Crank-Nicolson leaves nearly neutral;
    /// used to open each renormalization window of the exponent estimator.
    void step_damped(GridFunction& state, double dt);
    void step_frozen_damped(GridFunction& state, double t_freeze, double dt);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Repeated IMEX steps for the semilinear problem.
class SemilinearPropagator {
public:
    SemilinearPropagator(Mesh1D mesh, BcTag bc, KppReaction f);
    ~SemilinearPropagator();
    SemilinearPropagator(SemilinearPropagator&&) noexcept;
    SemilinearPropagator& operator=(SemilinearPropagator&&) noexcept;

    void step(GridFunction& state, double dt);
    const KppReaction& reaction() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Profiles of one fixed-domain semilinear run sampled at requested times.
struct FixedTrajectory {
    Mesh1D mesh;
    BcTag bc = BcTag::Neumann_Neumann;
    std::vector<double> times;
    std::vector<std::vector<double>> profiles;

    GridFunction profile(std::size_t i) const {
        return GridFunction(mesh, bc, profiles.at(i), times.at(i));
    }
};

/// Integrate u0 forward, sampling at the given (increasing, >= u0.time())
/// times. dt <= 0 selects dx; the step is shortened to land exactly on each
/// sample time.
FixedTrajectory run_semilinear(const KppReaction& f, GridFunction u0, double dt,
                               std::span<const double> sample_times);

/// Advance a state to t_end and return it (dt <= 0 selects dx).
GridFunction advance_semilinear(const KppReaction& f, GridFunction state, double t_end,
                                double dt = 0.0);

} // namespace kppfb
