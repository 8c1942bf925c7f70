#pragma once

// Shared fixtures and oracles for the test suites. Everything here is
// independent of the solver path it is used to check.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "kppfb/coefficients.hpp"
#include "kppfb/grid.hpp"

namespace testkit {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;

// a(t) = 1 + 0.5 sin t + 0.5 sin(sqrt(2) t); sin(wt) = cos(wt - pi/2)
inline kppfb::QuasiPeriodicSignal quasi_signal(double mean = 1.0, double a1 = 0.5,
                                               double a2 = 0.5) {
    return kppfb::QuasiPeriodicSignal(
        mean, {{a1, 1.0, -0.5 * kPi}, {a2, kSqrt2, -0.5 * kPi}});
}

inline kppfb::SeparableCoefficient quasi_coefficient(double mean = 1.0, double a1 = 0.5,
                                                     double a2 = 0.5) {
    return kppfb::SeparableCoefficient(quasi_signal(mean, a1, a2));
}

// f(t,x,u) = 1 - u
inline kppfb::KppReaction fisher() {
    return kppfb::KppReaction(kppfb::SeparableCoefficient::constant(1.0),
                              kppfb::SeparableCoefficient::constant(1.0));
}

// f(t,x,u) = a(t) - u with the standard quasi-periodic a
inline kppfb::KppReaction quasi_logistic() {
    return kppfb::KppReaction(quasi_coefficient(), kppfb::SeparableCoefficient::constant(1.0));
}

// Exact solution of u' = u(1-u), u(0) = u0 (Fisher with flat data).
inline double logistic_exact(double u0, double t) {
    return u0 / (u0 + (1.0 - u0) * std::exp(-t));
}

// RK4 for scalar u' = rhs(t, u); the ODE oracle for flat-profile cases.
inline double rk4(std::function<double(double, double)> rhs, double t0, double u0, double t1,
                  double dt = 1e-3) {
    double t = t0, u = u0;
    const long steps = std::lround(std::ceil((t1 - t0) / dt));
    const double h = (t1 - t0) / steps;
    for (long i = 0; i < steps; ++i) {
        const double k1 = rhs(t, u);
        const double k2 = rhs(t + 0.5 * h, u + 0.5 * h * k1);
        const double k3 = rhs(t + 0.5 * h, u + 0.5 * h * k2);
        const double k4 = rhs(t + h, u + h * k3);
        u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = t0 + (i + 1) * h;
    }
    return u;
}

// Smooth positive random profile bounded below: base + bumps of low Fourier
// modes, scaled to stay within [floor, ceil].
inline kppfb::GridFunction random_positive_profile(std::mt19937& rng, const kppfb::Mesh1D& mesh,
                                                   kppfb::BcTag bc, double floor = 0.2,
                                                   double ceil = 2.0) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double c0 = 0.5 * (floor + ceil);
    const double span = 0.5 * (ceil - floor);
    double a1 = unif(rng), a2 = unif(rng), a3 = unif(rng);
    const double norm = std::abs(a1) + std::abs(a2) + std::abs(a3) + 1e-12;
    a1 *= 0.9 * span / norm;
    a2 *= 0.9 * span / norm;
    a3 *= 0.9 * span / norm;
    const double l = mesh.length;
    auto base = [&](double x) {
        return c0 + a1 * std::cos(kPi * x / l) + a2 * std::cos(2.0 * kPi * x / l) +
               a3 * std::sin(0.5 * kPi * x / l);
    };
    // shape to honor Dirichlet walls while staying positive inside
    auto shaped = [&](double x) {
        double v = base(x);
        if (kppfb::left_dirichlet(bc)) v *= std::sin(0.5 * kPi * std::min(1.0, 4.0 * x / l));
        if (kppfb::right_dirichlet(bc)) v *= std::sin(0.5 * kPi * std::min(1.0, 4.0 * (l - x) / l));
        return v;
    };
    return kppfb::GridFunction::sample(mesh, bc, shaped);
}

} // namespace testkit
