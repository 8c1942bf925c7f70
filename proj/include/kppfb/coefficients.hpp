#pragma once

#include <functional>
#include <vector>

#include "kppfb/errors.hpp"

namespace kppfb {

/// One cosine mode amplitude*cos(frequency*t + phase), frequency > 0.
struct Mode {
    double amplitude = 0.0;
    double frequency = 1.0;
    double phase = 0.0;
};

/// Finite trigonometric sum mean + sum_k amp_k*cos(w_k*t + phi_k).
/// Quasi-periodic signals of this form admit exact time shifts (fold the
/// shift into the phases) and an exact Birkhoff mean (each positive-frequency
/// mode averages to zero), which is why the representation is kept closed.
class QuasiPeriodicSignal {
public:
    QuasiPeriodicSignal() = default;
    explicit QuasiPeriodicSignal(double mean, std::vector<Mode> modes = {});

    static QuasiPeriodicSignal constant(double value) { return QuasiPeriodicSignal(value); }

    double operator()(double t) const;

    double mean() const { return mean_; }
    const std::vector<Mode>& modes() const { return modes_; }

    /// Sum of |amplitude| over modes.
    double amplitude_sum() const;
    double upper_bound() const { return mean_ + amplitude_sum(); }
    double lower_bound() const { return mean_ - amplitude_sum(); }

    /// Signal t -> this(t + tau), exact (phases shifted).
    QuasiPeriodicSignal shifted(double tau) const;
    QuasiPeriodicSignal plus(double c) const;

private:
    double mean_ = 0.0;
    std::vector<Mode> modes_;
};

/// One spatial cosine mode amplitude*cos(2*pi*index*x/period + phase).
struct SpatialMode {
    double amplitude = 0.0;
    int index = 1;
    double phase = 0.0;
};

/// Spatial factor: identically 1, or a periodic perturbation
/// 1 + sum_k amp_k*cos(2*pi*k_j*x/period + phi_j) kept strictly positive by
/// requiring sum |amp| < 1 at construction.
class SpatialProfile {
public:
    SpatialProfile() = default; // constant 1

    static SpatialProfile constant() { return SpatialProfile(); }
    static SpatialProfile periodic(double period, std::vector<SpatialMode> modes);

    double operator()(double x) const;

    bool is_constant() const { return modes_.empty(); }
    double period() const { return period_; }
    const std::vector<SpatialMode>& modes() const { return modes_; }

    double amplitude_sum() const;
    double upper_bound() const { return 1.0 + amplitude_sum(); }
    double lower_bound() const { return 1.0 - amplitude_sum(); }

    /// Profile x -> this(x + y), exact (phases shifted).
    SpatialProfile shifted(double y) const;

private:
    double period_ = 0.0;
    std::vector<SpatialMode> modes_;
};

/// a(t,x) = temporal(t) * spatial(x): almost periodic in t for each x,
/// periodic (or constant) in x.
class SeparableCoefficient {
public:
    SeparableCoefficient() = default; // identically 0
    explicit SeparableCoefficient(QuasiPeriodicSignal temporal,
                                  SpatialProfile spatial = SpatialProfile::constant());

    static SeparableCoefficient constant(double value);

    double operator()(double t, double x) const { return temporal_(t) * spatial_(x); }

    const QuasiPeriodicSignal& temporal() const { return temporal_; }
    const SpatialProfile& spatial() const { return spatial_; }

    /// Range bounds derived from the factor amplitude bounds.
    double upper_bound() const;
    double lower_bound() const;

    SeparableCoefficient shifted_time(double tau) const;
    SeparableCoefficient shifted_space(double y) const;

    /// a + c as a coefficient; only representable when the spatial factor is
    /// constant (the shift folds into the temporal mean).
    SeparableCoefficient plus_constant(double c) const;

private:
    QuasiPeriodicSignal temporal_ = QuasiPeriodicSignal::constant(0.0);
    SpatialProfile spatial_;
};

/// KPP reaction f(t,x,u) = a(t+shift,x) - b(t+shift,x)*u with inf b > 0,
/// plus an escape hatch for caller-supplied reactions with caller-supplied
/// bounds. Immutable after construction; safe to share across solver runs.
class KppReaction {
public:
    KppReaction(SeparableCoefficient a, SeparableCoefficient b, double time_shift = 0.0);

    /// User-defined f(t,x,u). The caller must supply M with f < 0 for u > M
    /// and a bound on |f| over u in [0, m] as a function of m; monotone decay
    /// of f in u is the caller's responsibility.
    static KppReaction custom(std::function<double(double, double, double)> f,
                              double carrying_bound,
                              std::function<double(double)> sup_abs_f = {});

    bool is_logistic() const { return static_cast<bool>(!custom_); }

    /// f(t, x, 0).
    double a(double t, double x) const;
    /// f(t, x, u).
    double operator()(double t, double x, double u) const;

    /// Hull element f.(tau): eval(t,...) of the result equals eval(t+tau,...).
    KppReaction shifted(double tau) const;

    /// M = sup a / inf b; f(t,x,u) < 0 for all u > M.
    double carrying_bound() const;

    double time_shift() const { return time_shift_; }
    const SeparableCoefficient& coeff_a() const { return a_; }
    const SeparableCoefficient& coeff_b() const { return b_; }

    /// Temporal factors of a and b at (already shifted) time t; valid only
    /// for the logistic form. Used by steppers to evaluate f over a mesh row
    /// as Ta*Sa[j] - Tb*Sb[j]*u.
    void temporal_factors(double t, double& ta, double& tb) const;

    /// Upper bound on |f(t,x,u)| over all t,x and u in [0, u_max].
    double sup_abs_f(double u_max) const;

private:
    KppReaction() = default;

    SeparableCoefficient a_;
    SeparableCoefficient b_;
    double time_shift_ = 0.0;
    std::function<double(double, double, double)> custom_;
    double custom_bound_ = 0.0;
    std::function<double(double)> custom_sup_abs_;
};

} // namespace kppfb
