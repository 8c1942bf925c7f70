#include "kppfb/coefficients.hpp"

#include <cmath>
#include <utility>

namespace kppfb {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_phase(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}

} // namespace

QuasiPeriodicSignal::QuasiPeriodicSignal(double mean, std::vector<Mode> modes)
    : mean_(mean), modes_(std::move(modes)) {
    if (!std::isfinite(mean_)) fail(ErrorCode::InvalidArgument, "signal mean must be finite");
    for (auto& m : modes_) {
        if (!(m.frequency > 0.0) || !std::isfinite(m.frequency))
            fail(ErrorCode::InvalidArgument, "mode frequency must be strictly positive and finite");
        if (!std::isfinite(m.amplitude) || !std::isfinite(m.phase))
            fail(ErrorCode::InvalidArgument, "mode amplitude/phase must be finite");
        m.phase = wrap_phase(m.phase);
    }
}

double QuasiPeriodicSignal::operator()(double t) const {
    double v = mean_;
    for (const auto& m : modes_) v += m.amplitude * std::cos(m.frequency * t + m.phase);
    return v;
}

double QuasiPeriodicSignal::amplitude_sum() const {
    double s = 0.0;
    for (const auto& m : modes_) s += std::abs(m.amplitude);
    return s;
}

QuasiPeriodicSignal QuasiPeriodicSignal::shifted(double tau) const {
    std::vector<Mode> shifted = modes_;
    for (auto& m : shifted) m.phase = wrap_phase(m.phase + m.frequency * tau);
    return QuasiPeriodicSignal(mean_, std::move(shifted));
}

QuasiPeriodicSignal QuasiPeriodicSignal::plus(double c) const {
    return QuasiPeriodicSignal(mean_ + c, modes_);
}

SpatialProfile SpatialProfile::periodic(double period, std::vector<SpatialMode> modes) {
    if (!(period > 0.0) || !std::isfinite(period))
        fail(ErrorCode::InvalidArgument, "spatial period must be strictly positive and finite");
    SpatialProfile p;
    p.period_ = period;
    p.modes_ = std::move(modes);
    double amp = 0.0;
    for (auto& m : p.modes_) {
        if (m.index <= 0) fail(ErrorCode::InvalidArgument, "spatial mode index must be >= 1");
        if (!std::isfinite(m.amplitude) || !std::isfinite(m.phase))
            fail(ErrorCode::InvalidArgument, "spatial mode amplitude/phase must be finite");
        m.phase = wrap_phase(m.phase);
        amp += std::abs(m.amplitude);
    }
    if (amp >= 1.0)
        fail(ErrorCode::InvalidArgument,
             "spatial mode amplitudes sum to >= 1; profile would lose positivity");
    return p;
}

double SpatialProfile::operator()(double x) const {
    double v = 1.0;
    for (const auto& m : modes_) v += m.amplitude * std::cos(kTwoPi * m.index * x / period_ + m.phase);
    return v;
}

double SpatialProfile::amplitude_sum() const {
    double s = 0.0;
    for (const auto& m : modes_) s += std::abs(m.amplitude);
    return s;
}

SpatialProfile SpatialProfile::shifted(double y) const {
    if (is_constant()) return *this;
    SpatialProfile p = *this;
    for (auto& m : p.modes_) m.phase = wrap_phase(m.phase + kTwoPi * m.index * y / period_);
    return p;
}

SeparableCoefficient::SeparableCoefficient(QuasiPeriodicSignal temporal, SpatialProfile spatial)
    : temporal_(std::move(temporal)), spatial_(std::move(spatial)) {}

SeparableCoefficient SeparableCoefficient::constant(double value) {
    return SeparableCoefficient(QuasiPeriodicSignal::constant(value));
}

double SeparableCoefficient::upper_bound() const {
    const double tl = temporal_.lower_bound(), tu = temporal_.upper_bound();
    const double sl = spatial_.lower_bound(), su = spatial_.upper_bound();
    return std::max(std::max(tl * sl, tl * su), std::max(tu * sl, tu * su));
}

double SeparableCoefficient::lower_bound() const {
    const double tl = temporal_.lower_bound(), tu = temporal_.upper_bound();
    const double sl = spatial_.lower_bound(), su = spatial_.upper_bound();
    return std::min(std::min(tl * sl, tl * su), std::min(tu * sl, tu * su));
}

SeparableCoefficient SeparableCoefficient::shifted_time(double tau) const {
    return SeparableCoefficient(temporal_.shifted(tau), spatial_);
}

SeparableCoefficient SeparableCoefficient::shifted_space(double y) const {
    return SeparableCoefficient(temporal_, spatial_.shifted(y));
}

SeparableCoefficient SeparableCoefficient::plus_constant(double c) const {
    if (!spatial_.is_constant())
        fail(ErrorCode::InvalidArgument,
             "constant shift is only representable for a constant spatial factor");
    return SeparableCoefficient(temporal_.plus(c), spatial_);
}

KppReaction::KppReaction(SeparableCoefficient a, SeparableCoefficient b, double time_shift)
    : a_(std::move(a)), b_(std::move(b)), time_shift_(time_shift) {
    if (!(b_.lower_bound() > 0.0))
        fail(ErrorCode::InvalidArgument,
             "decay coefficient b must satisfy inf b > 0 (amplitude bound violated)");
}

KppReaction KppReaction::custom(std::function<double(double, double, double)> f,
                                double carrying_bound,
                                std::function<double(double)> sup_abs_f) {
    if (!f) fail(ErrorCode::InvalidArgument, "custom reaction callback must be set");
    if (!std::isfinite(carrying_bound))
        fail(ErrorCode::InvalidArgument, "custom reaction needs a finite carrying bound");
    KppReaction r;
    r.custom_ = std::move(f);
    r.custom_bound_ = carrying_bound;
    r.custom_sup_abs_ = std::move(sup_abs_f);
    return r;
}

double KppReaction::a(double t, double x) const { return (*this)(t, x, 0.0); }

double KppReaction::operator()(double t, double x, double u) const {
    const double ts = t + time_shift_;
    if (custom_) return custom_(ts, x, u);
    return a_(ts, x) - b_(ts, x) * u;
}

KppReaction KppReaction::shifted(double tau) const {
    KppReaction r = *this;
    r.time_shift_ += tau;
    return r;
}

double KppReaction::carrying_bound() const {
    if (custom_) return custom_bound_;
    return a_.upper_bound() / b_.lower_bound();
}

void KppReaction::temporal_factors(double t, double& ta, double& tb) const {
    const double ts = t + time_shift_;
    ta = a_.temporal()(ts);
    tb = b_.temporal()(ts);
}

double KppReaction::sup_abs_f(double u_max) const {
    if (custom_) {
        if (custom_sup_abs_) return custom_sup_abs_(u_max);
        // crude sampling fallback over a coarse (t,x,u) lattice
        double s = 0.0;
        for (int it = 0; it < 32; ++it)
            for (int iu = 0; iu <= 8; ++iu)
                s = std::max(s, std::abs(custom_(it * 0.7, it * 0.31, u_max * iu / 8.0)));
        return s;
    }
    // f in [inf a - sup b * u_max, sup a] for u in [0, u_max]
    const double lo = a_.lower_bound() - b_.upper_bound() * u_max;
    const double hi = a_.upper_bound();
    return std::max(std::abs(lo), std::abs(hi));
}

} // namespace kppfb
