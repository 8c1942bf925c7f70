#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "kppfb/coefficients.hpp"

using namespace kppfb;
using testkit::kPi;
using testkit::kSqrt2;

namespace {

KppReaction unit_reaction(SeparableCoefficient a) {
    return KppReaction(std::move(a), SeparableCoefficient::constant(1.0));
}

SeparableCoefficient sine_coefficient(double mean, double amp, double freq = 1.0) {
    return SeparableCoefficient(QuasiPeriodicSignal(mean, {{amp, freq, -0.5 * kPi}}));
}

} // namespace

TEST_CASE("eval_a returns f(t,x,0)") {
    auto constant = unit_reaction(SeparableCoefficient::constant(1.0));
    CHECK(constant.a(0.0, 0.0) == doctest::Approx(1.0));
    CHECK(constant.a(17.3, -4.0) == doctest::Approx(1.0));

    auto sine = unit_reaction(sine_coefficient(1.0, 0.5));
    CHECK(sine.a(0.5 * kPi, 3.0) == doctest::Approx(1.5));

    auto spatial = unit_reaction(SeparableCoefficient(
        QuasiPeriodicSignal(1.0, {{0.5, 1.0, -0.5 * kPi}}),
        SpatialProfile::periodic(1.0, {{0.3, 1, 0.0}})));
    CHECK(spatial.a(0.0, 0.0) == doctest::Approx(1.3));
}

TEST_CASE("eval_f is the logistic form a - b*u") {
    auto fisher = testkit::fisher();
    CHECK(fisher(0.0, 0.0, 1.0) == doctest::Approx(0.0));
    CHECK(fisher(5.0, 2.0, 0.0) == doctest::Approx(1.0));

    auto sine = unit_reaction(sine_coefficient(1.0, 0.5));
    CHECK(sine(0.0, 0.0, 2.0) == doctest::Approx(-1.0));
}

TEST_CASE("time_shift composes exactly") {
    auto base = unit_reaction(testkit::quasi_coefficient());

    auto same = base.shifted(0.0);
    CHECK(same(1.7, 0.3, 0.9) == base(1.7, 0.3, 0.9));

    auto fwd_back = base.shifted(2.5).shifted(-2.5);
    CHECK(fwd_back(1.7, 0.3, 0.9) == doctest::Approx(base(1.7, 0.3, 0.9)).epsilon(1e-15));

    auto sine = unit_reaction(sine_coefficient(0.0, 1.0));
    auto shifted = sine.shifted(kPi);
    CHECK(shifted.a(0.0, 0.0) == doctest::Approx(std::sin(kPi)).epsilon(1e-12));
}

TEST_CASE("time_shift agrees with direct evaluation at 1000 random points") {
    auto base = unit_reaction(testkit::quasi_coefficient());
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> unif(-50.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = unif(rng), x = unif(rng), u = std::abs(unif(rng)) / 25.0,
                     tau = unif(rng);
        const double direct = base(t + tau, x, u);
        const double shifted = base.shifted(tau)(t, x, u);
        CHECK(shifted == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("mean_value is the stored mean") {
    CHECK(QuasiPeriodicSignal::constant(3.25).mean() == 3.25);
    CHECK(QuasiPeriodicSignal(0.0, {{1.0, 1.0, -0.5 * kPi}}).mean() == 0.0);
    CHECK(testkit::quasi_signal().mean() == 1.0);
}

TEST_CASE("mean matches the long-horizon quadrature average") {
    auto sig = testkit::quasi_signal();
    const double T = 1e4;
    const double h = 0.01;
    const long n = std::lround(T / h);
    double sum = 0.5 * (sig(0.0) + sig(T));
    for (long i = 1; i < n; ++i) sum += sig(i * h);
    const double avg = sum * h / T;
    // each mode contributes at most 2*amp/(freq*T) to the average
    const double bound = 2.0 * (0.5 / 1.0 + 0.5 / kSqrt2) / T + 1e-6;
    CHECK(std::abs(avg - sig.mean()) <= bound);
}

TEST_CASE("carrying bound is sup a / inf b") {
    CHECK(testkit::fisher().carrying_bound() == doctest::Approx(1.0));

    auto sine_a = unit_reaction(sine_coefficient(1.0, 0.5));
    CHECK(sine_a.carrying_bound() == doctest::Approx(1.5));

    KppReaction sine_b(SeparableCoefficient::constant(2.0), sine_coefficient(1.0, 0.5));
    CHECK(sine_b.carrying_bound() == doctest::Approx(4.0));
}

TEST_CASE("construction rejects b that can reach zero") {
    CHECK_THROWS_AS(KppReaction(SeparableCoefficient::constant(1.0), sine_coefficient(1.0, 1.0)),
                    Error);
    CHECK_THROWS_AS(KppReaction(SeparableCoefficient::constant(1.0),
                                SeparableCoefficient::constant(-0.5)),
                    Error);
}

TEST_CASE("f decreases strictly in u") {
    auto r = unit_reaction(testkit::quasi_coefficient());
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(-10.0, 10.0);
    const double du = 0.1;
    for (int i = 0; i < 200; ++i) {
        const double t = unif(rng), x = unif(rng), u = std::abs(unif(rng));
        CHECK(r(t, x, u + du) - r(t, x, u) <= -0.9 * du); // inf b = 1 here
    }
}

TEST_CASE("f is negative above the carrying bound") {
    auto r = KppReaction(testkit::quasi_coefficient(), sine_coefficient(1.0, 0.25));
    const double M = r.carrying_bound();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unif(-20.0, 20.0);
    for (int i = 0; i < 200; ++i) {
        const double t = unif(rng), x = unif(rng);
        const double u = M * (1.0 + 1e-9) + std::abs(unif(rng));
        CHECK(r(t, x, u) < 0.0);
    }
}

TEST_CASE("spatial profile must keep positivity") {
    CHECK_THROWS_AS(SpatialProfile::periodic(1.0, {{0.7, 1, 0.0}, {0.4, 2, 0.0}}), Error);
    auto ok = SpatialProfile::periodic(2.0, {{0.4, 1, 0.0}, {0.3, 3, 1.0}});
    for (double x = -3.0; x < 3.0; x += 0.01) CHECK(ok(x) > 0.0);
}

TEST_CASE("spatial shift folds into phases exactly") {
    auto a = SeparableCoefficient(testkit::quasi_signal(),
                                  SpatialProfile::periodic(2.0, {{0.3, 2, 0.4}}));
    auto ay = a.shifted_space(0.77);
    for (double x = -2.0; x < 2.0; x += 0.1)
        CHECK(ay(1.3, x) == doctest::Approx(a(1.3, x + 0.77)).epsilon(1e-14));
}

TEST_CASE("custom reaction hook carries caller bounds") {
    auto f = KppReaction::custom([](double, double, double u) { return 1.0 - u * u; }, 1.0,
                                 [](double m) { return std::max(1.0, m * m - 1.0); });
    CHECK(f.carrying_bound() == 1.0);
    CHECK(f(0.0, 0.0, 2.0) == doctest::Approx(-3.0));
    CHECK(f.a(3.0, 1.0) == doctest::Approx(1.0));
    CHECK(f.sup_abs_f(3.0) == doctest::Approx(8.0));
}
