#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "kppfb/lyapunov.hpp"

using namespace kppfb;
using testkit::kPi;
using testkit::kSqrt2;

namespace {

// closed-form oracle for space-independent a: lambda = mean(a) + lambda0(l)
double mixed_lambda0(double l) { return -std::pow(0.5 * kPi / l, 2); }
double dirichlet_lambda0(double l) { return -std::pow(kPi / l, 2); }

LyapunovOptions quick(double horizon = 200.0, int n = 0) {
    LyapunovOptions o;
    o.horizon = horizon;
    o.n = n;
    return o;
}

} // namespace

TEST_CASE("constant coefficient at the critical mixed length gives lambda ~ 0") {
    auto res = principal_lyapunov(SeparableCoefficient::constant(1.0), 0.5 * kPi,
                                  BcTag::NeumannLeft_DirichletRight, 0.0, quick());
    CHECK(std::abs(res.estimate.value) < 1e-3);
    CHECK(res.profile.sup_norm() == doctest::Approx(1.0));
    CHECK(res.estimate.renormalizations == 200);
}

TEST_CASE("quasi-periodic coefficient matches the time-average closed form") {
    auto res = principal_lyapunov(testkit::quasi_coefficient(), 10.0,
                                  BcTag::NeumannLeft_DirichletRight, 0.0, quick(1000.0, 256));
    const double expected = 1.0 + mixed_lambda0(10.0); // ~0.97533
    CHECK(std::abs(res.estimate.value - expected) < 1e-2);
    CHECK(res.estimate.window_spread < 0.05);
}

TEST_CASE("constant coefficient at the critical Dirichlet length gives lambda ~ 0") {
    auto res = principal_lyapunov(SeparableCoefficient::constant(1.0), kPi,
                                  BcTag::Dirichlet_Dirichlet, 0.0, quick());
    CHECK(std::abs(res.estimate.value) < 1e-3);
}

TEST_CASE("drift shifts the Dirichlet exponent by -gamma^2/4") {
    auto res = principal_lyapunov(SeparableCoefficient::constant(0.0), kPi,
                                  BcTag::Dirichlet_Dirichlet, 1.0, quick(150.0, 256));
    CHECK(res.estimate.value == doctest::Approx(-1.25).epsilon(5e-3));
}

TEST_CASE("positivity of the returned principal profile") {
    auto res = principal_lyapunov(testkit::quasi_coefficient(), 2.0,
                                  BcTag::NeumannLeft_DirichletRight, 0.0, quick(150.0));
    for (int j = 0; j < res.profile.nodes() - 1; ++j) CHECK(res.profile[j] > 0.0);
    CHECK(res.profile[res.profile.nodes() - 1] == 0.0);
}

TEST_CASE("Neumann-Neumann bc is rejected") {
    CHECK_THROWS_AS(principal_lyapunov(SeparableCoefficient::constant(1.0), 1.0,
                                       BcTag::Neumann_Neumann, 0.0, quick()),
                    Error);
}

TEST_CASE("horizon below 100 windows is rejected") {
    CHECK_THROWS_AS(principal_lyapunov(SeparableCoefficient::constant(1.0), 1.0,
                                       BcTag::NeumannLeft_DirichletRight, 0.0, quick(50.0)),
                    Error);
}

TEST_CASE("critical length for constant coefficients") {
    LyapunovOptions opts = quick(150.0, 128);
    const double l1 = critical_length(SeparableCoefficient::constant(1.0),
                                      BcTag::NeumannLeft_DirichletRight, 5e-3, 0.8, 3.0, opts);
    CHECK(std::abs(l1 - 0.5 * kPi) < 1e-2);

    const double l4 = critical_length(SeparableCoefficient::constant(4.0),
                                      BcTag::NeumannLeft_DirichletRight, 5e-3, 0.4, 2.0, opts);
    CHECK(std::abs(l4 - 0.25 * kPi) < 1e-2);
}

TEST_CASE("critical length for a quasi-periodic coefficient") {
    auto a = SeparableCoefficient(QuasiPeriodicSignal(1.0, {{0.8, kSqrt2, -0.5 * kPi}}));
    const double l = critical_length(a, BcTag::NeumannLeft_DirichletRight, 8e-3, 1.0, 2.5,
                                     quick(600.0, 128));
    CHECK(std::abs(l - 0.5 * kPi) < 2e-2);
}

TEST_CASE("critical length needs a straddling bracket") {
    CHECK_THROWS_AS(critical_length(SeparableCoefficient::constant(1.0),
                                    BcTag::NeumannLeft_DirichletRight, 1e-2, 2.0, 4.0,
                                    quick(150.0, 128)),
                    Error);
}

TEST_CASE("shift identity: lambda(a + c, l) = lambda(a, l) + c") {
    const auto a = testkit::quasi_coefficient();
    LyapunovOptions opts = quick(300.0, 256);
    const double base =
        principal_lyapunov(a, 2.0, BcTag::NeumannLeft_DirichletRight, 0.0, opts).estimate.value;
    for (double c : {1.0, -1.0, 0.5, -0.5}) {
        const double shifted =
            principal_lyapunov(a.plus_constant(c), 2.0, BcTag::NeumannLeft_DirichletRight, 0.0,
                               opts)
                .estimate.value;
        CHECK(std::abs(shifted - base - c) < 2e-3);
    }
}

TEST_CASE("continuity in a: an epsilon perturbation moves lambda by at most epsilon") {
    const auto a = testkit::quasi_coefficient();
    LyapunovOptions opts = quick(300.0, 256);
    const double base =
        principal_lyapunov(a, 3.0, BcTag::NeumannLeft_DirichletRight, 0.0, opts).estimate.value;
    for (double eps : {0.1, -0.1}) {
        const double moved = principal_lyapunov(a.plus_constant(eps), 3.0,
                                                BcTag::NeumannLeft_DirichletRight, 0.0, opts)
                                 .estimate.value;
        CHECK(std::abs(moved - base) <= std::abs(eps) + 2e-3);
    }
}

TEST_CASE("monotonicity probe on the documented cases") {
    LyapunovOptions opts = quick(200.0, 128);

    auto constants = monotonicity_probe(SeparableCoefficient::constant(1.0),
                                        SeparableCoefficient::constant(2.0), 2.0, 2.0,
                                        BcTag::NeumannLeft_DirichletRight, opts);
    CHECK(constants.ordered);
    CHECK(constants.lambda_hi - constants.lambda_lo == doctest::Approx(1.0).epsilon(2e-3));

    auto lengths = monotonicity_probe(SeparableCoefficient::constant(1.0),
                                      SeparableCoefficient::constant(1.0), 2.0, 4.0,
                                      BcTag::NeumannLeft_DirichletRight, opts);
    CHECK(lengths.ordered);
    CHECK(lengths.lambda_lo < lengths.lambda_hi);
    CHECK(lengths.lambda_lo == doctest::Approx(1.0 + mixed_lambda0(2.0)).epsilon(2e-3));
    CHECK(lengths.lambda_hi == doctest::Approx(1.0 + mixed_lambda0(4.0)).epsilon(2e-3));

    auto equal = monotonicity_probe(testkit::quasi_coefficient(), testkit::quasi_coefficient(),
                                    2.0, 2.0, BcTag::NeumannLeft_DirichletRight, opts);
    CHECK(equal.ordered);
    CHECK(std::abs(equal.lambda_hi - equal.lambda_lo) < 2e-3);
}

TEST_CASE("monotonicity probe rejects unordered inputs") {
    CHECK_THROWS_AS(monotonicity_probe(SeparableCoefficient::constant(2.0),
                                       SeparableCoefficient::constant(1.0), 4.0, 2.0,
                                       BcTag::NeumannLeft_DirichletRight, quick(150.0, 128)),
                    Error);
}

TEST_CASE("renormalized profile returns to itself after one coefficient period") {
    // a(t) = 1 + 0.5 cos(pi t), period 2 = two renormalization windows
    auto a = SeparableCoefficient(QuasiPeriodicSignal(1.0, {{0.5, kPi, 0.0}}));
    auto p1 = principal_lyapunov(a, 2.0, BcTag::NeumannLeft_DirichletRight, 0.0, quick(120.0, 128));
    auto p2 = principal_lyapunov(a, 2.0, BcTag::NeumannLeft_DirichletRight, 0.0, quick(122.0, 128));
    double diff = 0.0;
    for (int j = 0; j < p1.profile.nodes(); ++j)
        diff = std::max(diff, std::abs(p1.profile[j] - p2.profile[j]));
    CHECK(diff < 1e-4);
}

TEST_CASE("Dirichlet exponent over spatial shifts") {
    // space-independent coefficient: every shift gives the same exponent
    const double shifts[] = {0.0, 0.3, 1.1};
    const double v = min_dirichlet_exponent_over_shifts(testkit::quasi_coefficient(), kPi, shifts,
                                                        quick(200.0, 128));
    const double direct = principal_lyapunov(testkit::quasi_coefficient(), kPi,
                                             BcTag::Dirichlet_Dirichlet, 0.0, quick(200.0, 128))
                              .estimate.value;
    CHECK(v == doctest::Approx(direct).epsilon(1e-10));

    // spatially periodic coefficient: the minimum is no larger than shift 0
    auto ax = SeparableCoefficient(testkit::quasi_signal(),
                                   SpatialProfile::periodic(2.0, {{0.3, 1, 0.0}}));
    const double vx = min_dirichlet_exponent_over_shifts(ax, kPi, shifts, quick(200.0, 128));
    const double v0 = principal_lyapunov(ax, kPi, BcTag::Dirichlet_Dirichlet, 0.0,
                                         quick(200.0, 128))
                          .estimate.value;
    CHECK(vx <= v0 + 1e-12);
}
