#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "kppfb/parabolic.hpp"

using namespace kppfb;
using testkit::kPi;

namespace {

double sup_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (int j = 0; j < a.nodes(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

GridFunction mixed_mode(const Mesh1D& mesh) {
    return GridFunction::sample(mesh, BcTag::NeumannLeft_DirichletRight, [&](double x) {
        return std::cos(0.5 * kPi * x / mesh.length);
    });
}

GridFunction dirichlet_mode(const Mesh1D& mesh) {
    return GridFunction::sample(mesh, BcTag::Dirichlet_Dirichlet,
                                [&](double x) { return std::sin(kPi * x / mesh.length); });
}

} // namespace

TEST_CASE("linear step reproduces the mixed-bc eigenfunction decay") {
    const Mesh1D mesh(1.0, 128);
    const double dt = 1e-3;
    const double lam = 0.25 * kPi * kPi; // -(pi/(2l))^2 decay rate
    GridFunction v0 = mixed_mode(mesh);
    GridFunction v1 = step_linear(v0, SeparableCoefficient::constant(0.0), 0.0, dt);
    GridFunction expected = v0;
    expected.scale(std::exp(-lam * dt));
    CHECK(sup_diff(v1, expected) < 1e-6);
}

TEST_CASE("linear step reproduces the Dirichlet eigenfunction decay") {
    const Mesh1D mesh(1.0, 128);
    const double dt = 1e-3;
    const double lam = kPi * kPi;
    GridFunction v0 = dirichlet_mode(mesh);
    GridFunction v1 = step_linear(v0, SeparableCoefficient::constant(0.0), 0.0, dt);
    GridFunction expected = v0;
    expected.scale(std::exp(-lam * dt));
    CHECK(sup_diff(v1, expected) < 5e-6);
}

TEST_CASE("a constant reaction coefficient acts as a scalar factor") {
    const Mesh1D mesh(1.0, 128);
    const double dt = 1e-3, c = 0.7;
    GridFunction v0 = mixed_mode(mesh);
    GridFunction with_c = step_linear(v0, SeparableCoefficient::constant(c), 0.0, dt);
    GridFunction base = step_linear(v0, SeparableCoefficient::constant(0.0), 0.0, dt);
    base.scale(std::exp(c * dt));
    CHECK(sup_diff(with_c, base) < 1e-9);
}

TEST_CASE("zero stays zero under the semilinear step") {
    const Mesh1D mesh(1.0, 64);
    GridFunction u = GridFunction::zeros(mesh, BcTag::NeumannLeft_DirichletRight);
    auto f = testkit::fisher();
    for (int k = 0; k < 50; ++k) u = step_semilinear(u, f, 0.01);
    CHECK(u.sup_norm() == 0.0);
}

TEST_CASE("the flat Fisher equilibrium is invariant") {
    const Mesh1D mesh(1.0, 64);
    GridFunction u = GridFunction::constant(mesh, BcTag::Neumann_Neumann, 1.0);
    SemilinearPropagator prop(mesh, BcTag::Neumann_Neumann, testkit::fisher());
    for (int k = 0; k < 100; ++k) prop.step(u, 0.01);
    for (int j = 0; j < u.nodes(); ++j) CHECK(u[j] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Fisher on a short mixed interval decays below 1e-4 by t = 40") {
    // linear bound: lambda(1,1) = 1 - (pi/2)^2 < 0
    const Mesh1D mesh(1.0, 128);
    GridFunction u = mixed_mode(mesh);
    const double dt = mesh.dx();
    SemilinearPropagator prop(mesh, BcTag::NeumannLeft_DirichletRight, testkit::fisher());
    while (u.time() < 40.0) prop.step(u, dt);
    CHECK(u.sup_norm() < 1e-4);
}

TEST_CASE("sup_norm basics") {
    const Mesh1D mesh(1.0, 8);
    CHECK(GridFunction::zeros(mesh, BcTag::Neumann_Neumann).sup_norm() == 0.0);
    GridFunction g(mesh, BcTag::Neumann_Neumann, {1.0, -3.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
    CHECK(g.sup_norm() == 3.0);
    CHECK(mixed_mode(Mesh1D(2.0, 8)).sup_norm() == doctest::Approx(1.0));
}

TEST_CASE("ordered data stay ordered (discrete comparison)") {
    const Mesh1D mesh(2.0, 64);
    const double dt = 0.02;
    std::mt19937 rng(314159);
    auto f = testkit::quasi_logistic();
    for (int pair = 0; pair < 3; ++pair) {
        GridFunction lo =
            testkit::random_positive_profile(rng, mesh, BcTag::NeumannLeft_DirichletRight, 0.2, 1.0);
        GridFunction bump =
            testkit::random_positive_profile(rng, mesh, BcTag::NeumannLeft_DirichletRight, 0.3, 0.8);
        std::vector<double> hi_vals(mesh.nodes());
        for (int j = 0; j < mesh.nodes(); ++j) hi_vals[j] = lo[j] + bump[j];
        GridFunction hi(mesh, BcTag::NeumannLeft_DirichletRight, hi_vals);

        SemilinearPropagator prop(mesh, BcTag::NeumannLeft_DirichletRight, f);
        for (int k = 0; k < 200; ++k) {
            prop.step(lo, dt);
            prop.step(hi, dt);
            for (int j = 0; j < mesh.nodes(); ++j) CHECK(lo[j] <= hi[j] + 1e-9);
        }
    }
}

TEST_CASE("temporal convergence order of the linear step is ~2") {
    const Mesh1D mesh(1.0, 512);
    const double T = 0.25;
    const double lam = 0.25 * kPi * kPi;
    auto error_at = [&](double dt) {
        GridFunction v = mixed_mode(mesh);
        LinearPropagator prop(mesh, BcTag::NeumannLeft_DirichletRight,
                              SeparableCoefficient::constant(0.0));
        const long steps = std::lround(T / dt);
        for (long k = 0; k < steps; ++k) prop.step(v, dt);
        GridFunction exact = mixed_mode(mesh);
        exact.scale(std::exp(-lam * T));
        return sup_diff(v, exact);
    };
    const double e1 = error_at(0.025), e2 = error_at(0.0125), e3 = error_at(0.00625);
    CHECK(std::log2(e1 / e2) >= 1.9);
    CHECK(std::log2(e2 / e3) >= 1.9);
}

TEST_CASE("spatial convergence order of the linear step is ~2") {
    const double T = 0.25, dt = 1e-4;
    const double lam = 0.25 * kPi * kPi;
    auto error_at = [&](int n) {
        const Mesh1D mesh(1.0, n);
        GridFunction v = mixed_mode(mesh);
        LinearPropagator prop(mesh, BcTag::NeumannLeft_DirichletRight,
                              SeparableCoefficient::constant(0.0));
        const long steps = std::lround(T / dt);
        for (long k = 0; k < steps; ++k) prop.step(v, dt);
        GridFunction exact = mixed_mode(mesh);
        exact.scale(std::exp(-lam * T));
        return sup_diff(v, exact);
    };
    const double e1 = error_at(16), e2 = error_at(32), e3 = error_at(64);
    CHECK(std::log2(e1 / e2) >= 1.9);
    CHECK(std::log2(e2 / e3) >= 1.9);
}

TEST_CASE("semilinear solutions respect the dissipativity bound") {
    const Mesh1D mesh(2.0, 64);
    auto f = testkit::quasi_logistic(); // sup a = 2, inf b = 1 -> M = 2
    const double M = f.carrying_bound();
    CHECK(M == doctest::Approx(2.0));
    GridFunction u = GridFunction::constant(mesh, BcTag::Neumann_Neumann, 2.5);
    const double cap = std::max(2.5, M) + 1e-8;
    SemilinearPropagator prop(mesh, BcTag::Neumann_Neumann, f);
    for (int k = 0; k < 500; ++k) {
        prop.step(u, 0.01);
        CHECK(u.sup_norm() <= cap);
    }
}

TEST_CASE("semilinear step rejects reaction-unstable dt") {
    const Mesh1D mesh(1.0, 64);
    GridFunction u = GridFunction::constant(mesh, BcTag::Neumann_Neumann, 3.0);
    CHECK_THROWS_AS(step_semilinear(u, testkit::fisher(), 5.0), Error);
}

TEST_CASE("semilinear step requires nonnegative data") {
    const Mesh1D mesh(1.0, 64);
    std::vector<double> vals(mesh.nodes(), 0.5);
    vals[10] = -0.2;
    GridFunction u(mesh, BcTag::Neumann_Neumann, vals);
    CHECK_THROWS_AS(step_semilinear(u, testkit::fisher(), 0.01), Error);
}

TEST_CASE("run_semilinear lands exactly on sample times") {
    const Mesh1D mesh(1.0, 64);
    GridFunction u = GridFunction::constant(mesh, BcTag::Neumann_Neumann, 0.5);
    const double samples[] = {0.0, 0.5, 1.3, 4.0};
    FixedTrajectory traj = run_semilinear(testkit::fisher(), u, 0.01, samples);
    REQUIRE(traj.times.size() == 4);
    CHECK(traj.times[2] == 1.3);
    // flat profile follows the logistic ODE
    const double expected = testkit::logistic_exact(0.5, 4.0);
    CHECK(traj.profiles[3][32] == doctest::Approx(expected).epsilon(1e-5));
}
