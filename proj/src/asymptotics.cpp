#include "kppfb/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "kppfb/lyapunov.hpp"

namespace kppfb {

namespace {

struct NodeRange {
    int lo, hi; // inclusive
};

NodeRange compared_nodes(const GridFunction& u) {
    const int n = u.nodes();
    return {left_dirichlet(u.bc()) ? 1 : 0, right_dirichlet(u.bc()) ? n - 2 : n - 1};
}

int default_cells(double length) {
    const int n = static_cast<int>(std::lround(256.0 * length));
    return std::clamp(n, 8, 65536);
}

} // namespace

double part_metric(const GridFunction& u1, const GridFunction& u2) {
    if (!(u1.mesh() == u2.mesh()) || u1.bc() != u2.bc())
        fail(ErrorCode::InvalidArgument, "part metric needs a common mesh and bc");
    const NodeRange r = compared_nodes(u1);
    double ratio = 1.0;
    for (int j = r.lo; j <= r.hi; ++j) {
        const double a = u1[j], b = u2[j];
        if (!(a > 0.0) || !(b > 0.0))
            fail(ErrorCode::InvalidArgument,
                 "part metric is defined only inside the positive cone");
        ratio = std::max(ratio, std::max(a / b, b / a));
    }
    return std::log(ratio);
}

PartMetricTrace part_metric_trace(const FixedTrajectory& run1, const FixedTrajectory& run2,
                                  double slack) {
    if (!(run1.mesh == run2.mesh) || run1.bc != run2.bc || run1.times != run2.times)
        fail(ErrorCode::InvalidArgument,
             "part metric trace needs runs on a common domain and sample times");
    PartMetricTrace trace;
    trace.times = run1.times;
    trace.rho.reserve(run1.times.size());
    for (std::size_t i = 0; i < run1.times.size(); ++i) {
        trace.rho.push_back(part_metric(run1.profile(i), run2.profile(i)));
        if (!trace.first_violation && i > 0 && trace.rho[i] > trace.rho[i - 1] + slack)
            trace.first_violation = i;
    }
    return trace;
}

PullbackResult pullback_positive_solution(const KppReaction& f, PullbackDomain domain,
                                          const PullbackOptions& opts) {
    if (!(opts.length > 0.0)) fail(ErrorCode::InvalidArgument, "domain length must be positive");
    if (!(opts.tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
    if (opts.depths.empty()) fail(ErrorCode::InvalidArgument, "depth schedule must be nonempty");
    for (std::size_t i = 1; i < opts.depths.size(); ++i)
        if (!(opts.depths[i] > opts.depths[i - 1]))
            fail(ErrorCode::InvalidArgument, "depth schedule must be increasing");

    const BcTag bc = domain == PullbackDomain::BoundedMixed ? BcTag::NeumannLeft_DirichletRight
                                                            : BcTag::Neumann_Neumann;
    if (domain == PullbackDomain::BoundedMixed) {
        LyapunovOptions lopts;
        lopts.horizon = opts.lambda_horizon;
        const double lambda =
            principal_lyapunov(f.coeff_a(), opts.length, bc, 0.0, lopts).estimate.value;
        if (!(lambda > 0.0))
            fail(ErrorCode::Regime,
                 "negative principal exponent: no positive almost periodic solution on this domain");
    }

    const int n = opts.n > 0 ? opts.n : default_cells(opts.length);
    const Mesh1D mesh(opts.length, n);
    const double big = f.carrying_bound();
    if (!(big > 0.0))
        fail(ErrorCode::Regime, "carrying bound is not positive; pullback data would be empty");

    PullbackResult res;
    bool have_prev = false;
    GridFunction prev = GridFunction::zeros(mesh, bc);
    for (double depth : opts.depths) {
        GridFunction u0 = GridFunction::constant(mesh, bc, big, opts.at_time - depth);
        GridFunction u = advance_semilinear(f, std::move(u0), opts.at_time, opts.dt);

        if (have_prev) {
            double change = 0.0;
            for (int j = 0; j < u.nodes(); ++j) {
                const double d = u[j] - prev[j];
                if (d > 1e-8)
                    fail(ErrorCode::Numerical,
                         "pullback profile increased with depth; scheme inconsistency");
                change = std::max(change, std::abs(d));
            }
            res.last_change = change;
            res.depth_used = depth;
            if (change < opts.tol) {
                res.converged = true;
                prev = std::move(u);
                break;
            }
        } else {
            res.depth_used = depth;
        }
        prev = std::move(u);
        have_prev = true;
    }

    const NodeRange r = compared_nodes(prev);
    double inf = prev[r.lo];
    for (int j = r.lo; j <= r.hi; ++j) inf = std::min(inf, prev[j]);
    if (prev.sup_norm() < opts.tol)
        fail(ErrorCode::Regime, "pullback limit collapsed: vanishing regime (lambda <= 0)");

    res.profile = std::move(prev);
    res.interior_infimum = inf;
    return res;
}

UniquenessReport uniqueness_check(const KppReaction& f, const GridFunction& u0_a,
                                  const GridFunction& u0_b, double T, double dt) {
    if (!(u0_a.mesh() == u0_b.mesh()) || u0_a.bc() != u0_b.bc())
        fail(ErrorCode::InvalidArgument, "uniqueness check needs a common mesh and bc");
    if (!(u0_a.min_value() > 0.0) && !left_dirichlet(u0_a.bc()) && !right_dirichlet(u0_a.bc()))
        fail(ErrorCode::InvalidArgument, "initial data must be strictly positive");
    GridFunction ua = advance_semilinear(f, u0_a, u0_a.time() + T, dt);
    GridFunction ub = advance_semilinear(f, u0_b, u0_b.time() + T, dt);
    UniquenessReport rep;
    for (int j = 0; j < ua.nodes(); ++j)
        rep.sup_difference = std::max(rep.sup_difference, std::abs(ua[j] - ub[j]));
    rep.part_metric_value = part_metric(ua, ub);
    return rep;
}

} // namespace kppfb
