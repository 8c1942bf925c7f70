#include "kppfb.h"

#include <cmath>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "kppfb/asymptotics.hpp"
#include "kppfb/coefficients.hpp"
#include "kppfb/dichotomy.hpp"
#include "kppfb/errors.hpp"
#include "kppfb/lyapunov.hpp"
#include "kppfb/parabolic.hpp"
#include "kppfb/stefan.hpp"

using namespace kppfb;

namespace {

thread_local std::string g_last_error;

kppfb_status to_status(const Error& e) {
    switch (e.code()) {
        case ErrorCode::InvalidArgument: return KPPFB_ERR_INVALID;
        case ErrorCode::Numerical: return KPPFB_ERR_NUMERIC;
        case ErrorCode::Regime: return KPPFB_ERR_REGIME;
        case ErrorCode::Io: return KPPFB_ERR_INTERNAL;
    }
    return KPPFB_ERR_INTERNAL;
}

template <typename F>
kppfb_status guarded(F&& body) {
    try {
        body();
        return KPPFB_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return to_status(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return KPPFB_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return KPPFB_ERR_INTERNAL;
    }
}

kppfb_status invalid(const char* msg) {
    g_last_error = msg;
    return KPPFB_ERR_INVALID;
}

QuasiPeriodicSignal make_signal(const kppfb_signal_desc& d) {
    std::vector<Mode> modes;
    modes.reserve(d.n_modes > 0 ? d.n_modes : 0);
    for (int i = 0; i < d.n_modes; ++i)
        modes.push_back({d.amplitude[i], d.frequency[i], d.phase[i]});
    return QuasiPeriodicSignal(d.mean, std::move(modes));
}

SpatialProfile make_spatial(const kppfb_spatial_desc& d) {
    if (d.n_modes <= 0) return SpatialProfile::constant();
    std::vector<SpatialMode> modes;
    modes.reserve(d.n_modes);
    for (int i = 0; i < d.n_modes; ++i)
        modes.push_back({d.amplitude[i], d.index[i], d.phase[i]});
    return SpatialProfile::periodic(d.period, std::move(modes));
}

SeparableCoefficient make_coeff(const kppfb_coeff_desc& d) {
    return SeparableCoefficient(make_signal(d.temporal), make_spatial(d.spatial));
}

BcTag make_bc(kppfb_bc bc) {
    switch (bc) {
        case KPPFB_BC_MIXED: return BcTag::NeumannLeft_DirichletRight;
        case KPPFB_BC_DIRICHLET: return BcTag::Dirichlet_Dirichlet;
        case KPPFB_BC_NEUMANN: return BcTag::Neumann_Neumann;
    }
    fail(ErrorCode::InvalidArgument, "unknown boundary condition tag");
}

LyapunovOptions make_lyap_opts(const kppfb_lyap_opts* o) {
    LyapunovOptions opts;
    if (o) {
        if (o->n > 0) opts.n = o->n;
        if (o->dt > 0) opts.dt = o->dt;
        if (o->horizon > 0) opts.horizon = o->horizon;
        if (o->window > 0) opts.window = o->window;
        if (o->spread_tol > 0) opts.spread_tol = o->spread_tol;
    }
    return opts;
}

StopRule make_stop(const kppfb_stop_params* s) {
    StopRule r;
    if (s) {
        if (s->t_max > 0) r.t_max = s->t_max;
        if (s->h_max > 0) r.h_max = s->h_max;
        if (s->eps_hprime > 0) r.eps_hprime = s->eps_hprime;
        if (s->eps_u > 0) r.eps_u = s->eps_u;
        if (s->stagnation_window > 0) r.stagnation_window = s->stagnation_window;
        if (s->record_dt > 0) r.record_dt = s->record_dt;
    }
    return r;
}

Thresholds make_thresholds(const kppfb_thresholds* t) {
    Thresholds th;
    if (t) {
        if (t->eps_hprime > 0) th.eps_hprime = t->eps_hprime;
        if (t->eps_u > 0) th.eps_u = t->eps_u;
        if (t->margin > 0) th.margin = t->margin;
        if (t->stagnation_window > 0) th.stagnation_window = t->stagnation_window;
    }
    return th;
}

FrontRunSpec make_spec(const kppfb_front_params& p) {
    FrontRunSpec spec;
    spec.h0 = p.h0;
    if (p.double_front) spec.g0 = p.g0;
    spec.amplitude = p.amplitude > 0 ? p.amplitude : 1.0;
    spec.cells = p.cells;
    spec.dt = p.dt;
    return spec;
}

void fill_verdict(const DichotomyVerdict& v, kppfb_verdict* out) {
    out->outcome = static_cast<int>(v.outcome);
    out->final_h = v.final_h;
    out->final_g = v.final_g;
    out->final_sup_u = v.final_sup_u;
    out->final_hprime = v.final_hprime;
    out->l_star = v.l_star;
    out->stop_reason = static_cast<int>(v.stop_reason);
}

kppfb_status copy_out(const std::vector<double>& src, double* buf, long cap, long* len) {
    if (static_cast<long>(src.size()) > cap) return invalid("buffer too small");
    std::memcpy(buf, src.data(), src.size() * sizeof(double));
    if (len) *len = static_cast<long>(src.size());
    return KPPFB_OK;
}

} // namespace

struct kppfb_reaction {
    KppReaction impl;
};

struct kppfb_trajectory {
    FrontTrajectory impl;
};

struct kppfb_mu_result {
    CriticalMuResult impl;
};

struct kppfb_sweep_result {
    std::vector<SweepCell> cells;
};

struct kppfb_pullback {
    PullbackResult impl;
};

extern "C" {

const char* kppfb_last_error(void) { return g_last_error.c_str(); }

const char* kppfb_version(void) { return "0.1.0"; }

kppfb_status kppfb_reaction_create(const kppfb_coeff_desc* a, const kppfb_coeff_desc* b,
                                   double time_shift, kppfb_reaction** out) {
    if (!a || !b || !out) return invalid("null argument");
    return guarded([&] {
        *out = new kppfb_reaction{KppReaction(make_coeff(*a), make_coeff(*b), time_shift)};
    });
}

void kppfb_reaction_free(kppfb_reaction* r) { delete r; }

kppfb_status kppfb_reaction_eval_f(const kppfb_reaction* r, double t, double x, double u,
                                   double* out) {
    if (!r || !out) return invalid("null argument");
    return guarded([&] { *out = r->impl(t, x, u); });
}

kppfb_status kppfb_reaction_eval_a(const kppfb_reaction* r, double t, double x, double* out) {
    if (!r || !out) return invalid("null argument");
    return guarded([&] { *out = r->impl.a(t, x); });
}

kppfb_status kppfb_reaction_carrying_bound(const kppfb_reaction* r, double* out) {
    if (!r || !out) return invalid("null argument");
    return guarded([&] { *out = r->impl.carrying_bound(); });
}

kppfb_status kppfb_reaction_time_shift(const kppfb_reaction* r, double tau, kppfb_reaction** out) {
    if (!r || !out) return invalid("null argument");
    return guarded([&] { *out = new kppfb_reaction{r->impl.shifted(tau)}; });
}

kppfb_status kppfb_signal_mean(const kppfb_signal_desc* s, double* out) {
    if (!s || !out) return invalid("null argument");
    return guarded([&] { *out = make_signal(*s).mean(); });
}

kppfb_status kppfb_lyapunov(const kppfb_coeff_desc* a, double l, kppfb_bc bc, double gamma,
                            const kppfb_lyap_opts* opts, kppfb_lyap_result* out,
                            double* profile_values, int profile_cap, int* profile_len) {
    if (!a || !out) return invalid("null argument");
    return guarded([&] {
        LyapunovResult res =
            principal_lyapunov(make_coeff(*a), l, make_bc(bc), gamma, make_lyap_opts(opts));
        out->value = res.estimate.value;
        out->horizon = res.estimate.horizon;
        out->renormalizations = res.estimate.renormalizations;
        out->window_spread = res.estimate.window_spread;
        if (profile_values) {
            const int n = res.profile.nodes();
            if (profile_cap < n) fail(ErrorCode::InvalidArgument, "profile buffer too small");
            for (int j = 0; j < n; ++j) profile_values[j] = res.profile[j];
            if (profile_len) *profile_len = n;
        }
    });
}

kppfb_status kppfb_critical_length(const kppfb_coeff_desc* a, kppfb_bc bc, double lo, double hi,
                                   double tol, const kppfb_lyap_opts* opts, double* out) {
    if (!a || !out) return invalid("null argument");
    return guarded(
        [&] { *out = critical_length(make_coeff(*a), make_bc(bc), tol, lo, hi, make_lyap_opts(opts)); });
}

kppfb_status kppfb_front_run(const kppfb_reaction* f, const kppfb_front_params* params,
                             const kppfb_stop_params* stop, const double* snapshot_times,
                             int n_snapshots, kppfb_trajectory** out) {
    if (!f || !params || !out) return invalid("null argument");
    return guarded([&] {
        const double amp = params->amplitude > 0 ? params->amplitude : 1.0;
        FrontState state = params->double_front
                               ? make_double_front(params->g0, params->h0, params->mu, amp,
                                                   params->cells)
                               : make_single_front(params->h0, params->mu, amp, params->cells);
        std::span<const double> snaps(snapshot_times, n_snapshots > 0 ? n_snapshots : 0);
        *out = new kppfb_trajectory{
            run_until(std::move(state), f->impl, make_stop(stop), snaps, params->dt)};
    });
}

void kppfb_trajectory_free(kppfb_trajectory* t) { delete t; }

long kppfb_trajectory_size(const kppfb_trajectory* t) {
    return t ? static_cast<long>(t->impl.size()) : 0;
}

int kppfb_trajectory_is_double(const kppfb_trajectory* t) {
    return t && t->impl.double_front ? 1 : 0;
}

int kppfb_trajectory_stop_reason(const kppfb_trajectory* t) {
    return t ? static_cast<int>(t->impl.stop_reason) : -1;
}

const char* kppfb_trajectory_error(const kppfb_trajectory* t) {
    return t ? t->impl.error.c_str() : "";
}

kppfb_status kppfb_trajectory_column(const kppfb_trajectory* t, kppfb_column col, double* buf,
                                     long cap, long* len) {
    if (!t || !buf) return invalid("null argument");
    const std::vector<double>* src = nullptr;
    switch (col) {
        case KPPFB_COL_T: src = &t->impl.times; break;
        case KPPFB_COL_H: src = &t->impl.h; break;
        case KPPFB_COL_G: src = &t->impl.g; break;
        case KPPFB_COL_SUP_U: src = &t->impl.sup_u; break;
        case KPPFB_COL_HPRIME: src = &t->impl.hprime; break;
    }
    if (!src) return invalid("unknown column");
    return copy_out(*src, buf, cap, len);
}

long kppfb_trajectory_snapshot_count(const kppfb_trajectory* t) {
    return t ? static_cast<long>(t->impl.snapshots.size()) : 0;
}

kppfb_status kppfb_trajectory_snapshot(const kppfb_trajectory* t, long i, double* time,
                                       double* x_buf, double* u_buf, long cap, long* len) {
    if (!t || !x_buf || !u_buf) return invalid("null argument");
    if (i < 0 || i >= static_cast<long>(t->impl.snapshots.size()))
        return invalid("snapshot index out of range");
    const FrontState& s = t->impl.snapshots[i];
    const int n = s.profile.nodes();
    if (cap < n) return invalid("buffer too small");
    for (int j = 0; j < n; ++j) {
        x_buf[j] = s.x_physical(j);
        u_buf[j] = s.profile[j];
    }
    if (time) *time = s.time();
    if (len) *len = n;
    return KPPFB_OK;
}

kppfb_status kppfb_classify(const kppfb_trajectory* t, double l_star,
                            const kppfb_thresholds* thresholds, kppfb_verdict* out) {
    if (!t || !out) return invalid("null argument");
    return guarded([&] {
        DichotomyVerdict v = classify(t->impl, l_star, make_thresholds(thresholds));
        fill_verdict(v, out);
    });
}

kppfb_status kppfb_critical_mu(const kppfb_reaction* f, const kppfb_front_params* params,
                               double mu_lo, double mu_hi, double tol, double l_star,
                               const kppfb_stop_params* stop, const kppfb_thresholds* thresholds,
                               kppfb_mu_result** out) {
    if (!f || !params || !out) return invalid("null argument");
    return guarded([&] {
        *out = new kppfb_mu_result{critical_mu(f->impl, make_spec(*params), mu_lo, mu_hi, tol,
                                               l_star, make_stop(stop),
                                               make_thresholds(thresholds))};
    });
}

void kppfb_mu_result_free(kppfb_mu_result* r) { delete r; }

kppfb_status kppfb_mu_result_bracket(const kppfb_mu_result* r, double* lo, double* hi,
                                     int* iterations) {
    if (!r) return invalid("null argument");
    if (lo) *lo = r->impl.mu_lo;
    if (hi) *hi = r->impl.mu_hi;
    if (iterations) *iterations = r->impl.iterations;
    return KPPFB_OK;
}

long kppfb_mu_result_probe_count(const kppfb_mu_result* r) {
    return r ? static_cast<long>(r->impl.probes.size()) : 0;
}

kppfb_status kppfb_mu_result_probe(const kppfb_mu_result* r, long i, double* mu, int* outcome,
                                   double* final_h, double* t_max_used) {
    if (!r) return invalid("null argument");
    if (i < 0 || i >= static_cast<long>(r->impl.probes.size()))
        return invalid("probe index out of range");
    const MuProbe& p = r->impl.probes[i];
    if (mu) *mu = p.mu;
    if (outcome) *outcome = static_cast<int>(p.outcome);
    if (final_h) *final_h = p.final_h;
    if (t_max_used) *t_max_used = p.t_max_used;
    return KPPFB_OK;
}

kppfb_status kppfb_sweep(const kppfb_reaction* f, const double* mus, int n_mu,
                         const double* h0s, int n_h0, const double* amplitudes, int n_amp,
                         double l_star, const kppfb_front_params* base,
                         const kppfb_stop_params* stop, const kppfb_thresholds* thresholds,
                         int jobs, kppfb_sweep_result** out) {
    if (!f || !mus || !h0s || !amplitudes || !out) return invalid("null argument");
    return guarded([&] {
        FrontRunSpec spec;
        if (base) spec = make_spec(*base);
        *out = new kppfb_sweep_result{sweep(f->impl, {mus, static_cast<size_t>(n_mu)},
                                            {h0s, static_cast<size_t>(n_h0)},
                                            {amplitudes, static_cast<size_t>(n_amp)}, l_star,
                                            make_stop(stop), make_thresholds(thresholds), spec,
                                            jobs)};
    });
}

void kppfb_sweep_result_free(kppfb_sweep_result* r) { delete r; }

long kppfb_sweep_size(const kppfb_sweep_result* r) {
    return r ? static_cast<long>(r->cells.size()) : 0;
}

kppfb_status kppfb_sweep_cell(const kppfb_sweep_result* r, long i, double* mu, double* h0,
                              double* amplitude, kppfb_verdict* verdict, char* error_buf,
                              size_t error_cap) {
    if (!r) return invalid("null argument");
    if (i < 0 || i >= static_cast<long>(r->cells.size())) return invalid("cell index out of range");
    const SweepCell& c = r->cells[i];
    if (mu) *mu = c.mu;
    if (h0) *h0 = c.h0;
    if (amplitude) *amplitude = c.amplitude;
    if (verdict) {
        if (c.verdict)
            fill_verdict(*c.verdict, verdict);
        else
            *verdict = kppfb_verdict{KPPFB_UNDETERMINED, 0, 0, 0, 0, 0, KPPFB_STOP_STEP_ERROR};
    }
    if (error_buf && error_cap > 0) {
        std::strncpy(error_buf, c.error.c_str(), error_cap - 1);
        error_buf[error_cap - 1] = '\0';
    }
    return KPPFB_OK;
}

kppfb_status kppfb_pullback_run(const kppfb_reaction* f, kppfb_pullback_domain domain,
                                double length, int cells, double dt, const double* depths,
                                int n_depths, double tol, double at_time, kppfb_pullback** out) {
    if (!f || !out) return invalid("null argument");
    return guarded([&] {
        PullbackOptions opts;
        opts.length = length;
        opts.n = cells;
        opts.dt = dt;
        if (depths && n_depths > 0) opts.depths.assign(depths, depths + n_depths);
        if (tol > 0) opts.tol = tol;
        opts.at_time = at_time;
        const PullbackDomain d = domain == KPPFB_DOMAIN_BOUNDED_MIXED
                                     ? PullbackDomain::BoundedMixed
                                     : PullbackDomain::HalfLine;
        *out = new kppfb_pullback{pullback_positive_solution(f->impl, d, opts)};
    });
}

void kppfb_pullback_free(kppfb_pullback* p) { delete p; }

kppfb_status kppfb_pullback_info(const kppfb_pullback* p, double* depth_used,
                                 double* last_change, double* interior_infimum, int* converged) {
    if (!p) return invalid("null argument");
    if (depth_used) *depth_used = p->impl.depth_used;
    if (last_change) *last_change = p->impl.last_change;
    if (interior_infimum) *interior_infimum = p->impl.interior_infimum;
    if (converged) *converged = p->impl.converged ? 1 : 0;
    return KPPFB_OK;
}

kppfb_status kppfb_pullback_profile(const kppfb_pullback* p, double* x_buf, double* u_buf,
                                    long cap, long* len) {
    if (!p || !x_buf || !u_buf) return invalid("null argument");
    const GridFunction& g = p->impl.profile;
    const int n = g.nodes();
    if (cap < n) return invalid("buffer too small");
    for (int j = 0; j < n; ++j) {
        x_buf[j] = g.mesh().x(j);
        u_buf[j] = g[j];
    }
    if (len) *len = n;
    return KPPFB_OK;
}

kppfb_status kppfb_part_metric(const double* u1, const double* u2, long n, int skip_left,
                               int skip_right, double* out) {
    if (!u1 || !u2 || !out) return invalid("null argument");
    if (n <= 0 || skip_left < 0 || skip_right < 0 || skip_left + skip_right >= n)
        return invalid("bad node range");
    return guarded([&] {
        double ratio = 1.0;
        for (long j = skip_left; j < n - skip_right; ++j) {
            if (!(u1[j] > 0.0) || !(u2[j] > 0.0))
                fail(ErrorCode::InvalidArgument,
                     "part metric is defined only inside the positive cone");
            ratio = std::max(ratio, std::max(u1[j] / u2[j], u2[j] / u1[j]));
        }
        *out = std::log(ratio);
    });
}

} // extern "C"
