/* kppfb: free-boundary KPP solver core, C interface.
 *
 * All entry points return a kppfb_status; on failure the thread-local
 * message from kppfb_last_error() describes what went wrong. Objects
 * returned through ** out-parameters are owned by the caller and released
 * with the matching *_free function. Handles are immutable once created and
 * may be shared across threads; independent runs need no coordination.
 */
#ifndef KPPFB_H
#define KPPFB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    KPPFB_OK = 0,
    KPPFB_ERR_INVALID = 1,  /* bad arguments or preconditions */
    KPPFB_ERR_NUMERIC = 2,  /* discretization failure */
    KPPFB_ERR_REGIME = 3,   /* mathematically empty result (e.g. lambda <= 0) */
    KPPFB_ERR_INTERNAL = 4
} kppfb_status;

const char* kppfb_last_error(void);
const char* kppfb_version(void);

/* ---- coefficients ------------------------------------------------------ */

/* mean + sum_k amp[k]*cos(freq[k]*t + phase[k]); freq[k] > 0 */
typedef struct {
    double mean;
    int n_modes;
    const double* amplitude;
    const double* frequency;
    const double* phase;
} kppfb_signal_desc;

/* spatial factor: constant 1 (n_modes == 0) or
 * 1 + sum_j amp[j]*cos(2*pi*index[j]*x/period + phase[j]), sum |amp| < 1 */
typedef struct {
    double period; /* ignored when n_modes == 0 */
    int n_modes;
    const double* amplitude;
    const int* index;
    const double* phase;
} kppfb_spatial_desc;

/* a(t,x) = temporal(t) * spatial(x) */
typedef struct {
    kppfb_signal_desc temporal;
    kppfb_spatial_desc spatial;
} kppfb_coeff_desc;

typedef struct kppfb_reaction kppfb_reaction;

/* f(t,x,u) = a(t+shift,x) - b(t+shift,x)*u, inf b > 0 enforced */
kppfb_status kppfb_reaction_create(const kppfb_coeff_desc* a, const kppfb_coeff_desc* b,
                                   double time_shift, kppfb_reaction** out);
void kppfb_reaction_free(kppfb_reaction* r);

kppfb_status kppfb_reaction_eval_f(const kppfb_reaction* r, double t, double x, double u,
                                   double* out);
kppfb_status kppfb_reaction_eval_a(const kppfb_reaction* r, double t, double x, double* out);
kppfb_status kppfb_reaction_carrying_bound(const kppfb_reaction* r, double* out);
kppfb_status kppfb_reaction_time_shift(const kppfb_reaction* r, double tau, kppfb_reaction** out);
kppfb_status kppfb_signal_mean(const kppfb_signal_desc* s, double* out);

/* ---- principal Lyapunov exponents -------------------------------------- */

typedef enum {
    KPPFB_BC_MIXED = 0,     /* u_x(0)=0, u(l)=0 */
    KPPFB_BC_DIRICHLET = 1, /* u(0)=u(l)=0 */
    KPPFB_BC_NEUMANN = 2    /* u_x(0)=u_x(l)=0 */
} kppfb_bc;

typedef struct {
    int n;            /* total cells; 0 -> 256 per unit length */
    double dt;        /* 0 -> dx */
    double horizon;   /* 0 -> 2000 */
    double window;    /* 0 -> 1 */
    double spread_tol;/* 0 -> disabled */
} kppfb_lyap_opts;

typedef struct {
    double value;
    double horizon;
    long renormalizations;
    double window_spread;
} kppfb_lyap_result;

/* profile_values may be NULL; otherwise it receives the normalized principal
 * profile (profile_cap >= n+1 nodes, *profile_len set to nodes written) */
kppfb_status kppfb_lyapunov(const kppfb_coeff_desc* a, double l, kppfb_bc bc, double gamma,
                            const kppfb_lyap_opts* opts, kppfb_lyap_result* out,
                            double* profile_values, int profile_cap, int* profile_len);

kppfb_status kppfb_critical_length(const kppfb_coeff_desc* a, kppfb_bc bc, double lo, double hi,
                                   double tol, const kppfb_lyap_opts* opts, double* out);

/* ---- free-boundary runs ------------------------------------------------ */

typedef struct {
    double h0;
    double g0;        /* used when double_front != 0; must be < h0 */
    int double_front;
    double mu;
    double amplitude; /* initial profile A*cos(pi x/(2 h0)) resp. A*sin(pi xi) */
    int cells;        /* 0 -> 256 per unit of initial extent */
    double dt;        /* 0 -> reference dx capped by the reaction bound */
} kppfb_front_params;

typedef struct {
    double t_max;             /* 0 -> 200 */
    double h_max;             /* 0 -> 1e9; bound on h (single) or h-g (double) */
    double eps_hprime;        /* 0 -> 1e-5 */
    double eps_u;             /* 0 -> 1e-4 */
    double stagnation_window; /* 0 -> 50 */
    double record_dt;         /* 0 -> every step */
} kppfb_stop_params;

typedef enum {
    KPPFB_STOP_TMAX = 0,
    KPPFB_STOP_HMAX = 1,
    KPPFB_STOP_STAGNATION = 2,
    KPPFB_STOP_STEP_ERROR = 3
} kppfb_stop_reason;

typedef enum {
    KPPFB_COL_T = 0,
    KPPFB_COL_H = 1,
    KPPFB_COL_G = 2,
    KPPFB_COL_SUP_U = 3,
    KPPFB_COL_HPRIME = 4
} kppfb_column;

typedef struct kppfb_trajectory kppfb_trajectory;

kppfb_status kppfb_front_run(const kppfb_reaction* f, const kppfb_front_params* params,
                             const kppfb_stop_params* stop, const double* snapshot_times,
                             int n_snapshots, kppfb_trajectory** out);
void kppfb_trajectory_free(kppfb_trajectory* t);

long kppfb_trajectory_size(const kppfb_trajectory* t);
int kppfb_trajectory_is_double(const kppfb_trajectory* t);
int kppfb_trajectory_stop_reason(const kppfb_trajectory* t);
const char* kppfb_trajectory_error(const kppfb_trajectory* t); /* "" unless step_error */
kppfb_status kppfb_trajectory_column(const kppfb_trajectory* t, kppfb_column col, double* buf,
                                     long cap, long* len);
long kppfb_trajectory_snapshot_count(const kppfb_trajectory* t);
/* x_buf/u_buf hold the physical node positions and values (cap nodes each) */
kppfb_status kppfb_trajectory_snapshot(const kppfb_trajectory* t, long i, double* time,
                                       double* x_buf, double* u_buf, long cap, long* len);

/* ---- dichotomy --------------------------------------------------------- */

typedef struct {
    double eps_hprime;        /* 0 -> 1e-5 */
    double eps_u;             /* 0 -> 1e-4 */
    double margin;            /* <= 0 -> 0.05 * l_star */
    double stagnation_window; /* 0 -> 50 */
} kppfb_thresholds;

typedef enum {
    KPPFB_SPREADING = 0,
    KPPFB_VANISHING = 1,
    KPPFB_UNDETERMINED = 2
} kppfb_outcome;

typedef struct {
    int outcome;      /* kppfb_outcome */
    double final_h;
    double final_g;
    double final_sup_u;
    double final_hprime;
    double l_star;
    int stop_reason;  /* kppfb_stop_reason */
} kppfb_verdict;

kppfb_status kppfb_classify(const kppfb_trajectory* t, double l_star,
                            const kppfb_thresholds* thresholds, kppfb_verdict* out);

typedef struct kppfb_mu_result kppfb_mu_result;

kppfb_status kppfb_critical_mu(const kppfb_reaction* f, const kppfb_front_params* params,
                               double mu_lo, double mu_hi, double tol, double l_star,
                               const kppfb_stop_params* stop, const kppfb_thresholds* thresholds,
                               kppfb_mu_result** out);
void kppfb_mu_result_free(kppfb_mu_result* r);
kppfb_status kppfb_mu_result_bracket(const kppfb_mu_result* r, double* lo, double* hi,
                                     int* iterations);
long kppfb_mu_result_probe_count(const kppfb_mu_result* r);
kppfb_status kppfb_mu_result_probe(const kppfb_mu_result* r, long i, double* mu, int* outcome,
                                   double* final_h, double* t_max_used);

typedef struct kppfb_sweep_result kppfb_sweep_result;

kppfb_status kppfb_sweep(const kppfb_reaction* f, const double* mus, int n_mu,
                         const double* h0s, int n_h0, const double* amplitudes, int n_amp,
                         double l_star, const kppfb_front_params* base,
                         const kppfb_stop_params* stop, const kppfb_thresholds* thresholds,
                         int jobs, kppfb_sweep_result** out);
void kppfb_sweep_result_free(kppfb_sweep_result* r);
long kppfb_sweep_size(const kppfb_sweep_result* r);
/* error_buf receives the cell error ("" if none) */
kppfb_status kppfb_sweep_cell(const kppfb_sweep_result* r, long i, double* mu, double* h0,
                              double* amplitude, kppfb_verdict* verdict, char* error_buf,
                              size_t error_cap);

/* ---- pullback construction -------------------------------------------- */

typedef enum {
    KPPFB_DOMAIN_BOUNDED_MIXED = 0,
    KPPFB_DOMAIN_HALF_LINE = 1
} kppfb_pullback_domain;

typedef struct kppfb_pullback kppfb_pullback;

/* depths: increasing pullback depth schedule (NULL -> 25,50,100,200,400) */
kppfb_status kppfb_pullback_run(const kppfb_reaction* f, kppfb_pullback_domain domain,
                                double length, int cells, double dt, const double* depths,
                                int n_depths, double tol, double at_time, kppfb_pullback** out);
void kppfb_pullback_free(kppfb_pullback* p);
kppfb_status kppfb_pullback_info(const kppfb_pullback* p, double* depth_used,
                                 double* last_change, double* interior_infimum, int* converged);
kppfb_status kppfb_pullback_profile(const kppfb_pullback* p, double* x_buf, double* u_buf,
                                    long cap, long* len);

/* ---- diagnostics ------------------------------------------------------- */

/* part metric over nodes [skip_left, n-1-skip_right]; both inputs positive */
kppfb_status kppfb_part_metric(const double* u1, const double* u2, long n, int skip_left,
                               int skip_right, double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* KPPFB_H */
