/* C interface to the heavy-tail Fokker-Planck spectral toolkit.
 *
 * All functions return ht_status; results come back through out-parameters.
 * Opaque handles own their resources and must be released with the matching
 * _free call. On any failure ht_last_error() describes the most recent error
 * of the calling thread.
 */
#ifndef HEAVYTAIL_H
#define HEAVYTAIL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ht_status {
    HT_OK = 0,
    HT_ERR_DOMAIN = 1,      /* argument outside the admissible set            */
    HT_ERR_RESONANCE = 2,   /* beta in {2,3,4} or integer alpha               */
    HT_ERR_CONVERGENCE = 3, /* iteration/quadrature failed to converge        */
    HT_ERR_CONTRACTION = 4, /* fixed-point operator norm check failed         */
    HT_ERR_DEGENERATE = 5,  /* normalization coefficient vanished             */
    HT_ERR_RESOLUTION = 6,  /* grid or step refinement check failed           */
    HT_ERR_INVALID = 7,     /* malformed input                                */
    HT_ERR_INTERNAL = 8
} ht_status;

const char* ht_last_error(void);
const char* ht_version(void);

/* ---- model ---------------------------------------------------------- */

typedef struct ht_model ht_model;

/* beta in (1,5) \ {2,3,4}; lambda0 <= 0 or eta0 <= 0 pick the defaults */
ht_status ht_model_create(double beta, double lambda0, double eta0, ht_model** out);
void ht_model_free(ht_model* m);

double ht_model_beta(const ht_model* m);
double ht_model_gamma(const ht_model* m);
double ht_model_alpha(const ht_model* m);
double ht_model_c_beta_sq(const ht_model* m);
double ht_model_lambda0(const ht_model* m);
double ht_model_eta0(const ht_model* m);

ht_status ht_c_beta_squared(double beta, double* out);

/* ---- closed forms --------------------------------------------------- */

ht_status ht_kappa_closed(double beta, double* kappa);
ht_status ht_d_zero_closed(double beta, double* re, double* im);

/* ---- connection problem --------------------------------------------- */

typedef struct ht_connection ht_connection;

ht_status ht_connection_build(const ht_model* m, double lambda_re, double lambda_im,
                              ht_connection** out);
void ht_connection_free(ht_connection* c);

void ht_connection_d(const ht_connection* c, double* re, double* im);
void ht_connection_a(const ht_connection* c, double* re, double* im);
double ht_connection_residual(const ht_connection* c);
double ht_connection_s0(const ht_connection* c);
size_t ht_connection_samples(const ht_connection* c);
/* copies min(cap, samples) rows of (s, Re H, Im H) */
size_t ht_connection_copy(const ht_connection* c, double* s, double* re, double* im, size_t cap);
/* int_0^inf s^{1-gamma} Im H_0 ds (lambda must be 0) */
ht_status ht_connection_lemma_integral(const ht_connection* c, double* out);

/* ---- eigenvalue ------------------------------------------------------ */

typedef enum ht_method { HT_METHOD_CONNECTION = 0, HT_METHOD_MATRIX = 1 } ht_method;

typedef struct ht_eigen_out {
    double eta;
    double mu_re, mu_im;
    double lambda_re, lambda_im;
    double residual;
    int iterations;
    int method;
    int n_grid;          /* matrix method */
    double grid_mismatch; /* matrix method, pre-extrapolation */
} ht_eigen_out;

/* matrix method: v_max <= 0 and n_grid <= 0 pick defaults */
ht_status ht_solve_mu(const ht_model* m, double eta, ht_method method, double v_max, int n_grid,
                      ht_eigen_out* out);

typedef struct ht_fit_out {
    double exponent;
    double prefactor;
    double r_squared;
} ht_fit_out;

/* geometric sweep; results must hold `points` entries; fit may be NULL */
ht_status ht_sweep(const ht_model* m, double eta_min, double eta_max, int points,
                   ht_method method, int threads, ht_eigen_out* results, ht_fit_out* fit);

/* ---- kinetic mode evolution ----------------------------------------- */

typedef struct ht_mode_sample {
    double s;
    double rho_re, rho_im;
    double fhat_re, fhat_im;
    double ref_re, ref_im;
    double mass;
} ht_mode_sample;

/* equilibrium initial data g0 = F^{1/2}; out must hold n_steps+1 samples.
 * n_grid <= 0 picks the default. mu_out (optional) receives the discrete
 * generator eigenvalue used for the moment projection. */
ht_status ht_evolve_mode(const ht_model* m, double k, double epsilon, double s_final,
                         int n_steps, int n_grid, ht_mode_sample* out, double* mu_re,
                         double* mu_im);

/* sup_s |rho^eps - reference| per epsilon (decreasing epsilons required) */
ht_status ht_limit_gap(const ht_model* m, double k, double s_final, int n_steps,
                       const double* epsilons, int n_eps, int n_grid, double* gaps);

/* ---- verification ---------------------------------------------------- */

typedef struct ht_verify_record {
    char name[96];
    double measured;
    double tolerance;
    int pass;
    char note[128];
} ht_verify_record;

/* runs the invariant suite; returns the number of records written (<= cap);
 * *n_failed counts failures */
ht_status ht_verify(const ht_model* m, int threads, ht_verify_record* out, size_t cap,
                    size_t* n_written, size_t* n_failed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HEAVYTAIL_H */
