#include "heavytail/heavytail.h"

#include <cstdio>
#include <cstring>
#include <string>

#include "connection.hpp"
#include "eigen.hpp"
#include "errors.hpp"
#include "halfline.hpp"
#include "kinetic.hpp"
#include "model.hpp"
#include "verify.hpp"

namespace {

thread_local std::string g_last_error;

ht_status map_code(ht::ErrorCode c) {
    using EC = ht::ErrorCode;
    switch (c) {
        case EC::domain: return HT_ERR_DOMAIN;
        case EC::resonance: return HT_ERR_RESONANCE;
        case EC::convergence: return HT_ERR_CONVERGENCE;
        case EC::contraction: return HT_ERR_CONTRACTION;
        case EC::degenerate: return HT_ERR_DEGENERATE;
        case EC::resolution: return HT_ERR_RESOLUTION;
        case EC::invalid_argument: return HT_ERR_INVALID;
    }
    return HT_ERR_INTERNAL;
}

template <typename F>
ht_status guarded(F&& f) {
    try {
        f();
        return HT_OK;
    } catch (const ht::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return HT_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return HT_ERR_INTERNAL;
    }
}

} // namespace

struct ht_model {
    ht::ModelParams p;
};

struct ht_connection {
    ht::ConnectionSolution sol;
};

extern "C" {

const char* ht_last_error(void) { return g_last_error.c_str(); }
const char* ht_version(void) { return "heavytail 0.1.0"; }

ht_status ht_model_create(double beta, double lambda0, double eta0, ht_model** out) {
    return guarded([&] {
        if (!out) ht::fail(ht::ErrorCode::invalid_argument, "null output handle");
        ht::ModelParams p = ht::ModelParams::create(beta, lambda0 > 0 ? lambda0 : 0.8,
                                                    eta0 > 0 ? eta0 : 0.2);
        *out = new ht_model{p};
    });
}

void ht_model_free(ht_model* m) { delete m; }

double ht_model_beta(const ht_model* m) { return m->p.beta; }
double ht_model_gamma(const ht_model* m) { return m->p.gamma; }
double ht_model_alpha(const ht_model* m) { return m->p.alpha; }
double ht_model_c_beta_sq(const ht_model* m) { return m->p.c_beta_sq; }
double ht_model_lambda0(const ht_model* m) { return m->p.lambda0; }
double ht_model_eta0(const ht_model* m) { return m->p.eta0; }

ht_status ht_c_beta_squared(double beta, double* out) {
    return guarded([&] { *out = ht::c_beta_squared(beta); });
}

ht_status ht_kappa_closed(double beta, double* kappa) {
    return guarded([&] { *kappa = ht::kappa_closed(beta); });
}

ht_status ht_d_zero_closed(double beta, double* re, double* im) {
    return guarded([&] {
        const ht::cplx d = ht::d_zero_closed(0.5 * beta);
        *re = d.real();
        *im = d.imag();
    });
}

ht_status ht_connection_build(const ht_model* m, double lambda_re, double lambda_im,
                              ht_connection** out) {
    return guarded([&] {
        *out = new ht_connection{ht::build_h(ht::cplx(lambda_re, lambda_im), m->p)};
    });
}

void ht_connection_free(ht_connection* c) { delete c; }

void ht_connection_d(const ht_connection* c, double* re, double* im) {
    *re = c->sol.d_coeff.real();
    *im = c->sol.d_coeff.imag();
}

void ht_connection_a(const ht_connection* c, double* re, double* im) {
    *re = c->sol.a_coeff.real();
    *im = c->sol.a_coeff.imag();
}

double ht_connection_residual(const ht_connection* c) { return c->sol.residual; }
double ht_connection_s0(const ht_connection* c) { return c->sol.s0; }
size_t ht_connection_samples(const ht_connection* c) { return c->sol.s_grid.size(); }

size_t ht_connection_copy(const ht_connection* c, double* s, double* re, double* im, size_t cap) {
    const size_t n = std::min(cap, c->sol.s_grid.size());
    for (size_t i = 0; i < n; ++i) {
        if (s) s[i] = c->sol.s_grid[i];
        if (re) re[i] = c->sol.h_values[i].real();
        if (im) im[i] = c->sol.h_values[i].imag();
    }
    return n;
}

ht_status ht_connection_lemma_integral(const ht_connection* c, double* out) {
    return guarded([&] {
        if (std::abs(c->sol.lambda) > 1e-12)
            ht::fail(ht::ErrorCode::domain, "lemma integral is defined at lambda = 0");
        *out = ht::coefficient_lemma_integral(c->sol);
    });
}

ht_status ht_solve_mu(const ht_model* m, double eta, ht_method method, double v_max, int n_grid,
                      ht_eigen_out* out) {
    return guarded([&] {
        ht::EigenResult r;
        if (method == HT_METHOD_CONNECTION) {
            r = ht::solve_mu_connection(eta, m->p);
        } else {
            const double vm = v_max > 0 ? v_max
                                        : std::max(50.0, 10.0 * std::pow(std::max(std::abs(eta), 1e-3),
                                                                         -1.0 / 3.0));
            r = ht::solve_mu_matrix(eta, vm, n_grid > 0 ? n_grid : (1 << 14), m->p.gamma);
        }
        out->eta = r.eta;
        out->mu_re = r.mu.real();
        out->mu_im = r.mu.imag();
        out->lambda_re = r.lambda.real();
        out->lambda_im = r.lambda.imag();
        out->residual = r.residual;
        out->iterations = r.iterations;
        out->method = int(r.method);
        out->n_grid = r.n_grid;
        out->grid_mismatch = r.grid_mismatch;
    });
}

ht_status ht_sweep(const ht_model* m, double eta_min, double eta_max, int points,
                   ht_method method, int threads, ht_eigen_out* results, ht_fit_out* fit) {
    return guarded([&] {
        auto rs = ht::sweep_mu(m->p, eta_min, eta_max, points,
                               method == HT_METHOD_MATRIX ? ht::EigenMethod::matrix
                                                          : ht::EigenMethod::connection,
                               threads);
        for (int i = 0; i < points; ++i) {
            const auto& r = rs[i];
            results[i] = {r.eta,          r.mu.real(),     r.mu.imag(),
                          r.lambda.real(), r.lambda.imag(), r.residual,
                          r.iterations,   int(r.method),   r.n_grid,
                          r.grid_mismatch};
        }
        if (fit) {
            std::vector<std::pair<double, ht::cplx>> pts;
            for (const auto& r : rs) pts.emplace_back(r.eta, r.mu);
            const ht::ScalingFit f = ht::fit_scaling(pts);
            fit->exponent = f.exponent;
            fit->prefactor = f.prefactor;
            fit->r_squared = f.r_squared;
        }
    });
}

ht_status ht_evolve_mode(const ht_model* m, double k, double epsilon, double s_final,
                         int n_steps, int n_grid, ht_mode_sample* out, double* mu_re,
                         double* mu_im) {
    return guarded([&] {
        ht::ModeEvolution ev =
            ht::evolve_mode(k, epsilon, ht::equilibrium_initial_data(m->p), s_final, n_steps,
                            m->p, n_grid > 0 ? n_grid : (1 << 14), true);
        for (int i = 0; i <= n_steps; ++i) {
            out[i] = {ev.times[i],
                      ev.rho_hat[i].real(),
                      ev.rho_hat[i].imag(),
                      ev.f_hat[i].real(),
                      ev.f_hat[i].imag(),
                      ev.reference[i].real(),
                      ev.reference[i].imag(),
                      ev.mass[i]};
        }
        if (mu_re) *mu_re = ev.mu_eta.real();
        if (mu_im) *mu_im = ev.mu_eta.imag();
    });
}

ht_status ht_limit_gap(const ht_model* m, double k, double s_final, int n_steps,
                       const double* epsilons, int n_eps, int n_grid, double* gaps) {
    return guarded([&] {
        std::vector<double> eps(epsilons, epsilons + n_eps);
        auto g = ht::limit_gap(k, s_final, n_steps, eps, ht::equilibrium_initial_data(m->p),
                               m->p, n_grid > 0 ? n_grid : (1 << 14));
        for (int i = 0; i < n_eps; ++i) gaps[i] = g[i];
    });
}

ht_status ht_verify(const ht_model* m, int threads, ht_verify_record* out, size_t cap,
                    size_t* n_written, size_t* n_failed) {
    return guarded([&] {
        auto records = ht::run_verification(m->p, threads);
        size_t w = 0, f = 0;
        for (const auto& r : records) {
            if (!r.pass) ++f;
            if (w < cap) {
                std::snprintf(out[w].name, sizeof(out[w].name), "%s", r.name.c_str());
                out[w].measured = r.measured;
                out[w].tolerance = r.tolerance;
                out[w].pass = r.pass ? 1 : 0;
                std::snprintf(out[w].note, sizeof(out[w].note), "%s", r.note.c_str());
                ++w;
            }
        }
        if (n_written) *n_written = w;
        if (n_failed) *n_failed = f;
    });
}

} // extern "C"
