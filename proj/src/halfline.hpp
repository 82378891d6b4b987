#pragma once

#include <memory>
#include <vector>

#include "connection.hpp"
#include "model.hpp"

namespace ht {

// Evaluator for the half-line solution G_{lambda,eta}: backward-integration
// nodes on [0, v0], Theta (1 + R) on [v0, v_max].
class GProfile {
public:
    cplx value(double v) const;
    cplx derivative(double v) const;
    std::pair<cplx, cplx> theta_scaled(double v) const; // (log mantissa, w) of Theta

    cplx lambda;
    double eta = 0.0;
    double gamma = 0.0;
    double v0 = 5.0;
    double v_max = 50.0;
    std::shared_ptr<const HProfile> h; // empty at eta = 0 (Theta = v^{-gamma})
    std::vector<HermiteNode> nodes;    // [0, v0]
    std::vector<double> r_grid;        // [v0, v_max]
    std::vector<cplx> r_vals, r_prime;
    cplx mu; // lambda eta^{2/3}
};

struct HalfLineSolution {
    cplx lambda;
    double eta = 0.0;
    std::vector<double> v_grid; // [0, v_max]
    std::vector<cplx> g_values;
    cplx g0;           // G(0)
    cplx g0_prime;     // G'(0)
    cplx a_coeff;      // 1 / G(0)
    cplx b_coeff;      // a G'(0)
    double residual = 0.0;
    cplx moment_gm;    // int_0^{v_max} G M dv (quadrature record for b checks)
    cplx moment_vgm;   // int_0^{v_max} v G M dv
    std::shared_ptr<const GProfile> profile;
};

// Theta_{lambda,eta}(v) = eta^{gamma/3} H_lambda(eta^{1/3} v); eta = 0 falls back
// to the limit v^{-gamma}.
cplx theta(const ConnectionSolution& h, double eta, double v);
cplx theta(cplx lambda, double eta, double v, const ModelParams& params);

HalfLineSolution build_g(cplx lambda, double eta, const ModelParams& params);
// reuse an existing H_lambda (the Newton solve and eta-sweeps call this form)
HalfLineSolution build_g(const ConnectionSolution& h, double eta, const ModelParams& params);

// b(lambda,eta) from the integral identity
//   b = a eta^{2/3} int_0^inf (lambda - i eta^{1/3} v) G M dv;
// must agree with the boundary value sol.b_coeff.
cplx coeff_b_integral(cplx lambda, double eta, const HalfLineSolution& sol);

// Discrete residual sup-norms of Q[f_eta] - eta^2 v l_eta and Q[l_eta] + v f_eta
// with f = Re(aG), l = Im(aG)/eta, on a uniform grid of n points over [0, v_hi].
// At eta = 0 the second residual is reported as 0 (l undefined).
std::pair<double, double> fl_decomposition_residual(double eta, const HalfLineSolution& sol,
                                                    int n_grid = 2000, double v_hi = 0.0);

} // namespace ht
