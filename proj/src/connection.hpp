#pragma once

#include <memory>
#include <vector>

#include "model.hpp"
#include "ode.hpp"
#include "specfun.hpp"

namespace ht {

// Value in scaled form: f = mantissa * exp(-w). w carries the Airy exponent in
// the decay region so that kernel ratios never overflow.
struct ScaledVal {
    cplx mantissa;
    cplx w;
    cplx unscaled() const { return mantissa * std::exp(-w); }
};

// Piecewise evaluator for the decaying solution H_lambda of
//   -s^2 f'' + gamma(gamma+1) f + i s^3 f = lambda s^2 f.
// Frobenius series below s_series, Hermite-interpolated backward-integration
// nodes in the middle, Airy * (1 + R) beyond s_b. Values are normalized so that
// H = s^{-gamma} F_{+} + d(lambda) s^{gamma+1} F_{-}.
class HProfile {
public:
    ScaledVal value(double s) const;
    ScaledVal derivative(double s) const;
    cplx q_coeff(double s) const; // H'' = q(s) H

    cplx lambda;
    double gamma = 0.0;
    double s_series = 1.0;
    double s_b = 9.0;
    double s_max = 48.0;
    cplx a_raw;       // pre-normalization coefficient a(lambda) of the Airy-started run
    cplx d_coeff;     // connection coefficient d(lambda)
    ComplexSeries fp; // F_{+,lambda}
    ComplexSeries fm; // F_{-,lambda}
    std::vector<HermiteNode> nodes;        // ascending t; unnormalized trajectory
    std::vector<double> r_grid;            // Airy-region grid
    std::vector<cplx> r_vals, r_prime;     // R and R' on r_grid
    double norm_point = 0.5;               // matching point used for normalization
};

// Sampled decaying solution and its connection data.
struct ConnectionSolution {
    cplx lambda;
    std::vector<double> s_grid;  // log-spaced on (0, s_max]
    std::vector<cplx> h_values;  // normalized samples
    cplx a_coeff;                // a(lambda) before normalization
    cplx d_coeff;                // d(lambda)
    double residual = 0.0;       // max relative ODE residual over spot checks
    double s0 = 0.0;             // measured contraction cutoff
    std::shared_ptr<const HProfile> profile;
};

// R_lambda on [s0, s_max] from the Neumann series of the Volterra operator
//   K(g)(s) = gamma(gamma+1) int_s^inf [int_s^z G^2(z)/G^2(u) du] g(z)/z^2 dz,
// G(s) = Ai(e^{i pi/6}(s + i lambda)). n_terms < 0 iterates to a 1e-12 sup-norm
// tail; n_terms >= 0 sums exactly that many applications past K(1).
struct SampledR {
    std::vector<double> s;
    std::vector<cplx> r;
    double kernel_norm = 0.0; // measured sup row norm
    int terms_used = 0;
};
SampledR solve_r_lambda(cplx lambda, double gamma, double s0, int n_terms = -1);

ConnectionSolution build_h(cplx lambda, const ModelParams& params);

// d(0) = -e^{i pi (2 gamma+1)/6} 9^{-(2 gamma+1)/3} Gamma(1-a)/Gamma(1+a),
// a = (2 gamma + 1)/3. Pole at a = 1 (beta = 2).
cplx d_zero_closed(double gamma);

// max over (s, z) sample pairs of |int_s^z G^2(z)/G^2(u) du| (1+|z|)^{1/2}
double kernel_bound_check(cplx lambda, const std::vector<double>& s_samples);

// int_0^inf s^{1-gamma} Im H_0(s) ds; equals (2 gamma + 1) Re d(0).
double coefficient_lemma_integral(const ConnectionSolution& sol);

} // namespace ht
