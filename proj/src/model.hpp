#pragma once

#include <complex>
#include <vector>

namespace ht {

using cplx = std::complex<double>;

// Model constants for the heavy-tail equilibrium F(v) = C_beta^2 (1+v^2)^{-beta/2}.
// Single source of truth for beta, gamma = beta/2, alpha = (beta+1)/3 and the
// cutoffs used by the connection construction.
struct ModelParams {
    double beta;
    double gamma;      // beta/2
    double alpha;      // (beta+1)/3, fractional diffusion exponent
    double c_beta_sq;  // normalization, int F dv = 1
    double lambda0;    // radius of the spectral-parameter disc
    double eta0;       // largest Fourier-frequency parameter

    // Validates 1 < beta < 5, beta not in {2,3,4}, and computes c_beta_sq by
    // quadrature. Throws ht::Error(domain/resonance) otherwise.
    static ModelParams create(double beta, double lambda0 = 0.8, double eta0 = 0.2);
};

// C_beta^2 such that C_beta^2 * int_R (1+v^2)^{-beta/2} dv = 1. Quadrature on
// [0,10] plus a binomial tail correction; beta <= 1 is non-integrable.
double c_beta_squared(double beta);

// W(v) = gamma (1+v^2)^{-2} [ (gamma+1) v^2 - 1 ]
double potential_w(double v, double gamma);

// N(v) = W(v) - gamma(gamma+1)/v^2, evaluated in the expanded form
// -gamma[(2gamma+3)v^2 + gamma+1] / (v^2 (1+v^2)^2) to avoid cancellation.
double remainder_n(double v, double gamma);

// M(v) = (1+v^2)^{-gamma/2}, the kernel element of Q = -d^2/dv^2 + W
double equilibrium_m(double v, double gamma);

// Z(v) = M(v) int_0^v M(w)^{-2} dw, the second kernel element (Z ~ v^{gamma+1})
double weight_z(double v, double gamma);

// int_0^infty M^2 dv (= 1 / (2 C_beta^2) by the normalization of F)
double equilibrium_mass_half(double gamma);

// v_i = tan(theta_i), theta uniform on [0, atan(V)]; n samples including 0 and V
std::vector<double> theta_grid(double v_max, int n);

struct SampledFn {
    std::vector<double> v;
    std::vector<std::complex<double>> y;
};

// Solves Q f = g on the grid of g by variation of parameters:
//   f(v) = -(int_0^v g M) Z + (int_0^v g Z) M + a M + b Z
// so that f(0) = a and f'(0) = b.
SampledFn q_solve(const SampledFn& g, std::complex<double> a, std::complex<double> b, double gamma);

} // namespace ht
