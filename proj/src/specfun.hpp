#pragma once

#include <complex>
#include <vector>

namespace ht {

using cplx = std::complex<double>;

// Gamma(z) via a 14-term Lanczos kernel, reflection formula for Re z < 1/2.
// Relative error below ~1e-13 for |z| <= 20; throws on the poles 0, -1, -2, ...
cplx gamma_complex(cplx z);

// Ai(zeta) on (a neighbourhood of) the rotated ray zeta = e^{i pi/6}(s + i lambda).
// Maclaurin series for |zeta| <= 6, exponential asymptotic expansion beyond.
cplx airy_ray(cplx zeta);

// Scaled pair: Ai = tau e^{-w}, Ai' = tau_d e^{-w} with w = (2/3) zeta^{3/2}.
// Keeps kernel ratios representable deep into the decay region.
struct AiryScaled {
    cplx tau;
    cplx tau_d;
    cplx w;
};
AiryScaled airy_ray_scaled(cplx zeta);

// validation hook: force one representation regardless of |zeta| (the two must
// agree to ~1e-9 in an annulus around the switch radius)
cplx airy_ray_via(cplx zeta, bool use_series);

// Truncated power series s^{offset} * sum coeffs[n] s^n.
struct ComplexSeries {
    double offset = 0.0;             // leading exponent delta
    std::vector<cplx> coeffs;        // g_0 .. g_N
    double radius_hint = 0.0;        // largest s with certified truncation error
};

// Frobenius coefficients of (eqdiffsing) around s = 0:
//   g_{n+2} = [-lambda g_n + i g_{n-1}] / ((n+2)(n+1+2 delta)),  g_0 = 1, g_1 = 0.
// delta = -gamma gives F_{+,lambda}, delta = gamma+1 gives F_{-,lambda}.
ComplexSeries frobenius_series(cplx lambda, double delta, int n_max = 120);

cplx eval_series(const ComplexSeries& s, double x);
// derivative of x^{offset} * sum g_n x^n with respect to x
cplx eval_series_derivative(const ComplexSeries& s, double x);

// F_alpha(z) = sum h_n z^n with h_0 = 1, h_{n+1} = h_n / (n+1-alpha)
cplx f_alpha_series(cplx z, double alpha, int n_max = 200);

// Closed form Gamma(1-alpha) z^alpha e^z + alpha int_0^inf e^{-zv} (1+v)^{-alpha-1} dv,
// valid for Re z > 0 (principal branch of z^alpha).
cplx f_alpha_closed(cplx z, double alpha);

// D_alpha(x) = sum d_n x^n, d_0 = 1, d_{n+1} = i d_n / (9 (n+1)(n+1-alpha)).
cplx d_alpha_series(double x, double alpha);

// coefficients d_n themselves (for the growth-bound checks)
std::vector<cplx> d_alpha_coeffs(double alpha, int n_max);

} // namespace ht
