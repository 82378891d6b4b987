#include "model.hpp"

#include <cmath>

#include "errors.hpp"
#include "quadrature.hpp"

namespace ht {

namespace {

// int_V^infty (1+v^2)^{-p} dv as a binomial series in v^{-2}; V^2 >> 1.
double tail_integral(double p, double V) {
    double coef = 1.0, acc = 0.0;
    for (int j = 0; j < 24; ++j) {
        const double expo = 2.0 * p + 2.0 * j - 1.0;
        acc += coef * std::pow(V, -expo) / expo;
        coef *= -(p + j) / (j + 1.0); // binomial (-p choose j+1) recursion
        if (std::abs(coef) * std::pow(V, -expo - 2.0) < 1e-18 * std::abs(acc)) break;
    }
    return acc;
}

double full_line_integral(double p) {
    // int_R (1+v^2)^{-p} dv, p > 1/2
    const double V = 10.0;
    auto f = [p](double v) { return std::pow(1.0 + v * v, -p); };
    double body = gauss_panels(f, dyadic_breaks(1.0, V), 24);
    return 2.0 * (body + tail_integral(p, V));
}

} // namespace

double c_beta_squared(double beta) {
    if (!(beta > 1.0)) fail(ErrorCode::domain, "c_beta_squared: equilibrium not integrable for beta <= 1");
    return 1.0 / full_line_integral(0.5 * beta);
}

ModelParams ModelParams::create(double beta, double lambda0, double eta0) {
    if (!(beta > 1.0 && beta < 5.0))
        fail(ErrorCode::domain, "ModelParams: beta must lie in (1,5)");
    for (int k = 2; k <= 4; ++k)
        if (std::abs(beta - k) < 1e-9)
            fail(ErrorCode::resonance,
                 "ModelParams: beta in {2,3,4} is resonant (series denominators vanish)");
    ModelParams p;
    p.beta = beta;
    p.gamma = 0.5 * beta;
    p.alpha = (beta + 1.0) / 3.0;
    p.c_beta_sq = c_beta_squared(beta);
    p.lambda0 = lambda0;
    p.eta0 = eta0;
    return p;
}

double potential_w(double v, double gamma) {
    const double t = 1.0 + v * v;
    return gamma / (t * t) * (v * v * (gamma + 1.0) - 1.0);
}

double remainder_n(double v, double gamma) {
    if (v == 0.0) fail(ErrorCode::domain, "remainder_n: pole at v = 0");
    const double t = 1.0 + v * v;
    return -gamma * ((2.0 * gamma + 3.0) * v * v + gamma + 1.0) / (v * v * t * t);
}

double equilibrium_m(double v, double gamma) { return std::pow(1.0 + v * v, -0.5 * gamma); }

double weight_z(double v, double gamma) {
    if (v < 0.0) fail(ErrorCode::domain, "weight_z: needs v >= 0");
    if (v == 0.0) return 0.0;
    auto f = [gamma](double w) { return std::pow(1.0 + w * w, gamma); };
    const double acc = v <= 1.0 ? gauss_panel(f, 0.0, v, 24)
                                : gauss_panels(f, dyadic_breaks(1.0, v), 24);
    return equilibrium_m(v, gamma) * acc;
}

double equilibrium_mass_half(double gamma) { return 0.5 * full_line_integral(gamma); }

std::vector<double> theta_grid(double v_max, int n) {
    if (n < 2 || !(v_max > 0)) fail(ErrorCode::invalid_argument, "theta_grid: bad arguments");
    std::vector<double> v(n);
    const double th_max = std::atan(v_max);
    for (int i = 0; i < n; ++i) v[i] = std::tan(th_max * i / (n - 1));
    v.front() = 0.0;
    v.back() = v_max;
    return v;
}

SampledFn q_solve(const SampledFn& g, std::complex<double> a, std::complex<double> b, double gamma) {
    const size_t n = g.v.size();
    if (g.y.size() != n || n < 3) fail(ErrorCode::invalid_argument, "q_solve: bad sampled input");
    std::vector<double> M(n), Z(n);
    for (size_t i = 0; i < n; ++i) {
        M[i] = equilibrium_m(g.v[i], gamma);
        Z[i] = weight_z(g.v[i], gamma);
    }
    std::vector<std::complex<double>> gM(n), gZ(n);
    for (size_t i = 0; i < n; ++i) {
        gM[i] = g.y[i] * M[i];
        gZ[i] = g.y[i] * Z[i];
    }
    auto IgM = cumulative_integral(g.v, gM);
    auto IgZ = cumulative_integral(g.v, gZ);
    SampledFn f;
    f.v = g.v;
    f.y.resize(n);
    for (size_t i = 0; i < n; ++i)
        f.y[i] = -IgM[i] * Z[i] + IgZ[i] * M[i] + a * M[i] + b * Z[i];
    return f;
}

} // namespace ht
