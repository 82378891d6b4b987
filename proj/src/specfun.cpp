#include "specfun.hpp"

#include <cmath>

#include "errors.hpp"
#include "quadrature.hpp"

namespace ht {

namespace {

constexpr double kPi = 3.14159265358979323846;

// log Gamma for Re z > 0 (Lanczos, g = 5.24218750, 14 coefficients)
cplx log_gamma_pos(cplx z) {
    static const double coef[14] = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   3.39946499848118887e-5,  4.65236289270485756e-5,
        -9.83744753048795646e-5, 1.58088703224912494e-4,  -2.10264441724104883e-4,
        2.17439618115212643e-4,  -1.64318106536763890e-4, 8.44182239838527433e-5,
        -2.61908384015814087e-5, 3.68991826595316234e-6};
    cplx tmp = z + 5.24218750000000000;
    tmp = (z + 0.5) * std::log(tmp) - tmp;
    cplx ser = 0.999999999999997092;
    cplx y = z;
    for (int j = 0; j < 14; ++j) {
        y += 1.0;
        ser += coef[j] / y;
    }
    return tmp + std::log(2.5066282746310005 * ser / z);
}

// exp(w) - 1 without cancellation for small |w|
cplx cexpm1(cplx w) {
    if (std::abs(w) > 0.5) return std::exp(w) - 1.0;
    cplx term = w, acc = w;
    for (int k = 2; k < 24; ++k) {
        term *= w / double(k);
        acc += term;
        if (std::abs(term) < 1e-18 * std::abs(acc)) break;
    }
    return acc;
}

// log(sin(pi z)) with the branch handled through exp(2 i pi z); avoids overflow
// for large |Im z| and keeps full phase accuracy near the real zeros.
cplx log_sin_pi(cplx z) {
    const cplx i(0.0, 1.0);
    if (z.imag() > 0.0)
        return -i * (kPi / 2.0) - std::log(2.0) - i * kPi * z + std::log(cexpm1(2.0 * i * kPi * z));
    return -i * (kPi / 2.0) - std::log(2.0) + i * kPi * z + std::log(-cexpm1(-2.0 * i * kPi * z));
}

cplx log_gamma(cplx z) {
    if (z.real() >= 0.5) return log_gamma_pos(z);
    return std::log(cplx(kPi)) - log_sin_pi(z) - log_gamma_pos(1.0 - z);
}

// u_k of the Airy asymptotic series and the companion v_k for Ai'
double airy_u(int k, double prev) {
    // u_k / u_{k-1} = (3k-5/2)(3k-3/2)(3k-1/2) / (54 k (k-1/2))
    const double a = 3.0 * k - 2.5, b = 3.0 * k - 1.5, c = 3.0 * k - 0.5;
    return prev * a * b * c / (54.0 * k * (k - 0.5));
}

constexpr double kAirySwitch = 6.0;
constexpr int kAiryAsymptoticTerms = 20;

// extended precision keeps the series cancellation (factor ~e^7 near the switch
// radius) below 1e-15 of the result
void airy_maclaurin(cplx z, cplx& ai, cplx& aip) {
    using lcplx = std::complex<long double>;
    static const long double ai0 = 0.35502805388781723926L;
    static const long double aip0 = -0.25881940379280679841L;
    const lcplx zl(z.real(), z.imag());
    const lcplx z3 = zl * zl * zl;
    lcplx tf = 1.0L, tg = zl;
    lcplx f = tf, g = tg;
    lcplx fd = 0.0L, gd = 1.0L;
    for (int k = 1; k < 80; ++k) {
        tf *= z3 / (long double)((3 * k) * (3 * k - 1));
        tg *= z3 / (long double)((3 * k + 1) * (3 * k));
        f += tf;
        g += tg;
        if (zl != lcplx(0.0L)) {
            fd += tf * (long double)(3 * k) / zl;
            gd += tg * (long double)(3 * k + 1) / zl;
        }
        if (std::abs(tf) + std::abs(tg) < 1e-22L * (std::abs(f) + std::abs(g))) break;
    }
    const lcplx a = ai0 * f + aip0 * g;
    const lcplx ap = ai0 * fd + aip0 * gd;
    ai = cplx(double(a.real()), double(a.imag()));
    aip = cplx(double(ap.real()), double(ap.imag()));
}

// scaled asymptotic mantissas: Ai e^w = tau, Ai' e^w = tau_d, w = (2/3) z^{3/2};
// the divergent series is truncated at its minimal term
void airy_asymptotic(cplx z, cplx w, cplx& tau, cplx& tau_d) {
    const cplx zq = std::pow(z, 0.25);
    const double spi2 = 2.0 * std::sqrt(kPi);
    cplx su = 1.0, sv = 1.0;
    double u = 1.0;
    cplx winv = 1.0 / w, wk = 1.0;
    double sign = -1.0;
    double prev = 1e300;
    for (int k = 1; k <= kAiryAsymptoticTerms; ++k) {
        u = airy_u(k, u);
        const double v = -u * (6.0 * k + 1.0) / (6.0 * k - 1.0);
        wk *= winv;
        const double mag = std::abs(u * wk);
        if (mag > prev) break;
        prev = mag;
        su += sign * u * wk;
        sv += sign * v * wk;
        sign = -sign;
    }
    tau = su / (spi2 * zq);
    tau_d = -zq * sv / spi2;
}

} // namespace

cplx gamma_complex(cplx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        fail(ErrorCode::domain, "gamma_complex: pole at non-positive integer");
    return std::exp(log_gamma(z));
}

cplx airy_ray(cplx zeta) {
    AiryScaled s = airy_ray_scaled(zeta);
    return s.tau * std::exp(-s.w);
}

AiryScaled airy_ray_scaled(cplx zeta) {
    if (std::abs(std::arg(zeta)) > 2.0 * kPi / 3.0 && std::abs(zeta) > 0.5)
        fail(ErrorCode::domain, "airy_ray: argument outside the supported sector");
    AiryScaled out;
    out.w = (2.0 / 3.0) * std::pow(zeta, 1.5);
    if (std::abs(zeta) <= kAirySwitch) {
        cplx ai, aip;
        airy_maclaurin(zeta, ai, aip);
        const cplx ew = std::exp(out.w);
        out.tau = ai * ew;
        out.tau_d = aip * ew;
    } else {
        airy_asymptotic(zeta, out.w, out.tau, out.tau_d);
    }
    return out;
}

cplx airy_ray_via(cplx zeta, bool use_series) {
    if (use_series) {
        cplx ai, aip;
        airy_maclaurin(zeta, ai, aip);
        return ai;
    }
    const cplx w = (2.0 / 3.0) * std::pow(zeta, 1.5);
    cplx tau, tau_d;
    airy_asymptotic(zeta, w, tau, tau_d);
    return tau * std::exp(-w);
}

ComplexSeries frobenius_series(cplx lambda, double delta, int n_max) {
    if (n_max < 8) fail(ErrorCode::invalid_argument, "frobenius_series: n_max too small");
    ComplexSeries s;
    s.offset = delta;
    s.coeffs.assign(n_max + 1, cplx(0.0));
    s.coeffs[0] = 1.0;
    s.coeffs[1] = 0.0;
    const cplx i(0.0, 1.0);
    for (int n = 0; n + 2 <= n_max; ++n) {
        const double den = (n + 2.0) * (n + 1.0 + 2.0 * delta);
        if (std::abs(n + 1.0 + 2.0 * delta) < 1e-9)
            fail(ErrorCode::resonance,
                 "frobenius_series: resonant denominator at n = " + std::to_string(n));
        const cplx prev = n >= 1 ? s.coeffs[n - 1] : cplx(0.0);
        s.coeffs[n + 2] = (-lambda * s.coeffs[n] + i * prev) / den;
    }
    // certify the radius: largest s where the last terms are below 1e-16 of the
    // crude magnitude sum (bisection on the tail-bound predicate)
    auto tail_ok = [&](double x) {
        double mag = 0.0, xs = 1.0;
        for (int n = 0; n <= n_max; ++n) {
            mag += std::abs(s.coeffs[n]) * xs;
            xs *= x;
        }
        double t = std::abs(s.coeffs[n_max]) * std::pow(x, n_max)
                 + std::abs(s.coeffs[n_max - 1]) * std::pow(x, n_max - 1);
        return t <= 1e-16 * mag;
    };
    double lo = 0.5, hi = 64.0;
    if (!tail_ok(lo)) {
        s.radius_hint = lo;
    } else {
        while (hi - lo > 0.01) {
            double mid = 0.5 * (lo + hi);
            (tail_ok(mid) ? lo : hi) = mid;
        }
        s.radius_hint = lo;
    }
    return s;
}

cplx eval_series(const ComplexSeries& s, double x) {
    if (x < 0.0) fail(ErrorCode::domain, "eval_series: s must be >= 0");
    if (x == 0.0) {
        if (s.offset == 0.0) return s.coeffs.empty() ? cplx(0.0) : s.coeffs[0];
        if (s.offset > 0.0) return 0.0;
        fail(ErrorCode::domain, "eval_series: singular at s = 0 for negative offset");
    }
    if (x > s.radius_hint)
        fail(ErrorCode::convergence, "eval_series: s beyond certified truncation radius");
    cplx acc = 0.0, xs = 1.0;
    for (size_t n = 0; n < s.coeffs.size(); ++n) {
        acc += s.coeffs[n] * xs;
        xs *= x;
    }
    return std::pow(x, s.offset) * acc;
}

cplx eval_series_derivative(const ComplexSeries& s, double x) {
    if (!(x > 0.0)) fail(ErrorCode::domain, "eval_series_derivative: needs s > 0");
    if (x > s.radius_hint)
        fail(ErrorCode::convergence, "eval_series_derivative: s beyond certified radius");
    cplx acc = 0.0, dacc = 0.0, xs = 1.0;
    for (size_t n = 0; n < s.coeffs.size(); ++n) {
        acc += s.coeffs[n] * xs;
        if (n + 1 < s.coeffs.size()) dacc += double(n + 1) * s.coeffs[n + 1] * xs;
        xs *= x;
    }
    const double p = s.offset;
    return std::pow(x, p) * (dacc + p / x * acc);
}

cplx f_alpha_series(cplx z, double alpha, int n_max) {
    if (std::abs(alpha - std::round(alpha)) < 1e-12 && alpha > 0)
        fail(ErrorCode::resonance, "f_alpha_series: integer alpha is resonant");
    cplx term = 1.0, acc = 1.0;
    for (int n = 0; n < n_max; ++n) {
        term *= z / (n + 1.0 - alpha);
        acc += term;
        if (std::abs(term) < 1e-17 * std::abs(acc)) return acc;
    }
    fail(ErrorCode::convergence, "f_alpha_series: did not converge (|z| too large?)");
}

cplx f_alpha_closed(cplx z, double alpha) {
    if (!(z.real() > 0.0)) fail(ErrorCode::domain, "f_alpha_closed: needs Re z > 0");
    const cplx lead = gamma_complex(1.0 - alpha) * std::pow(z, alpha) * std::exp(z);
    // int_0^inf e^{-zv} (1+v)^{-alpha-1} dv, geometric panels, exponential cutoff
    const double rate = z.real();
    const double v_hi = std::max(1.0, 45.0 / rate);
    auto f = [&](double v) { return std::exp(-z * v) * std::pow(1.0 + v, -alpha - 1.0); };
    std::vector<double> brk = dyadic_breaks(std::min(0.5, v_hi * 0.25), v_hi);
    cplx integral = gauss_panels(f, brk, 24);
    return lead + alpha * integral;
}

std::vector<cplx> d_alpha_coeffs(double alpha, int n_max) {
    if (std::abs(alpha - std::round(alpha)) < 1e-12 && alpha > 0)
        fail(ErrorCode::resonance, "d_alpha_series: integer alpha is resonant");
    std::vector<cplx> d(n_max + 1);
    d[0] = 1.0;
    const cplx i(0.0, 1.0);
    for (int n = 0; n < n_max; ++n) d[n + 1] = i * d[n] / (9.0 * (n + 1.0) * (n + 1.0 - alpha));
    return d;
}

cplx d_alpha_series(double x, double alpha) {
    if (x < 0.0) fail(ErrorCode::domain, "d_alpha_series: needs x >= 0");
    auto d = d_alpha_coeffs(alpha, 160);
    cplx acc = 0.0, xs = 1.0;
    for (size_t n = 0; n < d.size(); ++n) {
        cplx t = d[n] * xs;
        acc += t;
        xs *= x;
        if (n > 4 && std::abs(t) < 1e-18 * std::abs(acc)) break;
    }
    return acc;
}

} // namespace ht
