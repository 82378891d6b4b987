#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace ht {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1].
// Supported n: 4, 8, 12, 16, 24, 32.
struct GaussRule {
    std::vector<double> x, w;
};
const GaussRule& gauss_rule(int n);

// integral of f over [a,b] with a single n-point rule
template <typename F>
auto gauss_panel(F&& f, double a, double b, int n = 16) {
    const GaussRule& r = gauss_rule(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    decltype(f(a)) acc{};
    for (size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(mid + half * r.x[i]);
    return acc * half;
}

// composite rule over explicit breakpoints
template <typename F>
auto gauss_panels(F&& f, const std::vector<double>& breaks, int n = 16) {
    decltype(f(breaks[0])) acc{};
    for (size_t i = 0; i + 1 < breaks.size(); ++i) acc += gauss_panel(f, breaks[i], breaks[i + 1], n);
    return acc;
}

// dyadic breakpoints 0, b0, 2*b0, 4*b0, ... covering [0, hi]
std::vector<double> dyadic_breaks(double b0, double hi);

// Integral of samples y on a non-uniform grid x by local quadratic interpolation
// (each interval integrated with the parabola through its three nearest nodes,
// averaged from both sides in the interior). Fourth-order on smooth data.
double integrate_samples(const std::vector<double>& x, const std::vector<double>& y);
std::complex<double> integrate_samples(const std::vector<double>& x,
                                       const std::vector<std::complex<double>>& y);

// Cumulative version: out[i] = integral of the interpolant over [x[0], x[i]].
std::vector<std::complex<double>> cumulative_integral(const std::vector<double>& x,
                                                      const std::vector<std::complex<double>>& y);

// log-spaced grid on [lo, hi]
std::vector<double> log_grid(double lo, double hi, int n);

} // namespace ht
