#include "quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "errors.hpp"

namespace ht {

namespace {

// Newton iteration on Legendre polynomials; nodes are roots of P_n.
GaussRule make_rule(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

} // namespace

const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
    return it->second;
}

std::vector<double> dyadic_breaks(double b0, double hi) {
    std::vector<double> b{0.0};
    double t = b0;
    while (t < hi) {
        b.push_back(t);
        t *= 2.0;
    }
    b.push_back(hi);
    return b;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0) || !(hi > lo) || n < 2) fail(ErrorCode::invalid_argument, "log_grid: bad range");
    std::vector<double> g(n);
    const double l0 = std::log(lo), l1 = std::log(hi);
    for (int i = 0; i < n; ++i) g[i] = std::exp(l0 + (l1 - l0) * i / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

namespace {

// integral over [x1, x2] of the quadratic through (x0,y0),(x1,y1),(x2,y2);
// `seg` selects which of the two subintervals [x0,x1] (0) or [x1,x2] (1).
template <typename T>
T quad_segment(double x0, double x1, double x2, T y0, T y1, T y2, int seg) {
    // Lagrange basis integrated exactly
    const double a = seg == 0 ? x0 : x1;
    const double b = seg == 0 ? x1 : x2;
    auto basis = [&](double xi, double xj, double xk) {
        // integral over [a,b] of (x-xj)(x-xk) / ((xi-xj)(xi-xk))
        const double den = (xi - xj) * (xi - xk);
        auto F = [&](double x) {
            return x * x * x / 3.0 - 0.5 * (xj + xk) * x * x + xj * xk * x;
        };
        return (F(b) - F(a)) / den;
    };
    return y0 * basis(x0, x1, x2) + y1 * basis(x1, x0, x2) + y2 * basis(x2, x0, x1);
}

template <typename T>
std::vector<T> cumulative_impl(const std::vector<double>& x, const std::vector<T>& y) {
    const size_t n = x.size();
    if (y.size() != n || n < 2) fail(ErrorCode::invalid_argument, "cumulative_integral: size mismatch");
    std::vector<T> out(n);
    out[0] = T{};
    if (n == 2) {
        out[1] = 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
        return out;
    }
    for (size_t i = 0; i + 1 < n; ++i) {
        T left{}, right{};
        bool have_left = false, have_right = false;
        if (i >= 1) {
            left = quad_segment(x[i - 1], x[i], x[i + 1], y[i - 1], y[i], y[i + 1], 1);
            have_left = true;
        }
        if (i + 2 < n) {
            right = quad_segment(x[i], x[i + 1], x[i + 2], y[i], y[i + 1], y[i + 2], 0);
            have_right = true;
        }
        T seg = have_left && have_right ? 0.5 * (left + right) : (have_left ? left : right);
        out[i + 1] = out[i] + seg;
    }
    return out;
}

} // namespace

std::vector<std::complex<double>> cumulative_integral(const std::vector<double>& x,
                                                      const std::vector<std::complex<double>>& y) {
    return cumulative_impl(x, y);
}

double integrate_samples(const std::vector<double>& x, const std::vector<double>& y) {
    auto c = cumulative_impl(x, y);
    return c.back();
}

std::complex<double> integrate_samples(const std::vector<double>& x,
                                       const std::vector<std::complex<double>>& y) {
    auto c = cumulative_impl(x, y);
    return c.back();
}

} // namespace ht
