#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ode.hpp"
#include "quadrature.hpp"
#include "tridiag.hpp"

using namespace ht;

TEST_CASE("gauss panels integrate polynomials and smooth tails") {
    auto f = [](double x) { return x * x * x - 2.0 * x + 1.0; };
    CHECK(gauss_panel(f, -1.0, 2.0, 8) == doctest::Approx(0.75 + 3.0 - 1.5 * 0.0 - 0.0).epsilon(1e-14));
    // exact: x^4/4 - x^2 + x over [-1,2]: (4-4+2)-(1/4-1+(-1)) = 2 - (-7/4) = 3.75
    CHECK(gauss_panel(f, -1.0, 2.0, 8) == doctest::Approx(3.75).epsilon(1e-14));
    auto g = [](double x) { return std::exp(-x); };
    CHECK(gauss_panels(g, dyadic_breaks(1.0, 40.0), 24) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("sample integration is 4th order") {
    auto make = [](int n) {
        std::vector<double> x(n);
        std::vector<std::complex<double>> y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = std::pow(double(i) / (n - 1), 1.3) * 3.0; // non-uniform
            y[i] = std::exp(std::complex<double>(0.0, 2.0) * x[i]);
        }
        return std::pair(x, y);
    };
    const std::complex<double> exact = (std::exp(std::complex<double>(0, 6.0)) - 1.0)
                                     / std::complex<double>(0, 2.0);
    auto [x1, y1] = make(101);
    auto [x2, y2] = make(201);
    const double e1 = std::abs(integrate_samples(x1, y1) - exact);
    const double e2 = std::abs(integrate_samples(x2, y2) - exact);
    CHECK(e1 < 1e-6);
    CHECK(e2 < e1 / 8.0); // at least 3rd order observed; local quadratics give ~4
}

TEST_CASE("dormand-prince integrates a stiff-free complex oscillator") {
    // y'' = -y, y(0) = 1, y'(0) = i: y = cos t + i sin t = e^{it}
    DormandPrince ode;
    ode.rtol = 1e-12;
    auto rhs = [](double, const DormandPrince::State& y, DormandPrince::State& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    DormandPrince::State y{1.0, std::complex<double>(0, 1)};
    int observed = 0;
    y = ode.integrate(rhs, 0.0, 10.0, y, [&](double, const DormandPrince::State&) { ++observed; });
    CHECK(std::abs(y[0] - std::exp(std::complex<double>(0, 10.0))) < 1e-10);
    CHECK(observed > 20);
    // backward direction returns to the start
    y = ode.integrate(rhs, 10.0, 0.0, y);
    CHECK(std::abs(y[0] - 1.0) < 1e-10);
}

TEST_CASE("quintic hermite: interpolation order") {
    auto f = [](double t) { return std::exp(std::complex<double>(0.3, 1.1) * t); };
    auto fp = [&](double t) { return std::complex<double>(0.3, 1.1) * f(t); };
    auto fpp = [&](double t) { return std::complex<double>(0.3, 1.1) * fp(t); };
    auto max_err = [&](double h) {
        HermiteNode a{1.0, f(1.0), fp(1.0), fpp(1.0)};
        HermiteNode b{1.0 + h, f(1.0 + h), fp(1.0 + h), fpp(1.0 + h)};
        double worst = 0.0;
        for (int i = 1; i < 10; ++i) {
            const double t = 1.0 + h * i / 10.0;
            std::complex<double> y, yp;
            hermite_quintic(a, b, t, y, yp);
            worst = std::max(worst, std::abs(y - f(t)));
        }
        return worst;
    };
    const double e1 = max_err(0.4), e2 = max_err(0.2);
    CHECK(e1 < 1e-6);
    CHECK(e2 < e1 / 50.0); // ~2^-6 for the quintic
    // endpoint data reproduced exactly
    HermiteNode a{1.0, f(1.0), fp(1.0), fpp(1.0)};
    HermiteNode b{1.4, f(1.4), fp(1.4), fpp(1.4)};
    std::complex<double> y, yp;
    hermite_quintic(a, b, 1.0, y, yp);
    CHECK(std::abs(y - f(1.0)) < 1e-14);
    CHECK(std::abs(yp - fp(1.0)) < 1e-13);
    hermite_quintic(a, b, 1.4, y, yp);
    CHECK(std::abs(y - f(1.4)) < 1e-14);
    CHECK(std::abs(yp - fp(1.4)) < 1e-13);
}

TEST_CASE("tridiagonal LU with pivoting solves against apply") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const int n = 400;
    Tridiag A;
    A.diag.resize(n);
    A.off.resize(n - 1);
    for (int i = 0; i < n; ++i) A.diag[i] = cplx(U(rng) * 3.0, U(rng));
    for (int i = 0; i + 1 < n; ++i) A.off[i] = cplx(U(rng), U(rng));
    std::vector<cplx> x(n), b(n);
    for (int i = 0; i < n; ++i) x[i] = cplx(U(rng), U(rng));
    A.apply(x, b);
    TridiagLU lu(A);
    lu.solve(b);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(b[i] - x[i]));
    CHECK(worst < 1e-10);
}

TEST_CASE("smallest eigenpair of a discrete laplacian") {
    // -u'' on (0, pi) Dirichlet: lowest eigenvalue 1, eigenvector sin(v)
    const int n = 2000;
    const double h = M_PI / (n + 1);
    Tridiag A;
    A.diag.assign(n, 2.0 / (h * h));
    A.off.assign(n - 1, -1.0 / (h * h));
    EigenPair p = smallest_eigenpair(A);
    CHECK(std::abs(p.value - 1.0) < 1e-5); // h^2 discretization error
    CHECK(p.residual < 1e-8);
    // eigenvector proportional to sin
    const cplx scale = p.vector[n / 2] / std::sin(h * (n / 2 + 1));
    double worst = 0.0;
    for (int i = 0; i < n; i += 37)
        worst = std::max(worst, std::abs(p.vector[i] - scale * std::sin(h * (i + 1))));
    CHECK(worst < 1e-6 * std::abs(scale));
}
