#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "model.hpp"
#include "oracles.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

using namespace ht;

TEST_CASE("c_beta_squared closed cases") {
    // antiderivative v/sqrt(1+v^2) gives int = 2 at beta = 3
    CHECK(c_beta_squared(3.0) == doctest::Approx(0.5).epsilon(1e-12));
    // int (1+v^2)^{-1} dv = pi
    CHECK(c_beta_squared(2.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
    CHECK_THROWS_AS(c_beta_squared(1.0), Error);
    CHECK_THROWS_AS(c_beta_squared(0.5), Error);
}

TEST_CASE("c_beta_squared normalizes the equilibrium") {
    // defining identity at 1e-10: v = tan(theta) maps int F dv to
    // 2 C^2 int_0^{pi/2} cos^{2 gamma - 2} theta dtheta; panels refine
    // dyadically into the (integrable) endpoint for gamma < 1
    for (double beta : {1.3, 1.5, 2.5, 3.7, 4.5, 4.9}) {
        const double g = beta / 2.0;
        auto f = [&](double th) { return std::pow(std::cos(th), 2.0 * g - 2.0); };
        double acc = oracle::gl32(f, 0.0, M_PI / 2.0 - 1e-3, 24);
        double a = 1e-3;
        for (int lvl = 0; lvl < 60 && a > 1e-14; ++lvl) {
            acc += oracle::gl32([&](double u) { return f(M_PI / 2.0 - u); }, a / 2.0, a, 2);
            a /= 2.0;
        }
        // remaining sliver: integrand <= u^{2g-2}, integral <= u^{2g-1}/(2g-1)
        const double sliver = std::pow(a, 2.0 * g - 1.0) / (2.0 * g - 1.0);
        CHECK(std::abs(c_beta_squared(beta) * 2.0 * acc - 1.0) <= 1e-10 + sliver);
    }
}

TEST_CASE("c_beta_squared agrees with the Gamma closed form") {
    for (double beta : {1.2, 1.5, 2.5, 3.5, 4.5, 4.9}) {
        const double g = beta / 2.0;
        const double closed = (gamma_complex(g) / (std::sqrt(M_PI) * gamma_complex(g - 0.5))).real();
        CHECK(c_beta_squared(beta) == doctest::Approx(closed).epsilon(1e-10));
    }
}

TEST_CASE("ModelParams validation") {
    CHECK_THROWS_AS(ModelParams::create(2.0), Error);
    CHECK_THROWS_AS(ModelParams::create(3.0), Error);
    CHECK_THROWS_AS(ModelParams::create(4.0), Error);
    CHECK_THROWS_AS(ModelParams::create(5.0), Error);
    CHECK_THROWS_AS(ModelParams::create(1.0), Error);
    const ModelParams p = ModelParams::create(2.5);
    CHECK(p.gamma == doctest::Approx(1.25));
    CHECK(p.alpha == doctest::Approx(7.0 / 6.0));
    CHECK(p.alpha > 2.0 / 3.0);
    CHECK(p.alpha < 2.0);
}

TEST_CASE("potential values") {
    const double g = 1.25;
    CHECK(potential_w(0.0, g) == doctest::Approx(-1.25).epsilon(1e-15));
    CHECK(potential_w(1.0, g) == doctest::Approx(0.390625).epsilon(1e-15));
    // high-velocity asymptote v^2 W -> gamma (gamma + 1)
    CHECK(1e6 * potential_w(1e3, g) == doctest::Approx(g * (g + 1.0)).epsilon(1e-4));
    // parity
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-30.0, 30.0);
    for (int i = 0; i < 100; ++i) {
        const double v = U(rng);
        CHECK(potential_w(v, g) == potential_w(-v, g));
        CHECK(equilibrium_m(v, g) == equilibrium_m(-v, g));
    }
}

TEST_CASE("remainder_n") {
    const double g = 1.25;
    CHECK(remainder_n(1.0, g) == doctest::Approx(-2.421875).epsilon(1e-14));
    CHECK_THROWS_AS(remainder_n(0.0, g), Error);
    // defining identity N + gamma(gamma+1)/v^2 = W
    for (double v : {0.1, 0.7, 1.0, 3.0, 17.0, 250.0}) {
        const double lhs = remainder_n(v, g) + g * (g + 1.0) / (v * v);
        CHECK(lhs == doctest::Approx(potential_w(v, g)).epsilon(1e-13));
    }
    // O(v^-4): |N| v^4 bounded over decades
    double lo = 1e300, hi = 0.0;
    for (double v = 10.0; v <= 1e4; v *= 3.0) {
        const double b = std::abs(remainder_n(v, g)) * v * v * v * v;
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    CHECK(hi < 2.0 * g * (2.0 * g + 3.0));
    CHECK(lo > 0.5 * g * (2.0 * g + 3.0));
}

TEST_CASE("equilibrium M and weight Z") {
    const double g = 1.25;
    CHECK(equilibrium_m(0.0, g) == 1.0);
    CHECK(weight_z(0.0, g) == 0.0);
    // kernel property via finite differences, O(h^2) refinement
    auto resid_m = [&](double v, double h) {
        const double d2 = (equilibrium_m(v + h, g) - 2 * equilibrium_m(v, g) + equilibrium_m(v - h, g)) / (h * h);
        return std::abs(-d2 + potential_w(v, g) * equilibrium_m(v, g));
    };
    auto resid_z = [&](double v, double h) {
        const double d2 = (weight_z(v + h, g) - 2 * weight_z(v, g) + weight_z(v - h, g)) / (h * h);
        return std::abs(-d2 + potential_w(v, g) * weight_z(v, g));
    };
    for (double v : {0.5, 1.0, 2.0}) {
        CHECK(resid_m(v, 1e-3) < 1e-5);
        CHECK(resid_m(v, 5e-4) < 0.3 * resid_m(v, 1e-3) + 1e-12);
        CHECK(resid_z(v, 1e-3) < 1e-4);
    }
    // M v^gamma -> 1, Z / v^{gamma+1} -> 1/(2 gamma + 1) over decades
    CHECK(equilibrium_m(1e3, g) * std::pow(1e3, g) == doctest::Approx(1.0).epsilon(1e-5));
    double prev = 0.0;
    for (double v : {1e2, 1e3}) {
        const double r = weight_z(v, g) / std::pow(v, g + 1.0);
        CHECK(r == doctest::Approx(1.0 / (2.0 * g + 1.0)).epsilon(0.01));
        if (prev != 0.0) CHECK(r == doctest::Approx(prev).epsilon(0.01));
        prev = r;
    }
}

TEST_CASE("q_solve") {
    const double g = 1.25;
    const int n = 801;
    SampledFn zero;
    zero.v = theta_grid(20.0, n);
    zero.y.assign(n, cplx(0.0));

    SUBCASE("homogeneous solutions reproduce M and Z") {
        SampledFn fM = q_solve(zero, 1.0, 0.0, g);
        SampledFn fZ = q_solve(zero, 0.0, 1.0, g);
        for (int i = 0; i < n; i += 50) {
            CHECK(std::abs(fM.y[i] - equilibrium_m(fM.v[i], g)) < 1e-12);
            CHECK(std::abs(fZ.y[i] - weight_z(fZ.v[i], g)) < 1e-12);
        }
    }

    SUBCASE("residual against the source -v M") {
        SampledFn src;
        src.v = theta_grid(20.0, n);
        src.y.resize(n);
        for (int i = 0; i < n; ++i) src.y[i] = -src.v[i] * equilibrium_m(src.v[i], g);
        SampledFn f = q_solve(src, 0.0, 1.0, g);
        // uniform-grid FD residual via re-solve on a uniform grid
        SampledFn srcu;
        const int m = 2001;
        const double h = 10.0 / (m - 1);
        srcu.v.resize(m);
        srcu.y.resize(m);
        for (int i = 0; i < m; ++i) {
            srcu.v[i] = i * h;
            srcu.y[i] = -srcu.v[i] * equilibrium_m(srcu.v[i], g);
        }
        SampledFn fu = q_solve(srcu, 0.0, 1.0, g);
        double worst = 0.0;
        for (int i = 1; i + 1 < m; ++i) {
            const cplx d2 = (fu.y[i + 1] - 2.0 * fu.y[i] + fu.y[i - 1]) / (h * h);
            worst = std::max(worst, std::abs(-d2 + potential_w(fu.v[i], g) * fu.y[i] - srcu.y[i]));
        }
        CHECK(worst < 5e-4); // O(h^2) on the solve's interpolation order
        (void)f;
    }

    SUBCASE("linearity") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        SampledFn g1 = zero, g2 = zero;
        for (int i = 0; i < n; ++i) {
            g1.y[i] = cplx(U(rng), U(rng));
            g2.y[i] = cplx(U(rng), U(rng));
        }
        const cplx a1(0.3, -0.1), a2(-1.1, 0.4), b1(0.2, 0.9), b2(0.5, -0.7);
        SampledFn fa = q_solve(g1, a1, b1, g);
        SampledFn fb = q_solve(g2, a2, b2, g);
        SampledFn gsum = zero;
        for (int i = 0; i < n; ++i) gsum.y[i] = g1.y[i] + g2.y[i];
        SampledFn fsum = q_solve(gsum, a1 + a2, b1 + b2, g);
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(fsum.y[i] - fa.y[i] - fb.y[i]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("half-line equilibrium mass") {
    for (double g : {0.75, 1.25, 2.25}) {
        const double m2 = equilibrium_mass_half(g);
        CHECK(m2 == doctest::Approx(0.5 / c_beta_squared(2.0 * g)).epsilon(1e-12));
    }
}
