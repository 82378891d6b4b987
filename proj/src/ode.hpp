#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "errors.hpp"

namespace ht {

// Dormand-Prince 5(4) with PI step control on a complex state vector.
// Integrates from t0 to t1 (either direction); `observe` is called at every
// accepted step endpoint, and the integrator lands exactly on t1.
class DormandPrince {
public:
    using State = std::vector<std::complex<double>>;
    using Rhs = std::function<void(double, const State&, State&)>;
    using Observer = std::function<void(double, const State&)>;

    double rtol = 1e-12;
    double atol = 1e-300; // relative control only by default
    int max_steps = 2'000'000;

    State integrate(const Rhs& f, double t0, double t1, State y, const Observer& observe = {}) const {
        if (t0 == t1) return y;
        const double dir = t1 > t0 ? 1.0 : -1.0;
        const size_t n = y.size();
        State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y5(n), y4(n);
        double t = t0;
        double h = dir * std::min(1e-2, std::abs(t1 - t0));
        f(t, y, k1);
        double err_prev = 1.0;
        for (int step = 0; step < max_steps; ++step) {
            if (dir * (t + h - t1) > 0.0) h = t1 - t;
            // stages
            stage(yt, y, h, {{a21, k1}});
            f(t + c2 * h, yt, k2);
            stage(yt, y, h, {{a31, k1}, {a32, k2}});
            f(t + c3 * h, yt, k3);
            stage(yt, y, h, {{a41, k1}, {a42, k2}, {a43, k3}});
            f(t + c4 * h, yt, k4);
            stage(yt, y, h, {{a51, k1}, {a52, k2}, {a53, k3}, {a54, k4}});
            f(t + c5 * h, yt, k5);
            stage(yt, y, h, {{a61, k1}, {a62, k2}, {a63, k3}, {a64, k4}, {a65, k5}});
            f(t + h, yt, k6);
            stage(y5, y, h, {{b1, k1}, {b3, k3}, {b4, k4}, {b5, k5}, {b6, k6}});
            f(t + h, y5, k7); // FSAL
            stage(y4, y, h, {{d1, k1}, {d3, k3}, {d4, k4}, {d5, k5}, {d6, k6}, {d7, k7}});
            double err = 0.0;
            for (size_t i = 0; i < n; ++i) {
                const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
                err = std::max(err, std::abs(y5[i] - y4[i]) / sc);
            }
            if (err <= 1.0) {
                t += h;
                y = y5;
                k1 = k7;
                if (observe) observe(t, y);
                if (t == t1 || dir * (t1 - t) <= 0.0) return y;
                const double fac = 0.9 * std::pow(err > 1e-10 ? err : 1e-10, -0.7 / 5.0)
                                 * std::pow(err_prev, 0.4 / 5.0);
                h *= std::clamp(fac, 0.2, 6.0);
                err_prev = std::max(err, 1e-10);
            } else {
                h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            }
            if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
                fail(ErrorCode::convergence, "ode: step size underflow");
        }
        fail(ErrorCode::convergence, "ode: max step count exceeded");
    }

private:
    struct WK {
        double w;
        const State& k;
    };
    static void stage(State& out, const State& y, double h, std::initializer_list<WK> terms) {
        out = y;
        for (const auto& t : terms)
            for (size_t i = 0; i < y.size(); ++i) out[i] += h * t.w * t.k[i];
    }

    // Dormand-Prince coefficients
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double d1 = 5179.0 / 57600, d3 = 7571.0 / 16695, d4 = 393.0 / 640,
                            d5 = -92097.0 / 339200, d6 = 187.0 / 2100, d7 = 1.0 / 40;
};

// Hermite interpolation data for one trajectory sample: value, first and second
// derivative of a complex function at a node.
struct HermiteNode {
    double t;
    std::complex<double> y, yp, ypp;
};

// Two-point quintic Hermite evaluation between bracketing nodes.
void hermite_quintic(const HermiteNode& a, const HermiteNode& b, double t,
                     std::complex<double>& y, std::complex<double>& yp);

} // namespace ht
