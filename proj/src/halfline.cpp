#include "halfline.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "ode.hpp"
#include "quadrature.hpp"
#include "ray_kernel.hpp"

namespace ht {

namespace {

const HermiteNode* locate(const std::vector<HermiteNode>& nodes, double t) {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t,
                               [](double v, const HermiteNode& n) { return v < n.t; });
    if (it == nodes.begin()) return &nodes.front();
    if (it == nodes.end()) return &nodes[nodes.size() - 2];
    return &*(it - 1);
}

cplx interp4(const std::vector<double>& x, const std::vector<cplx>& y, double s) {
    const size_t n = x.size();
    size_t k = std::upper_bound(x.begin(), x.end(), s) - x.begin();
    size_t i0 = k < 2 ? 0 : (k + 2 > n ? n - 4 : k - 2);
    cplx acc = 0.0;
    for (size_t a = i0; a < i0 + 4; ++a) {
        double l = 1.0;
        for (size_t b = i0; b < i0 + 4; ++b)
            if (b != a) l *= (s - x[b]) / (x[a] - x[b]);
        acc += y[a] * l;
    }
    return acc;
}

// v-dependent tail of the eta = 0 kernel beyond v_max (algebraic, not Airy-cut):
//   T(v) = int_{vmax}^inf w/(2g+1) (1 - (v/w)^{2g+1}) N(w) (1 + R_model(w)) dw,
// R_model(w) = -gamma/(2 w^2), the known expansion of M / v^{-gamma} - 1.
cplx tail_eta0(double v, double gamma, double v_max) {
    auto f = [&](double u) { // w = 1/u
        const double w = 1.0 / u;
        const double N = -gamma * ((2.0 * gamma + 3.0) * w * w + gamma + 1.0)
                       / (w * w * (1.0 + w * w) * (1.0 + w * w));
        const double rmod = -gamma / (2.0 * w * w);
        const double kern = w / (2.0 * gamma + 1.0) * (1.0 - std::pow(v / w, 2.0 * gamma + 1.0));
        return kern * N * (1.0 + rmod) / (u * u);
    };
    return gauss_panel(f, 1e-12, 1.0 / v_max, 24);
}

} // namespace

std::pair<cplx, cplx> GProfile::theta_scaled(double v) const {
    if (eta == 0.0) return {-gamma * std::log(v), 0.0};
    const double s = std::cbrt(eta) * v;
    ScaledVal h_val = h->value(s);
    return {std::log(h_val.mantissa) + (gamma / 3.0) * std::log(eta), h_val.w};
}

cplx GProfile::value(double v) const {
    if (v <= v0) {
        if (v <= nodes.front().t) return nodes.front().y;
        const HermiteNode* a = locate(nodes, v);
        cplx y, yp;
        hermite_quintic(*a, *(a + 1), v, y, yp);
        return y;
    }
    auto [lm, w] = theta_scaled(v);
    const cplx R = interp4(r_grid, r_vals, v);
    return std::exp(lm - w) * (1.0 + R);
}

cplx GProfile::derivative(double v) const {
    if (v <= v0) {
        if (v <= nodes.front().t) return nodes.front().yp;
        const HermiteNode* a = locate(nodes, v);
        cplx y, yp;
        hermite_quintic(*a, *(a + 1), v, y, yp);
        return yp;
    }
    const cplx R = interp4(r_grid, r_vals, v);
    const cplx Rp = interp4(r_grid, r_prime, v);
    cplx th, thp;
    if (eta == 0.0) {
        th = std::pow(v, -gamma);
        thp = -gamma * std::pow(v, -gamma - 1.0);
    } else {
        const double e13 = std::cbrt(eta);
        const double s = e13 * v;
        const double e_g3 = std::pow(eta, gamma / 3.0);
        th = e_g3 * h->value(s).unscaled();
        thp = e_g3 * e13 * h->derivative(s).unscaled();
    }
    return thp * (1.0 + R) + th * Rp;
}

cplx theta(const ConnectionSolution& h, double eta, double v) {
    const double gamma = h.profile->gamma;
    if (eta == 0.0) {
        if (!(v > 0.0)) fail(ErrorCode::domain, "theta: needs v > 0 at eta = 0");
        return std::pow(v, -gamma);
    }
    if (!(v > 0.0) || eta < 0.0) fail(ErrorCode::domain, "theta: needs v > 0, eta >= 0");
    return std::pow(eta, gamma / 3.0) * h.profile->value(std::cbrt(eta) * v).unscaled();
}

cplx theta(cplx lambda, double eta, double v, const ModelParams& params) {
    ConnectionSolution h = build_h(lambda, params);
    return theta(h, eta, v);
}

HalfLineSolution build_g(cplx lambda, double eta, const ModelParams& params) {
    ConnectionSolution h = build_h(lambda, params);
    return build_g(h, eta, params);
}

HalfLineSolution build_g(const ConnectionSolution& h, double eta, const ModelParams& params) {
    if (eta < 0.0 || eta > params.eta0 + 1e-12)
        fail(ErrorCode::domain, "build_g: eta outside [0, eta0]");
    const double gamma = params.gamma;
    const cplx lambda = h.lambda;

    auto gp = std::make_shared<GProfile>();
    gp->lambda = lambda;
    gp->eta = eta;
    gp->gamma = gamma;
    gp->h = h.profile;
    gp->mu = lambda * std::pow(eta, 2.0 / 3.0);
    gp->v0 = 5.0;
    gp->v_max = eta == 0.0 ? 400.0 : std::max(30.0 / std::cbrt(eta), 50.0);

    // kernel weighted by the potential remainder N
    const int n = std::max(120, int(75.0 * std::log(gp->v_max / gp->v0)));
    auto grid = log_grid(gp->v0, gp->v_max, n);
    std::vector<cplx> lm(n), w(n);
    for (int i = 0; i < n; ++i) {
        auto [l, ww] = gp->theta_scaled(grid[i]);
        lm[i] = l;
        w[i] = ww;
    }
    detail::RayKernel K;
    K.build(grid, std::move(lm), std::move(w),
            [gamma](double z) { return cplx(remainder_n(z, gamma)); },
            [&](double u) { return gp->theta_scaled(u); });
    if (K.row_norm(0) > 0.4) {
        // the cutoff must sit where the measured operator norm is safe
        size_t i0 = 0;
        while (i0 < grid.size() && K.row_norm(i0) > 0.4) ++i0;
        if (i0 + 8 >= grid.size())
            fail(ErrorCode::contraction, "build_g: no contraction cutoff below v_max");
        fail(ErrorCode::contraction,
             "build_g: operator norm " + std::to_string(K.row_norm(0)) + " at v0 = 5; "
             "use v0 >= " + std::to_string(grid[i0]));
    }

    std::vector<cplx> R(n, cplx(0.0));
    if (eta == 0.0) {
        // the tail beyond v_max is algebraic here; correct it per node
        std::vector<cplx> tails(n);
        for (int i = 0; i < n; ++i) tails[i] = tail_eta0(grid[i], gamma, gp->v_max);
        K.neumann(R, tails, 1e-13);
    } else {
        K.neumann(R, cplx(0.0)); // Airy decay kills the tail beyond v_max
    }
    gp->r_grid = grid;
    gp->r_vals = R;
    gp->r_prime = K.derivative(R);

    // start data at v0
    auto [lm0, w0] = gp->theta_scaled(gp->v0);
    const cplx th0 = std::exp(lm0 - w0);
    cplx thp0;
    if (eta == 0.0) {
        thp0 = -gamma * std::pow(gp->v0, -gamma - 1.0);
    } else {
        const double e13 = std::cbrt(eta);
        thp0 = std::pow(eta, gamma / 3.0) * e13 * h.profile->derivative(e13 * gp->v0).unscaled();
    }
    const cplx G0v = th0 * (1.0 + R[0]);
    const cplx G0p = thp0 * (1.0 + R[0]) + th0 * gp->r_prime[0];

    // backward integration to v = 0 with moment quadrature states
    DormandPrince ode;
    ode.rtol = 3e-13;
    const cplx mu = gp->mu;
    auto rhs = [&](double v, const DormandPrince::State& y, DormandPrince::State& dy) {
        dy[0] = y[1];
        dy[1] = (potential_w(v, gamma) + cplx(0, 1) * eta * v - mu) * y[0];
        const double M = equilibrium_m(v, gamma);
        dy[2] = y[0] * M;
        dy[3] = v * y[0] * M;
    };
    auto& nodes = gp->nodes;
    nodes.clear();
    auto record = [&](double t, const DormandPrince::State& y) {
        nodes.push_back({t, y[0], y[1],
                         (potential_w(t, gamma) + cplx(0, 1) * eta * t - mu) * y[0]});
    };
    record(gp->v0, {G0v, G0p, 0.0, 0.0});
    DormandPrince::State y{G0v, G0p, cplx(0.0), cplx(0.0)};
    y = ode.integrate(rhs, gp->v0, 0.0, y, record);
    std::sort(nodes.begin(), nodes.end(),
              [](const HermiteNode& a, const HermiteNode& b) { return a.t < b.t; });

    HalfLineSolution sol;
    sol.lambda = lambda;
    sol.eta = eta;
    sol.g0 = y[0];
    sol.g0_prime = y[1];
    if (std::abs(sol.g0) < 1e-8)
        fail(ErrorCode::degenerate, "build_g: G(0) vanished (normalization impossible)");
    sol.a_coeff = 1.0 / sol.g0;
    sol.b_coeff = sol.a_coeff * sol.g0_prime;
    sol.profile = gp;

    // moments: inner part from the quadrature states (backward run flips sign),
    // outer part from the kernel grid samples
    const cplx inner_gm = -y[2], inner_vgm = -y[3];
    std::vector<cplx> gm(n), vgm(n);
    for (int i = 0; i < n; ++i) {
        const cplx Gv = std::exp(K.log_m[i] - K.w[i]) * (1.0 + R[i]);
        const double M = equilibrium_m(grid[i], gamma);
        gm[i] = Gv * M;
        vgm[i] = grid[i] * Gv * M;
    }
    sol.moment_gm = inner_gm + integrate_samples(grid, gm);
    sol.moment_vgm = inner_vgm + integrate_samples(grid, vgm);

    // public samples: theta-substitution grid inside [0, v0], log grid beyond
    auto inner_grid = theta_grid(gp->v0, 120);
    sol.v_grid = inner_grid;
    for (int i = 1; i < n; ++i) sol.v_grid.push_back(grid[i]);
    sol.g_values.resize(sol.v_grid.size());
    for (size_t i = 0; i < sol.v_grid.size(); ++i) sol.g_values[i] = gp->value(sol.v_grid[i]);

    // ODE residual in integral (Picard) form: G'(b) - G'(a) = int_a^b q G
    double worst = 0.0;
    {
        auto q = [&](double v) { return potential_w(v, gamma) + cplx(0, 1) * eta * v - mu; };
        auto qg = [&](double v) { return q(v) * gp->value(v); };
        auto aqg = [&](double v) { return std::abs(qg(v)); };
        const double hi = eta > 0.0 ? std::min(12.0 / std::cbrt(eta), 0.8 * gp->v_max) : 50.0;
        auto pts = log_grid(0.2, hi, 30);
        for (size_t k = 0; k + 1 < pts.size(); ++k) {
            std::vector<double> brk{pts[k]};
            double x = pts[k];
            while (x + 1.0 < pts[k + 1]) {
                x += 1.0;
                brk.push_back(x);
            }
            brk.push_back(pts[k + 1]);
            const cplx integral = gauss_panels(qg, brk, 16);
            const cplx da = gp->derivative(pts[k]);
            const cplx db = gp->derivative(pts[k + 1]);
            const double scale = std::abs(da) + std::abs(db) + gauss_panels(aqg, brk, 16);
            worst = std::max(worst, std::abs(db - da - integral) / scale);
        }
    }
    sol.residual = worst;
    return sol;
}

cplx coeff_b_integral(cplx lambda, double eta, const HalfLineSolution& sol) {
    if (std::abs(lambda - sol.lambda) > 1e-14 || std::abs(eta - sol.eta) > 1e-14)
        fail(ErrorCode::invalid_argument, "coeff_b_integral: solution built for different (lambda, eta)");
    if (eta == 0.0) return 0.0;
    const double e23 = std::pow(eta, 2.0 / 3.0);
    const double e13 = std::cbrt(eta);
    return sol.a_coeff * e23 * (lambda * sol.moment_gm - cplx(0, 1) * e13 * sol.moment_vgm);
}

std::pair<double, double> fl_decomposition_residual(double eta, const HalfLineSolution& sol,
                                                    int n_grid, double v_hi) {
    if (std::abs(sol.lambda) > 1e-12)
        fail(ErrorCode::invalid_argument, "fl_decomposition_residual: needs the lambda = 0 solution");
    const GProfile& gp = *sol.profile;
    const double gamma = gp.gamma;
    if (v_hi <= 0.0) v_hi = gp.v0;
    const int n = n_grid;
    const double h = v_hi / (n - 1);
    std::vector<double> f(n), l(n);
    for (int i = 0; i < n; ++i) {
        const cplx ag = sol.a_coeff * gp.value(i * h);
        f[i] = ag.real();
        l[i] = eta > 0.0 ? ag.imag() / eta : 0.0;
    }
    double rf = 0.0, rl = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double v = i * h;
        const double W = potential_w(v, gamma);
        const double qf = -(f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h) + W * f[i];
        const double ql = -(l[i + 1] - 2.0 * l[i] + l[i - 1]) / (h * h) + W * l[i];
        rf = std::max(rf, std::abs(qf - eta * eta * v * l[i]));
        if (eta > 0.0) rl = std::max(rl, std::abs(ql + v * f[i]));
    }
    return {rf, rl};
}

} // namespace ht
