#include "connection.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "quadrature.hpp"
#include "ray_kernel.hpp"

namespace ht {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kRot = std::polar(1.0, kPi / 6.0); // e^{i pi/6}
constexpr double kSMax = 48.0;

std::pair<cplx, cplx> airy_scaled_pair(double s, cplx lambda) {
    AiryScaled ai = airy_ray_scaled(kRot * (s + cplx(0, 1) * lambda));
    return {std::log(ai.tau), ai.w};
}

// Leading tail of the kernel integral beyond s_max. For z >> s the inner
// integral concentrates at u = z with mass 1/(2 phi'(z)), phi' = e^{i pi/6} zeta^{1/2},
// so the dropped contribution is a constant (in s) up to exponentially small terms:
//   T = gg1 int_{smax}^inf e^{-i pi/6} zeta(z)^{-1/2} / 2 * (1 + R_end (smax/z)^{3/2}) z^{-2} dz.
// The substitution z = 1/t^2 makes the integrand smooth at t = 0.
cplx analytic_tail(cplx lambda, double gamma, double s_max, cplx r_end) {
    const double gg1 = gamma * (gamma + 1.0);
    auto f = [&](double t) {
        const double z = 1.0 / (t * t);
        const cplx zeta = kRot * (z + cplx(0, 1) * lambda);
        const cplx base = std::exp(cplx(0, -kPi / 6.0)) / (2.0 * std::sqrt(zeta)) / (z * z)
                        * (1.0 + r_end * std::pow(s_max / z, 1.5));
        return base * (2.0 / (t * t * t));
    };
    return gg1 * gauss_panel(f, 1e-9, 1.0 / std::sqrt(s_max), 24);
}

struct RBuild {
    detail::RayKernel K;
    std::vector<cplx> R, Rp;
};

// Kernel + Neumann solve on [s_lo, s_max] with the analytic tail correction.
RBuild build_r(cplx lambda, double gamma, double s_lo) {
    const double gg1 = gamma * (gamma + 1.0);
    const int n = std::max(60, int(75.0 * std::log(kSMax / s_lo)));
    auto grid = log_grid(s_lo, kSMax, n);
    std::vector<cplx> lm(n), w(n);
    for (int i = 0; i < n; ++i) {
        auto [l, ww] = airy_scaled_pair(grid[i], lambda);
        lm[i] = l;
        w[i] = ww;
    }
    RBuild out;
    out.K.build(std::move(grid), std::move(lm), std::move(w),
                [gg1](double z) { return cplx(gg1 / (z * z)); },
                [&](double u) { return airy_scaled_pair(u, lambda); });
    out.K.neumann(out.R, analytic_tail(lambda, gamma, kSMax, cplx(0.0)));
    out.K.neumann(out.R, analytic_tail(lambda, gamma, kSMax, out.R.back()));
    out.Rp = out.K.derivative(out.R);
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// HProfile evaluation
// ---------------------------------------------------------------------------

cplx HProfile::q_coeff(double s) const {
    return gamma * (gamma + 1.0) / (s * s) + cplx(0, 1) * s - lambda;
}

namespace {

// 4-point Lagrange interpolation on an ordered table
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

const HermiteNode* locate(const std::vector<HermiteNode>& nodes, double t) {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t,
                               [](double v, const HermiteNode& n) { return v < n.t; });
    if (it == nodes.begin()) return &nodes.front();
    if (it == nodes.end()) return &nodes[nodes.size() - 2];
    return &*(it - 1);
}

} // namespace

ScaledVal HProfile::value(double s) const {
    if (s >= s_b) {
        AiryScaled ai = airy_ray_scaled(kRot * (s + cplx(0, 1) * lambda));
        const cplx R = interp4(r_grid, r_vals, s);
        return {ai.tau * (1.0 + R) / a_raw, ai.w};
    }
    if (s > s_series) {
        const HermiteNode* a = locate(nodes, s);
        cplx y, yp;
        hermite_quintic(*a, *(a + 1), s, y, yp);
        return {y / a_raw, 0.0};
    }
    // eval_series carries the s^{offset} factor already
    return {eval_series(fp, s) + d_coeff * eval_series(fm, s), 0.0};
}

ScaledVal HProfile::derivative(double s) const {
    if (s >= s_b) {
        AiryScaled ai = airy_ray_scaled(kRot * (s + cplx(0, 1) * lambda));
        const cplx R = interp4(r_grid, r_vals, s);
        const cplx Rp = interp4(r_grid, r_prime, s);
        return {(ai.tau_d * kRot * (1.0 + R) + ai.tau * Rp) / a_raw, ai.w};
    }
    if (s > s_series) {
        const HermiteNode* a = locate(nodes, s);
        cplx y, yp;
        hermite_quintic(*a, *(a + 1), s, y, yp);
        return {yp / a_raw, 0.0};
    }
    return {eval_series_derivative(fp, s) + d_coeff * eval_series_derivative(fm, s), 0.0};
}

// ---------------------------------------------------------------------------

SampledR solve_r_lambda(cplx lambda, double gamma, double s0, int n_terms) {
    if (!(s0 > 0.0)) fail(ErrorCode::invalid_argument, "solve_r_lambda: s0 must be positive");
    const double gg1 = gamma * (gamma + 1.0);
    const int n = std::max(60, int(75.0 * std::log(kSMax / s0)));
    auto grid = log_grid(s0, kSMax, n);
    std::vector<cplx> lm(n), w(n);
    for (int i = 0; i < n; ++i) {
        auto [l, ww] = airy_scaled_pair(grid[i], lambda);
        lm[i] = l;
        w[i] = ww;
    }
    detail::RayKernel K;
    K.build(grid, std::move(lm), std::move(w),
            [gg1](double z) { return cplx(gg1 / (z * z)); },
            [&](double u) { return airy_scaled_pair(u, lambda); });

    SampledR out;
    out.s = grid;
    out.kernel_norm = K.row_norm(0);
    if (out.kernel_norm > 0.5)
        fail(ErrorCode::contraction, "solve_r_lambda: measured operator norm "
                                         + std::to_string(out.kernel_norm) + " at s0 = "
                                         + std::to_string(s0) + " exceeds 1/2");
    if (gg1 == 0.0) {
        out.r.assign(n, cplx(0.0));
        return out;
    }
    // Neumann series for R = K(1+R) + T: term_0 = K(1) + T, term_{k+1} = K(term_k)
    const cplx tail = analytic_tail(lambda, gamma, kSMax, cplx(0.0));
    std::vector<cplx> one(n, cplx(1.0));
    std::vector<cplx> term = K.apply(one);
    for (auto& v : term) v += tail;
    std::vector<cplx> acc = term;
    out.terms_used = 0;
    const int limit = n_terms < 0 ? 300 : n_terms;
    for (int k = 0; k < limit; ++k) {
        term = K.apply(term);
        double sup = 0.0;
        for (size_t i = 0; i < term.size(); ++i) {
            acc[i] += term[i];
            sup = std::max(sup, std::abs(term[i]));
        }
        out.terms_used = k + 1;
        if (sup < 1e-12) break;
        if (n_terms < 0 && k + 1 == limit)
            fail(ErrorCode::convergence, "solve_r_lambda: Neumann series stalled");
    }
    out.r = std::move(acc);
    return out;
}

ConnectionSolution build_h(cplx lambda, const ModelParams& params) {
    if (std::abs(lambda) > params.lambda0 + 1e-12)
        fail(ErrorCode::domain, "build_h: |lambda| exceeds lambda0");
    const double gamma = params.gamma;
    const double gg1 = gamma * (gamma + 1.0);

    auto profile = std::make_shared<HProfile>();
    profile->lambda = lambda;
    profile->gamma = gamma;
    profile->fp = frobenius_series(lambda, -gamma);
    profile->fm = frobenius_series(lambda, gamma + 1.0);

    // R on [1, s_max]; backward start s_b where the Airy suppression is deep
    RBuild rb = build_r(lambda, gamma, 1.0);
    profile->r_grid = rb.K.grid;
    profile->r_vals = rb.R;
    profile->r_prime = rb.Rp;

    // measured contraction cutoff: smallest grid point with row norm <= 0.4
    double s0 = rb.K.grid.back();
    for (size_t i = 0; i < rb.K.grid.size(); ++i)
        if (rb.K.row_norm(i) <= 0.4) {
            s0 = rb.K.grid[i];
            break;
        }

    const double s_b = std::max(9.0, 1.2 * s0);
    profile->s_b = s_b;
    profile->s_max = kSMax;

    // start data H = Ai (1 + R), H' = Ai' rot (1 + R) + Ai R'
    size_t ib = std::lower_bound(rb.K.grid.begin(), rb.K.grid.end(), s_b) - rb.K.grid.begin();
    if (ib >= rb.K.grid.size()) ib = rb.K.grid.size() - 1;
    const double sb = rb.K.grid[ib];
    profile->s_b = sb;
    AiryScaled ai_b = airy_ray_scaled(kRot * (sb + cplx(0, 1) * lambda));
    const cplx scale = std::exp(-ai_b.w); // common factor; kept explicit, it is ~1e-7
    const cplx Hb = ai_b.tau * (1.0 + rb.R[ib]) * scale;
    const cplx Hpb = (ai_b.tau_d * kRot * (1.0 + rb.R[ib]) + ai_b.tau * rb.Rp[ib]) * scale;

    // backward integration with node capture
    DormandPrince ode;
    ode.rtol = 3e-13;
    auto rhs = [&](double s, const DormandPrince::State& y, DormandPrince::State& dy) {
        dy[0] = y[1];
        dy[1] = (gg1 / (s * s) + cplx(0, 1) * s - lambda) * y[0];
    };
    auto& nodes = profile->nodes;
    nodes.clear();
    auto record = [&](double t, const DormandPrince::State& y) {
        nodes.push_back({t, y[0], y[1], (gg1 / (t * t) + cplx(0, 1) * t - lambda) * y[0]});
    };
    record(sb, {Hb, Hpb});
    DormandPrince::State y{Hb, Hpb};
    struct Probe {
        double s;
        cplx H, Hp;
    };
    std::vector<Probe> probes;
    for (double stop : {1.0, 0.5}) {
        y = ode.integrate(rhs, nodes.back().t, stop, y, record);
        probes.push_back({stop, y[0], y[1]});
    }
    std::sort(nodes.begin(), nodes.end(),
              [](const HermiteNode& a, const HermiteNode& b) { return a.t < b.t; });

    // match value and derivative against the Frobenius basis at s_m
    auto basis = [&](double sm, cplx& up, cplx& upd, cplx& um, cplx& umd) {
        up = eval_series(profile->fp, sm); // = s^{-gamma} F_{+}(s)
        upd = eval_series_derivative(profile->fp, sm);
        um = eval_series(profile->fm, sm); // = s^{gamma+1} F_{-}(s)
        umd = eval_series_derivative(profile->fm, sm);
    };
    cplx a_c, ad_c;
    {
        const Probe& p = probes.back(); // s_m = 0.5
        cplx up, upd, um, umd;
        basis(p.s, up, upd, um, umd);
        const cplx det = up * umd - um * upd;
        if (std::abs(det) < 1e-12)
            fail(ErrorCode::degenerate, "build_h: ill-conditioned matching matrix; try another s_m");
        a_c = (p.H * umd - um * p.Hp) / det;
        ad_c = (up * p.Hp - p.H * upd) / det;
    }
    if (std::abs(a_c) < 1e-10 * std::abs(ad_c))
        fail(ErrorCode::degenerate, "build_h: a(lambda) vanished; lambda outside validity disc?");
    profile->a_raw = a_c;
    profile->d_coeff = ad_c / a_c;
    profile->norm_point = 0.5;

    ConnectionSolution sol;
    sol.lambda = lambda;
    sol.a_coeff = a_c;
    sol.d_coeff = profile->d_coeff;
    sol.s0 = s0;
    sol.profile = profile;

    // public samples
    const int n_pub = 320;
    sol.s_grid = log_grid(0.05, kSMax, n_pub);
    sol.h_values.resize(n_pub);
    for (int i = 0; i < n_pub; ++i) sol.h_values[i] = sol.profile->value(sol.s_grid[i]).unscaled();

    // ODE residual in integral (Picard) form over the whole grid:
    // H'(b) - H'(a) = int_a^b q H, panelized so the Airy exponent moves by
    // at most ~1.4 per panel
    double worst = 0.0;
    {
        auto pts = log_grid(0.3, 30.0, 40);
        for (size_t k = 0; k + 1 < pts.size(); ++k) {
            const double a_s = pts[k], b_s = pts[k + 1];
            std::vector<double> brk{a_s};
            double u = std::pow(a_s, 1.5);
            const double ub = std::pow(b_s, 1.5);
            while (u + 3.0 < ub) {
                u += 3.0;
                brk.push_back(std::pow(u, 2.0 / 3.0));
            }
            brk.push_back(b_s);
            auto qh = [&](double s) { return profile->q_coeff(s) * profile->value(s).unscaled(); };
            const cplx integral = gauss_panels(qh, brk, 16);
            const cplx da = profile->derivative(a_s).unscaled();
            const cplx db = profile->derivative(b_s).unscaled();
            auto aqh = [&](double s) { return std::abs(qh(s)); };
            const double scale = std::abs(da) + std::abs(db) + gauss_panels(aqh, brk, 16);
            worst = std::max(worst, std::abs(db - da - integral) / scale);
        }
    }
    sol.residual = worst;
    return sol;
}

cplx d_zero_closed(double gamma) {
    const double a = (2.0 * gamma + 1.0) / 3.0;
    if (!(a > 2.0 / 3.0 && a < 2.0))
        fail(ErrorCode::domain, "d_zero_closed: (2 gamma+1)/3 outside (2/3, 2)");
    if (std::abs(a - 1.0) < 1e-9)
        fail(ErrorCode::resonance,
             "d_zero_closed: pole at beta = 2; only Re d(0) -> -pi/18 has a limit");
    const cplx phase = std::polar(1.0, kPi / 2.0 * a);
    return -phase * std::pow(9.0, -a) * gamma_complex(1.0 - a) / gamma_complex(1.0 + a);
}

double kernel_bound_check(cplx lambda, const std::vector<double>& s_samples) {
    double worst = 0.0;
    for (double s : s_samples) {
        if (s < 1.0) fail(ErrorCode::domain, "kernel_bound_check: needs s >= 1");
        for (double z : {s, 1.2 * s, 2.0 * s, 4.0 * s, 8.0 * s}) {
            if (z > 30.0 || z < s) continue;
            auto [lmz, wz] = airy_scaled_pair(z, lambda);
            auto f = [&](double u) {
                auto [lmu, wu] = airy_scaled_pair(u, lambda);
                return detail::ratio_sq(lmz, wz, lmu, wu);
            };
            const int panels = std::max(2, int((z - s) * std::sqrt(z) * 0.5));
            std::vector<double> brk(panels + 1);
            for (int p = 0; p <= panels; ++p) brk[p] = s + (z - s) * p / panels;
            const cplx I = gauss_panels(f, brk, 12);
            worst = std::max(worst, std::abs(I) * std::sqrt(1.0 + std::abs(z)));
        }
    }
    return worst;
}

double coefficient_lemma_integral(const ConnectionSolution& sol) {
    const HProfile& hp = *sol.profile;
    const double gamma = hp.gamma;
    // series part on [0, s_c]: Im of int s^{1-2g} F+ + d int s^2 F-
    const double s_c = 0.8;
    double acc = 0.0;
    {
        // only Im g_n enters (s^{1-2 gamma} is real); the nonzero ones start at
        // n = 3, so every contributing exponent n + 2 - 2 gamma is positive
        double xs = std::pow(s_c, 2.0 - 2.0 * gamma);
        for (size_t n = 0; n < hp.fp.coeffs.size(); ++n) {
            const double im = std::imag(hp.fp.coeffs[n]);
            const double expo = double(n) + 2.0 - 2.0 * gamma;
            if (im != 0.0) {
                if (expo <= 0.0)
                    fail(ErrorCode::domain, "coefficient_lemma_integral: non-integrable series term");
                acc += im * xs / expo;
            }
            xs *= s_c;
        }
        double ys = std::pow(s_c, 3.0);
        for (size_t n = 0; n < hp.fm.coeffs.size(); ++n) {
            const double expo = double(n) + 3.0;
            acc += std::imag(hp.d_coeff * hp.fm.coeffs[n]) * ys / expo;
            ys *= s_c;
        }
    }
    // numeric part on [s_c, s_max] with the profile
    auto f = [&](double s) { return std::pow(s, 1.0 - gamma) * std::imag(hp.value(s).unscaled()); };
    std::vector<double> brk = log_grid(s_c, hp.s_max, 160);
    acc += gauss_panels(f, brk, 8);
    return acc;
}

} // namespace ht
