#include "eigen.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "tridiag.hpp"

namespace ht {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ConnectionSolve {
    double lambda = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

// Re b(lambda, eta) for real lambda
double psi_re_b(double lambda, double eta, const ModelParams& params) {
    ConnectionSolution h = build_h(cplx(lambda, 0.0), params);
    HalfLineSolution g = build_g(h, eta, params);
    return g.b_coeff.real();
}

ConnectionSolve solve_lambda_root(double eta, const ModelParams& params, double seed) {
    ConnectionSolve out;
    double l0 = seed;
    double l1 = seed * 1.05 + 1e-8;
    const double clamp = params.lambda0;
    auto clip = [&](double x) { return std::clamp(x, -0.1 * clamp, clamp); };
    l0 = clip(l0);
    l1 = clip(l1);
    double f0 = psi_re_b(l0, eta, params);
    double f1 = psi_re_b(l1, eta, params);
    out.iterations = 2;
    for (int it = 0; it < 40; ++it) {
        if (f1 == f0) break;
        double l2 = l1 - f1 * (l1 - l0) / (f1 - f0);
        if (!(std::isfinite(l2))) fail(ErrorCode::convergence, "solve_mu_connection: secant failure");
        if (std::abs(l2) > clamp)
            fail(ErrorCode::domain, "solve_mu_connection: root left the disc |lambda| <= lambda0");
        if (std::abs(l2 - l1) < 1e-12 * std::max(std::abs(l2), 1e-6)) {
            out.lambda = l2;
            out.residual = std::abs(f1);
            return out;
        }
        l0 = l1;
        f0 = f1;
        l1 = l2;
        f1 = psi_re_b(l1, eta, params);
        ++out.iterations;
    }
    fail(ErrorCode::convergence, "solve_mu_connection: secant did not converge in 40 steps");
}

} // namespace

EigenResult solve_mu_connection(double eta, const ModelParams& params) {
    if (eta == 0.0) fail(ErrorCode::domain, "solve_mu_connection: eta must be nonzero");
    if (eta < 0.0) {
        EigenResult r = solve_mu_connection(-eta, params);
        r.eta = eta;
        r.mu = std::conj(r.mu);
        r.lambda = std::conj(r.lambda);
        return r;
    }
    if (eta > params.eta0 + 1e-12) fail(ErrorCode::domain, "solve_mu_connection: eta > eta0");

    const double im2 = equilibrium_mass_half(params.gamma);
    ConnectionSolution h0 = build_h(cplx(0.0), params);

    auto seed_at = [&](double e) {
        HalfLineSolution g0 = build_g(h0, e, params);
        return -g0.b_coeff.real() / (std::pow(e, 2.0 / 3.0) * im2);
    };

    EigenResult out;
    out.eta = eta;
    out.method = EigenMethod::connection;
    try {
        ConnectionSolve s = solve_lambda_root(eta, params, seed_at(eta));
        out.lambda = s.lambda;
        out.iterations = s.iterations;
        out.residual = s.residual;
    } catch (const Error&) {
        // continuation: walk down from a larger eta, seeding each solve with the
        // previous root (lambda* varies slowly along the ladder)
        double e = std::min(4.0 * eta, params.eta0);
        ConnectionSolve s = solve_lambda_root(e, params, seed_at(e));
        int total = s.iterations;
        while (e > eta * 1.0001) {
            e = std::max(eta, 0.5 * e);
            s = solve_lambda_root(e, params, s.lambda);
            total += s.iterations;
        }
        out.lambda = s.lambda;
        out.iterations = total;
        out.residual = s.residual;
    }
    out.mu = out.lambda * std::pow(eta, 2.0 / 3.0);
    return out;
}

EigenResult solve_mu_matrix(double eta, double v_max, int n_grid, double gamma) {
    if (n_grid < 1024) fail(ErrorCode::invalid_argument, "solve_mu_matrix: n_grid >= 1024 required");
    const double needed = 10.0 * std::max(1.0, std::pow(std::abs(eta) > 0 ? std::abs(eta) : 1.0, -1.0 / 3.0));
    if (v_max < needed)
        fail(ErrorCode::domain, "solve_mu_matrix: v_max below 10 max(1, eta^{-1/3})");

    auto solve_raw = [&](int n, EigenPair* keep) {
        Tridiag A;
        A.diag.resize(n);
        A.off.assign(n - 1, cplx(0.0));
        const double h = 2.0 * v_max / (n + 1);
        std::vector<cplx> guess(n);
        for (int j = 0; j < n; ++j) {
            const double v = -v_max + h * (j + 1);
            A.diag[j] = 2.0 / (h * h) + potential_w(v, gamma) + cplx(0, 1) * eta * v;
            guess[j] = equilibrium_m(v, gamma);
        }
        for (int j = 0; j + 1 < n; ++j) A.off[j] = -1.0 / (h * h);
        EigenPair p = smallest_eigenpair(A, cplx(0.0), &guess);
        if (keep) *keep = std::move(p);
        return keep ? keep->value : p.value;
    };

    int n = n_grid;
    for (;;) {
        EigenPair fine;
        const cplx mu_coarse = solve_raw(n / 2, nullptr);
        const cplx mu_fine = solve_raw(n, &fine);
        const cplx mu_rich = (4.0 * mu_fine - mu_coarse) / 3.0;
        const double mism = std::abs(mu_fine - mu_coarse) / std::max(std::abs(mu_fine), 1e-300);
        // the relative test is vacuous when mu itself sits at the O(h^2) floor
        // (eta = 0 kernel); an absolute gap this small is converged either way
        if (mism <= 1e-3 || std::abs(mu_fine - mu_coarse) < 1e-6) {
            EigenResult out;
            out.eta = eta;
            out.method = EigenMethod::matrix;
            out.mu = mu_rich;
            out.lambda = std::abs(eta) > 0 ? mu_rich * std::pow(std::abs(eta), -2.0 / 3.0) : cplx(0.0);
            out.residual = fine.residual;
            out.iterations = fine.iterations;
            out.grid_mismatch = mism;
            out.n_grid = n;
            SampledFn ef;
            const double h = 2.0 * v_max / (n + 1);
            ef.v.resize(n);
            ef.y = std::move(fine.vector);
            for (int j = 0; j < n; ++j) ef.v[j] = -v_max + h * (j + 1);
            // normalize M^eta(0) = 1 (odd count keeps v = 0 on the grid for even n+1)
            size_t ic = 0;
            double best = 1e300;
            for (int j = 0; j < n; ++j)
                if (std::abs(ef.v[j]) < best) {
                    best = std::abs(ef.v[j]);
                    ic = j;
                }
            const cplx c = ef.y[ic];
            if (std::abs(c) > 0)
                for (auto& yv : ef.y) yv /= c;
            out.eigenfunction = std::move(ef);
            return out;
        }
        if (n >= (1 << 17))
            fail(ErrorCode::resolution, "solve_mu_matrix: Richardson mismatch "
                                            + std::to_string(mism) + " above 1e-3 at n = 2^17");
        n *= 2;
    }
}

double kappa_closed(double beta) {
    if (!(beta > 1.0 && beta < 5.0)) fail(ErrorCode::domain, "kappa_closed: beta outside (1,5)");
    for (int k = 2; k <= 4; ++k)
        if (std::abs(beta - k) < 1e-9)
            fail(ErrorCode::domain, "kappa_closed: resonant beta (2, 3 or 4)");
    const double a = (beta + 1.0) / 3.0;
    // cos(pi a/2) Gamma(1-a)/Gamma(1+a) = pi / (2 sin(pi a/2) Gamma(a) Gamma(1+a))
    const double f = kPi / (2.0 * std::sin(kPi * a / 2.0)
                            * gamma_complex(a).real() * gamma_complex(1.0 + a).real());
    return 2.0 * c_beta_squared(beta) * (beta + 1.0) * std::pow(9.0, -a) * f;
}

ScalingFit fit_scaling(const std::vector<std::pair<double, cplx>>& points) {
    if (points.size() < 4) fail(ErrorCode::invalid_argument, "fit_scaling: need at least 4 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = double(points.size());
    for (const auto& [eta, mu] : points) {
        if (!(mu.real() > 0.0)) fail(ErrorCode::domain, "fit_scaling: non-positive Re mu");
        const double x = std::log(eta), y = std::log(mu.real());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
    ScalingFit fit;
    fit.exponent = cxy / vx;
    fit.prefactor = std::exp((sy - fit.exponent * sx) / n);
    fit.r_squared = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
    return fit;
}

std::vector<EigenResult> sweep_mu(const ModelParams& params, double eta_min, double eta_max,
                                  int points, EigenMethod method, int threads) {
    if (!(eta_min > 0) || !(eta_max > eta_min) || points < 2)
        fail(ErrorCode::invalid_argument, "sweep_mu: bad sweep range");
    std::vector<double> etas = log_grid(eta_min, eta_max, points);
    std::vector<EigenResult> out(points);
    parallel_for(points, threads, [&](int i) {
        if (method == EigenMethod::connection) {
            out[i] = solve_mu_connection(etas[i], params);
        } else {
            const double vmax = std::max(50.0, 10.0 * std::pow(etas[i], -1.0 / 3.0));
            out[i] = solve_mu_matrix(etas[i], vmax, 1 << 14, params.gamma);
        }
    });
    return out;
}

} // namespace ht
