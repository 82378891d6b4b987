#include "kinetic.hpp"

#include <algorithm>
#include <cmath>

#include "eigen.hpp"
#include "errors.hpp"
#include "tridiag.hpp"

namespace ht {

namespace {

// Flux-form discretization of g -> -F^{-1/2} d(F d(F^{-1/2} g)) + i eta v g with
// no-flux (reflecting) walls. The continuum operator is -d^2/dv^2 + W + i eta v;
// this form conserves the discrete mass sum_j M_j g_j exactly and has M in its
// kernel at eta = 0 by construction.
struct FluxOperator {
    Tridiag A;
    std::vector<double> v, m; // nodes and M samples
    double h = 0.0;

    FluxOperator(double eta, double v_max, int n, double gamma) {
        if (n % 2 == 0) ++n; // keep v = 0 on the grid
        v.resize(n);
        m.resize(n);
        h = 2.0 * v_max / (n - 1);
        for (int j = 0; j < n; ++j) {
            v[j] = -v_max + h * j;
            m[j] = equilibrium_m(v[j], gamma);
        }
        std::vector<double> fh(n - 1); // M^2 at half nodes
        for (int j = 0; j + 1 < n; ++j) {
            const double vh = v[j] + 0.5 * h;
            const double mh = equilibrium_m(vh, gamma);
            fh[j] = mh * mh;
        }
        A.diag.resize(n);
        A.off.resize(n - 1);
        for (int j = 0; j < n; ++j) {
            const double fl = j > 0 ? fh[j - 1] : 0.0;
            const double fr = j + 1 < n ? fh[j] : 0.0;
            A.diag[j] = (fl + fr) / (m[j] * m[j] * h * h) + cplx(0, 1) * eta * v[j];
        }
        for (int j = 0; j + 1 < n; ++j) A.off[j] = -fh[j] / (m[j] * m[j + 1] * h * h);
    }
};

struct RunResult {
    std::vector<cplx> rho, fhat;
    std::vector<double> mass;
    std::vector<cplx> final_state;
    cplx rho0;
};

RunResult run_steps(const FluxOperator& op, const std::vector<cplx>& meta, double rate,
                    double s_final, int n_steps, std::vector<cplx> g, double c_beta) {
    const size_t n = g.size();
    const double ds = s_final / n_steps;
    const double z = ds * rate; // Cayley parameter per step
    Tridiag left;
    left.diag.resize(n);
    left.off.resize(n - 1);
    for (size_t j = 0; j < n; ++j) left.diag[j] = 1.0 + 0.5 * z * op.A.diag[j];
    for (size_t j = 0; j + 1 < n; ++j) left.off[j] = 0.5 * z * op.A.off[j];
    TridiagLU lu(left);

    RunResult out;
    out.rho.reserve(n_steps + 1);
    out.fhat.reserve(n_steps + 1);
    out.mass.reserve(n_steps + 1);
    auto record = [&]() {
        cplx rho = 0.0, fh = 0.0;
        double ms = 0.0;
        for (size_t j = 0; j < n; ++j) {
            rho += g[j] * op.m[j];
            fh += g[j] * meta[j];
            ms += std::abs(g[j]) * op.m[j];
        }
        out.rho.push_back(c_beta * op.h * rho);
        out.fhat.push_back(c_beta * op.h * fh);
        out.mass.push_back(c_beta * op.h * ms);
    };
    record();
    out.rho0 = out.rho[0];
    std::vector<cplx> work(n), rhs(n);
    for (int step = 0; step < n_steps; ++step) {
        op.A.apply(g, work);
        for (size_t j = 0; j < n; ++j) rhs[j] = g[j] - 0.5 * z * work[j];
        lu.solve(rhs);
        g.swap(rhs);
        record();
    }
    out.final_state = std::move(g);
    return out;
}

} // namespace

InitialData equilibrium_initial_data(const ModelParams& params) {
    const double cb = std::sqrt(params.c_beta_sq);
    const double g = params.gamma;
    return [cb, g](double v) { return cplx(cb * equilibrium_m(v, g)); };
}

cplx fractional_reference(cplx rho0, double k, double s, const ModelParams& params) {
    const double kappa = kappa_closed(params.beta);
    return rho0 * std::exp(-kappa * std::pow(std::abs(k), params.alpha) * s);
}

ModeEvolution evolve_mode(double k, double epsilon, const InitialData& g0, double s_final,
                          int n_steps, const ModelParams& params, int n_grid, bool check_step) {
    if (!(epsilon > 0.0) || !(s_final > 0.0) || n_steps < 2)
        fail(ErrorCode::invalid_argument, "evolve_mode: bad run parameters");
    const double eta = epsilon * k;
    // k = 0 has no Airy layer; otherwise resolve it (the eps floor 0.01 keeps V modest)
    const double vm = std::max(50.0, 10.0 * std::pow(std::max(std::abs(eta), 1e-3), -1.0 / 3.0));
    FluxOperator op(eta, vm, n_grid, params.gamma);
    const size_t n = op.v.size();

    // eigenpair of the same discrete generator, normalized M^eta(0) = 1
    std::vector<cplx> guess(n);
    for (size_t j = 0; j < n; ++j) guess[j] = op.m[j];
    EigenPair ep = smallest_eigenpair(op.A, cplx(0.0), &guess);
    const size_t ic = (n - 1) / 2;
    std::vector<cplx> meta = ep.vector;
    const cplx center = meta[ic];
    if (std::abs(center) > 0.0)
        for (auto& x : meta) x /= center;

    std::vector<cplx> g(n);
    for (size_t j = 0; j < n; ++j) g[j] = g0(op.v[j]);

    const double rate = std::pow(epsilon, -params.alpha);
    const double cb = std::sqrt(params.c_beta_sq);
    RunResult full = run_steps(op, meta, rate, s_final, n_steps, g, cb);

    ModeEvolution ev;
    ev.k = k;
    ev.epsilon = epsilon;
    ev.mu_eta = ep.value;
    ev.v_max = vm;
    ev.n_grid = int(n);
    ev.times.resize(n_steps + 1);
    for (int i = 0; i <= n_steps; ++i) ev.times[i] = s_final * i / n_steps;
    ev.rho_hat = std::move(full.rho);
    ev.f_hat = std::move(full.fhat);
    ev.mass = std::move(full.mass);
    ev.reference.resize(n_steps + 1);
    for (int i = 0; i <= n_steps; ++i)
        ev.reference[i] = fractional_reference(ev.rho_hat[0], k, ev.times[i], params);
    ev.final_state.v = op.v;
    ev.final_state.y = std::move(full.final_state);

    if (check_step) {
        RunResult half = run_steps(op, meta, rate, s_final, 2 * n_steps, g, cb);
        const cplx a = ev.f_hat.back(), b = half.fhat.back();
        ev.step_check = std::abs(a - b) / std::max(std::abs(b), 1e-300);
        if (ev.step_check > 1e-6)
            fail(ErrorCode::resolution, "evolve_mode: step-halving mismatch "
                                            + std::to_string(ev.step_check) + " above 1e-6");
    }
    return ev;
}

GeneratorMode generator_mode(double k, double epsilon, const ModelParams& params, int n_grid) {
    const double eta = epsilon * k;
    const double vm = std::max(50.0, 10.0 * std::pow(std::max(std::abs(eta), 1e-3), -1.0 / 3.0));
    FluxOperator op(eta, vm, n_grid, params.gamma);
    const size_t n = op.v.size();
    std::vector<cplx> guess(n);
    for (size_t j = 0; j < n; ++j) guess[j] = op.m[j];
    EigenPair ep = smallest_eigenpair(op.A, cplx(0.0), &guess);
    GeneratorMode gm;
    gm.v = op.v;
    gm.psi = std::move(ep.vector);
    gm.mu = ep.value;
    const cplx center = gm.psi[(n - 1) / 2];
    if (std::abs(center) > 0.0)
        for (auto& x : gm.psi) x /= center;
    return gm;
}

std::vector<double> limit_gap(double k, double s_final, int n_steps,
                              const std::vector<double>& epsilons, const InitialData& g0,
                              const ModelParams& params, int n_grid) {
    for (size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1]))
            fail(ErrorCode::invalid_argument, "limit_gap: epsilons must decrease");
    std::vector<double> gaps;
    for (double eps : epsilons) {
        ModeEvolution ev = evolve_mode(k, eps, g0, s_final, n_steps, params, n_grid, false);
        double gap = 0.0;
        for (size_t i = 0; i < ev.times.size(); ++i)
            gap = std::max(gap, std::abs(ev.rho_hat[i] - ev.reference[i]));
        gaps.push_back(gap);
    }
    for (size_t i = 1; i < gaps.size(); ++i)
        if (gaps[i] > gaps[i - 1] * 1.02 + 1e-9)
            fail(ErrorCode::convergence,
                 "limit_gap: gap sequence is not decreasing (" + std::to_string(gaps[i - 1])
                     + " -> " + std::to_string(gaps[i]) + ")");
    return gaps;
}

} // namespace ht
