#pragma once

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace ht::detail {

// (f_j / f_k)^2 for f = exp(log_m - w); exponents combined before the single exp.
inline cplx ratio_sq(const cplx& lm_j, const cplx& w_j, const cplx& lm_k, const cplx& w_k) {
    cplx e = 2.0 * (lm_j - lm_k) - 2.0 * (w_j - w_k);
    if (e.real() < -700.0) return 0.0;
    return std::exp(e);
}

// Volterra kernel K(g)(s) = int_s^{smax} [int_s^z f^2(z)/f^2(u) du] weight(z) g(z) dz
// on an explicit grid, with the base solution f supplied in scaled form
// (log mantissa, exponent). Used with f = Ai on the rotated ray (model equation)
// and f = Theta (full potential).
//
// The inner integral is assembled from interval pieces,
//   I(s_i, z) = P(s_j -> z) + rho(z, s_j) I(s_i, s_j),   z in [s_j, s_j+1],
// where P and rho do not depend on the row i. Rows are then quadratures with
// fixed per-interval Gauss nodes, so no accuracy is lost to sample seams.
struct RayKernel {
    static constexpr int kNodes = 4;   // outer Gauss nodes per interval
    static constexpr int kInner = 12;  // inner Gauss order for the P pieces

    std::vector<double> grid;
    std::vector<cplx> log_m, w;        // scaled node values
    std::vector<cplx> weight_node;     // outer weight at the grid nodes (diagnostics)
    std::vector<cplx> inner_full;      // I(i,j) flattened, row-major upper triangle
    size_t n = 0;

    // per interval j, per Gauss node q
    std::vector<double> zq;            // node positions
    std::vector<cplx> rho;             // (f(z_q)/f(s_j))^2
    std::vector<cplx> pq;              // int_{s_j}^{z_q} (f(z_q)/f(u))^2 du
    std::vector<cplx> qw;              // weight(z_q) * Gauss weight
    std::vector<double> lag;           // 4-point Lagrange coefficients onto grid samples
    std::vector<int> lag_base;         // first grid index of the stencil per interval

    cplx& inner_at(size_t i, size_t j) { return inner_full[i * n + j]; }
    cplx inner_at(size_t i, size_t j) const { return inner_full[i * n + j]; }

    template <typename Eval, typename Weight>
    void build(std::vector<double> g, std::vector<cplx> lm, std::vector<cplx> ww,
               Weight&& weight_fn, Eval&& eval) {
        grid = std::move(g);
        log_m = std::move(lm);
        w = std::move(ww);
        n = grid.size();
        weight_node.resize(n);
        for (size_t i = 0; i < n; ++i) weight_node[i] = weight_fn(grid[i]);

        const GaussRule& gr = gauss_rule(kNodes);
        zq.assign((n - 1) * kNodes, 0.0);
        rho.assign((n - 1) * kNodes, cplx(0.0));
        pq.assign((n - 1) * kNodes, cplx(0.0));
        qw.assign((n - 1) * kNodes, cplx(0.0));
        lag.assign((n - 1) * kNodes * 4, 0.0);
        lag_base.assign(n - 1, 0);
        std::vector<cplx> P(n - 1); // full-interval pieces for the I recursion

        for (size_t j = 0; j + 1 < n; ++j) {
            const double a = grid[j], b = grid[j + 1];
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            const int base = int(j) == 0 ? 0 : (j + 2 < n ? int(j) - 1 : int(n) - 4);
            lag_base[j] = base;
            for (int q = 0; q < kNodes; ++q) {
                const size_t id = j * kNodes + q;
                const double z = mid + half * gr.x[q];
                zq[id] = z;
                auto [lmz, wz] = eval(z);
                rho[id] = ratio_sq(lmz, wz, log_m[j], w[j]);
                // P(s_j -> z) by inner Gauss quadrature of (f(z)/f(u))^2
                auto f = [&](double u) {
                    auto [lmu, wu] = eval(u);
                    return ratio_sq(lmz, wz, lmu, wu);
                };
                pq[id] = gauss_panel(f, a, z, kInner);
                qw[id] = weight_fn(z) * (half * gr.w[q]);
                // cubic Lagrange stencil for g at z
                for (int k = 0; k < 4; ++k) {
                    double l = 1.0;
                    for (int m = 0; m < 4; ++m)
                        if (m != k) l *= (z - grid[base + m]) / (grid[base + k] - grid[base + m]);
                    lag[id * 4 + k] = l;
                }
            }
            auto f_full = [&](double u) {
                auto [lmu, wu] = eval(u);
                return ratio_sq(log_m[j + 1], w[j + 1], lmu, wu);
            };
            P[j] = gauss_panel(f_full, a, b, kInner);
        }

        inner_full.assign(n * n, cplx(0.0));
        for (size_t j = 1; j < n; ++j)
            for (size_t i = j; i-- > 0;)
                inner_at(i, j) = inner_at(i + 1, j)
                               + ratio_sq(log_m[j], w[j], log_m[i + 1], w[i + 1]) * P[i];
    }

    // g at the Gauss node (j,q) from the grid samples
    cplx sample(const std::vector<cplx>& g, size_t j, int q) const {
        const size_t id = j * kNodes + q;
        cplx acc = 0.0;
        for (int k = 0; k < 4; ++k) acc += lag[id * 4 + k] * g[lag_base[j] + k];
        return acc;
    }

    std::vector<cplx> apply(const std::vector<cplx>& g) const {
        // A_j = sum_q qw P g, B_j = sum_q qw rho g; K_i = sum_{j>=i} A_j + B_j I(i,j)
        std::vector<cplx> A(n - 1), B(n - 1);
        for (size_t j = 0; j + 1 < n; ++j) {
            cplx a = 0.0, b = 0.0;
            for (int q = 0; q < kNodes; ++q) {
                const size_t id = j * kNodes + q;
                const cplx gz = sample(g, j, q);
                a += qw[id] * pq[id] * gz;
                b += qw[id] * rho[id] * gz;
            }
            A[j] = a;
            B[j] = b;
        }
        std::vector<cplx> out(n, cplx(0.0));
        cplx suffixA = 0.0;
        for (size_t i = n - 1; i-- > 0;) {
            suffixA += A[i];
            cplx acc = suffixA;
            for (size_t j = i; j + 1 < n; ++j) {
                const cplx I = inner_at(i, j);
                if (I != cplx(0.0)) acc += B[j] * I;
            }
            out[i] = acc;
        }
        return out;
    }

    double row_norm(size_t i) const {
        if (i + 1 >= n) return 0.0;
        double acc = 0.0;
        for (size_t j = i; j + 1 < n; ++j)
            for (int q = 0; q < kNodes; ++q) {
                const size_t id = j * kNodes + q;
                acc += std::abs(qw[id]) * std::abs(pq[id] + rho[id] * inner_at(i, j));
            }
        return acc;
    }

    int neumann(std::vector<cplx>& R, const std::vector<cplx>& tail, double tol = 1e-12,
                int max_iter = 200) const {
        if (R.size() != n) R.assign(n, cplx(0.0));
        std::vector<cplx> one_plus(n);
        for (int it = 0; it < max_iter; ++it) {
            for (size_t i = 0; i < n; ++i) one_plus[i] = 1.0 + R[i];
            std::vector<cplx> next = apply(one_plus);
            double delta = 0.0;
            for (size_t i = 0; i < n; ++i) {
                next[i] += tail[i];
                delta = std::max(delta, std::abs(next[i] - R[i]));
            }
            R.swap(next);
            if (delta < tol) return it + 1;
        }
        fail(ErrorCode::convergence, "ray_kernel: Neumann iteration did not converge");
    }

    int neumann(std::vector<cplx>& R, cplx tail_const, double tol = 1e-12,
                int max_iter = 200) const {
        std::vector<cplx> tail(n, tail_const);
        return neumann(R, tail, tol, max_iter);
    }

    // R'(s_i) = -f^{-2}(s_i) int_{s_i}^{smax} f^2(z) weight(z) (1+R(z)) dz;
    // (f(z)/f(s_i))^2 = rho(z, s_j) (f(s_j)/f(s_i))^2 keeps every factor damped.
    std::vector<cplx> derivative(const std::vector<cplx>& R) const {
        std::vector<cplx> S(n - 1);
        std::vector<cplx> one_plus(n);
        for (size_t i = 0; i < n; ++i) one_plus[i] = 1.0 + R[i];
        for (size_t j = 0; j + 1 < n; ++j) {
            cplx s = 0.0;
            for (int q = 0; q < kNodes; ++q) {
                const size_t id = j * kNodes + q;
                s += qw[id] * rho[id] * sample(one_plus, j, q);
            }
            S[j] = s;
        }
        std::vector<cplx> out(n, cplx(0.0));
        for (size_t i = 0; i + 1 < n; ++i) {
            cplx acc = 0.0;
            for (size_t j = i; j + 1 < n; ++j) {
                const cplx r = ratio_sq(log_m[j], w[j], log_m[i], w[i]);
                if (r == cplx(0.0)) break; // exponentially dead beyond this point
                acc += r * S[j];
            }
            out[i] = -acc;
        }
        return out;
    }
};

} // namespace ht::detail
