#pragma once

#include <optional>
#include <vector>

#include "halfline.hpp"
#include "model.hpp"

namespace ht {

enum class EigenMethod { connection, matrix };

struct EigenResult {
    double eta = 0.0;
    cplx mu;
    EigenMethod method = EigenMethod::connection;
    cplx lambda;                            // mu * eta^{-2/3} for the connection method
    std::optional<SampledFn> eigenfunction; // matrix method only
    double residual = 0.0;
    int iterations = 0;
    double grid_mismatch = 0.0;             // matrix method: pre-extrapolation Richardson gap
    int n_grid = 0;
};

// Root of the connection condition b(lambda,eta) + conj(b(conj lambda, eta)) = 0,
// i.e. Re b(lambda,eta) = 0 on the real lambda axis, by a secant iteration seeded
// with the leading-order formula lambda = -Re b(0,eta) eta^{-2/3} / int_0^inf M^2.
// Negative eta is handled by the conjugation symmetry mu(-eta) = conj(mu(eta)).
EigenResult solve_mu_connection(double eta, const ModelParams& params);

// Independent oracle: central differences on [-v_max, v_max] with Dirichlet ends,
// inverse iteration for the eigenvalue of smallest modulus, Richardson
// extrapolation over n_grid/2 and n_grid. Doubles the grid (up to 2^17) until the
// pre-extrapolation mismatch is below 1e-3.
EigenResult solve_mu_matrix(double eta, double v_max, int n_grid, double gamma);

// kappa = 2 C_beta^2 (beta+1) 9^{-(beta+1)/3} cos(pi(beta+1)/6)
//         * Gamma(1-(beta+1)/3)/Gamma(1+(beta+1)/3),
// evaluated through the reflection-regularized form that stays finite across
// alpha = 1. Rejects beta outside (1,5) and the resonant values {2,3,4}.
double kappa_closed(double beta);

struct ScalingFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double r_squared = 0.0;
};

// least-squares fit of log Re mu against log eta
ScalingFit fit_scaling(const std::vector<std::pair<double, cplx>>& points);

// geometric eta sweep; points computed independently (optionally in parallel)
// and returned in ascending eta order
std::vector<EigenResult> sweep_mu(const ModelParams& params, double eta_min, double eta_max,
                                  int points, EigenMethod method, int threads = 0);

} // namespace ht
