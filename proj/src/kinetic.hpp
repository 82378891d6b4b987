#pragma once

#include <functional>
#include <vector>

#include "model.hpp"

namespace ht {

// One Fourier mode of the rescaled kinetic equation,
//   d/ds g = -eps^{-alpha} (-d^2/dv^2 + W + i eps k v) g,
// advanced by the trapezoidal rule on a mass-conservative flux-form
// discretization of the collision part.
struct ModeEvolution {
    double k = 0.0;
    double epsilon = 0.0;
    std::vector<double> times;
    std::vector<cplx> rho_hat;    // C_beta int g M dv
    std::vector<cplx> f_hat;      // C_beta int g M^eta dv (eigen-projected moment)
    std::vector<cplx> reference;  // e^{-kappa |k|^alpha s} rho_hat(0)
    std::vector<double> mass;     // C_beta int |g| M dv
    cplx mu_eta;        // eigenvalue of the discrete generator (same grid as the run)
    SampledFn final_state;        // g at s_final on the velocity grid
    double v_max = 0.0;
    int n_grid = 0;
    double step_check = 0.0; // |F(step) - F(step/2)| / |F| at s_final
};

using InitialData = std::function<cplx(double)>;

// g0_equilibrium: g = F^{1/2}, i.e. rho_hat(0) = 1 up to domain truncation
InitialData equilibrium_initial_data(const ModelParams& params);

// eigenpair of the discrete evolution generator on the run's own grid,
// normalized psi(0) = 1 (the moment projector of evolve_mode)
struct GeneratorMode {
    std::vector<double> v;
    std::vector<cplx> psi;
    cplx mu;
};
GeneratorMode generator_mode(double k, double epsilon, const ModelParams& params,
                             int n_grid = (1 << 14));

ModeEvolution evolve_mode(double k, double epsilon, const InitialData& g0, double s_final,
                          int n_steps, const ModelParams& params, int n_grid = (1 << 14),
                          bool check_step = true);

// e^{-kappa(beta) |k|^alpha s} rho0
cplx fractional_reference(cplx rho0, double k, double s, const ModelParams& params);

// for each epsilon: sup_s |rho_hat^eps(s,k) - fractional_reference(rho0, k, s)|
std::vector<double> limit_gap(double k, double s_final, int n_steps,
                              const std::vector<double>& epsilons, const InitialData& g0,
                              const ModelParams& params, int n_grid = (1 << 14));

} // namespace ht
