#pragma once

#include <vector>

#include "udnmf/meanfield.hpp"

namespace udnmf {

// Everything the energy-efficiency closed form needs at one instant.
// i_hat.p_hat > 0 marks the interference as linear in the population power
// (value/p_hat per unit); p_hat == 0 freezes it at value.
struct EEParams {
    NetworkConfig cfg;
    double c1 = 0.0;
    MFInterference i_hat;
    double t = 0.0;  // instant the moments belong to, infinity = stationary
};

struct EEResult {
    double power = 0.0;
    double ee_value = 0.0;
    double i_hat_at_solution = 0.0;
    int iterations = 0;
    std::vector<double> residual_trace;
    bool clamped = false;
};

struct FixedPointOptions {
    double tol = 1e-6;
    int max_iter = 50;
};

// rate constant 2 E[log|g|] + alpha (gamma + log pi) / 2
double compute_c1(double alpha, double e_log_g);

// [c1 + log(P / (sigma'^2 + i_hat.value))] / (p_c + P); interference taken as stored
double ee_closed_form(double p, const EEParams& params);

// same objective with the population power tied to P (interference rescaled)
double ee_homogeneous(double p, const EEParams& params);

// location/scale of the extreme-value law the rate variable follows at fixed
// fading; its mean mu_g + beta*gamma reproduces the closed form
struct GumbelParams {
    double beta = 0.0;
    double mu_g = 0.0;
};
GumbelParams gumbel_params(double p, const EEParams& params, double g_magnitude);

// EE as the fading-averaged Gumbel mean; algebraically equal to ee_closed_form
// when params.c1 came from the same marginal
double ee_gumbel_mean(double p, const EEParams& params, const RicianMarginal& fading);

// Fixed point of P <- clamp(p_c / W(p_c e^(c1-1) / (sigma'^2 + I(P)))), the
// first-order optimality condition under the self-consistent population power.
EEResult optimal_power_fixed_point(const EEParams& params, double p_init, double p_hat_init,
                                   const FixedPointOptions& opts = {});

// EE at P = p_max/2 with the population transmitting the same
double baseline_fixed_power(const EEParams& params);

struct SearchResult {
    double power = 0.0;
    double ee_value = 0.0;
};

// argmax of ee_homogeneous over a log grid on [1e-4 p_max, p_max]
SearchResult baseline_full_search(const EEParams& params, int grid_size = 1000);

}  // namespace udnmf
