#pragma once

#include "udnmf/rng.hpp"

namespace udnmf {

// Drift target and volatility of the per-component fading SDE
// dg = (mu - g)/2 dt + eta dW.
struct FadingParams {
    double mu_x = 1.0;
    double mu_y = 1.0;
    double eta = 1.0;
    double mu_norm() const;
    bool operator==(const FadingParams&) const = default;
};

struct FadingState {
    double gx = 0.0;
    double gy = 0.0;
    double t = 0.0;
    double norm() const;
    double norm_sq() const;
};

// |g(t)| law for g(0) = 0: Rice(nu, s).
struct RicianMarginal {
    double nu = 0.0;
    double s = 0.0;
};

// paper: scale eta(1-e^-t) as printed; sde: eta*sqrt(1-e^-t), the exact
// transition variance of the SDE. Both agree at t=0 and t=inf.
enum class MarginalMode { paper, sde };

// Sectorized beam: main-lobe gain N over width 2*pi/sqrt(N), side lobes ignored.
struct AntennaModel {
    explicit AntennaModel(int n_antennas);
    int n = 1;
    double main_gain() const;       // N
    double beam_width() const;      // 2*pi/sqrt(N)
    double hit_probability() const; // 1/sqrt(N)
    double mean_factor() const;     // N * hit = sqrt(N)
};

// min(1, d^-alpha): attenuation never amplifies
double path_loss(double distance, double alpha);

// pure power law d^-alpha, the serving-link response (distance clamped away
// from zero); interferers use the bounded law
double path_loss_powerlaw(double distance, double alpha);

// exact OU transition over dt (no discretization bias)
FadingState evolve_fading(const FadingState& state, double dt, const FadingParams& params,
                          rng_t& rng);

// |g(t)| marginal from g(0)=0; t may be infinity (stationary Rice(|mu|, eta))
RicianMarginal fading_marginal(double t, const FadingParams& params, MarginalMode mode);

double fading_second_moment(const RicianMarginal& m);  // nu^2 + 2 s^2

// E[log |g|] under Rice(nu, s) by adaptive quadrature, abs error <= 1e-8
double fading_log_moment(const RicianMarginal& m);

double sample_rician(const RicianMarginal& m, rng_t& rng);

// Sup-norm finite-difference residual of the forward equation
// df/dt = 1/2 d/du[(u-mu)f] + eta^2/2 d2f/du2 on the x-component Gaussian
// marginal at time t (t = inf checks the stationary density). sde-mode
// marginals solve it, so the residual decays O(h^2); paper mode does not.
double fpk_residual_check(const FadingParams& params, MarginalMode mode, double t,
                          int n_points);

}  // namespace udnmf
