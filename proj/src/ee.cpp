#include "udnmf/ee.hpp"

#include <cmath>

#include "udnmf/errors.hpp"
#include "udnmf/math_util.hpp"

namespace udnmf {

double compute_c1(double alpha, double e_log_g) {
    return 2.0 * e_log_g + alpha * (euler_gamma + std::log(M_PI)) / 2.0;
}

namespace {

// interference at population power p_hat, honoring the frozen/linear split
double i_hat_at(const EEParams& params, double p_hat) {
    if (params.i_hat.p_hat > 0.0) return params.i_hat.value / params.i_hat.p_hat * p_hat;
    return params.i_hat.value;
}

double ee_core(double p, double c1, double denom, double p_c) {
    return (c1 + std::log(p / denom)) / (p_c + p);
}

}  // namespace

double ee_closed_form(double p, const EEParams& params) {
    if (p <= 0.0) throw domain_error("ee_closed_form: P must be > 0");
    if (p > params.cfg.p_max) throw domain_error("ee_closed_form: P must be <= p_max");
    double denom = normalized_noise(params.cfg) + params.i_hat.value;
    if (denom <= 0.0) throw parameter_error("ee_closed_form: sigma'^2 + I_hat must be > 0");
    return ee_core(p, params.c1, denom, params.cfg.p_c);
}

double ee_homogeneous(double p, const EEParams& params) {
    EEParams tied = params;
    tied.i_hat.value = i_hat_at(params, p);
    tied.i_hat.p_hat = p;
    return ee_closed_form(p, tied);
}

GumbelParams gumbel_params(double p, const EEParams& params, double g_magnitude) {
    if (p <= 0.0) throw domain_error("gumbel_params: P must be > 0");
    if (g_magnitude <= 0.0) throw domain_error("gumbel_params: |g| must be > 0");
    double denom = normalized_noise(params.cfg) + params.i_hat.value;
    if (denom <= 0.0) throw parameter_error("gumbel_params: sigma'^2 + I_hat must be > 0");
    GumbelParams gp;
    gp.beta = params.cfg.alpha / (2.0 * (p + params.cfg.p_c));
    double c0 = p * g_magnitude * g_magnitude / denom;
    gp.mu_g = gp.beta * std::log(M_PI * std::pow(c0, 2.0 / params.cfg.alpha));
    return gp;
}

double ee_gumbel_mean(double p, const EEParams& params, const RicianMarginal& fading) {
    if (p <= 0.0) throw domain_error("ee_gumbel_mean: P must be > 0");
    double denom = normalized_noise(params.cfg) + params.i_hat.value;
    if (denom <= 0.0) throw parameter_error("ee_gumbel_mean: sigma'^2 + I_hat must be > 0");
    double e_log_g = fading_log_moment(fading);
    double beta = params.cfg.alpha / (2.0 * (p + params.cfg.p_c));
    // E_g[mu_G] with E[log c0] expanded through the fading log moment
    double e_log_c0 = std::log(p / denom) + 2.0 * e_log_g;
    double e_mu_g = beta * (std::log(M_PI) + 2.0 / params.cfg.alpha * e_log_c0);
    return e_mu_g + beta * euler_gamma;
}

EEResult optimal_power_fixed_point(const EEParams& params, double p_init, double p_hat_init,
                                   const FixedPointOptions& opts) {
    params.cfg.validate();
    if (p_init <= 0.0 || p_init > params.cfg.p_max)
        throw parameter_error("optimal_power_fixed_point: p_init must lie in (0, p_max]");
    if (p_hat_init <= 0.0 || p_hat_init > params.cfg.p_max)
        throw parameter_error("optimal_power_fixed_point: p_hat_init must lie in (0, p_max]");
    if (opts.max_iter < 1) throw parameter_error("optimal_power_fixed_point: max_iter must be >= 1");
    double noise = normalized_noise(params.cfg);
    double num = params.cfg.p_c * std::exp(params.c1 - 1.0);

    EEResult res;
    bool step_clamped = false;
    auto step = [&](double p_hat) {
        double denom = noise + i_hat_at(params, p_hat);
        if (denom <= 0.0)
            throw parameter_error("optimal_power_fixed_point: W argument must be > 0");
        double w = lambert_w0(num / denom);
        double p = params.cfg.p_c / w;
        step_clamped = p > params.cfg.p_max;
        return step_clamped ? params.cfg.p_max : p;
    };

    bool frozen = params.i_hat.p_hat <= 0.0;
    double prev = p_init;
    double p = step(p_hat_init);
    res.residual_trace.push_back(std::abs(p - prev));
    res.iterations = 1;
    if (!frozen && res.residual_trace.back() >= opts.tol) {
        double last_delta = p - prev;
        int oscillations = 0;
        bool converged = false;
        for (int k = 2; k <= opts.max_iter; ++k) {
            prev = p;
            double next = step(p);
            double delta = next - prev;
            if (delta * last_delta < 0.0) {
                if (++oscillations >= 5) next = 0.5 * next + 0.5 * prev;  // relaxation fallback
            } else {
                oscillations = 0;
            }
            last_delta = delta;
            p = next;
            res.residual_trace.push_back(std::abs(p - prev));
            res.iterations = k;
            if (res.residual_trace.back() < opts.tol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw convergence_error("optimal_power_fixed_point: no convergence after max_iter",
                                    res.residual_trace);
    }
    res.clamped = step_clamped;  // whether the accepted iterate hit p_max
    res.power = p;
    res.i_hat_at_solution = i_hat_at(params, p);
    res.ee_value = ee_core(p, params.c1, noise + res.i_hat_at_solution, params.cfg.p_c);
    return res;
}

double baseline_fixed_power(const EEParams& params) {
    return ee_homogeneous(params.cfg.p_max / 2.0, params);
}

SearchResult baseline_full_search(const EEParams& params, int grid_size) {
    if (grid_size < 2) throw parameter_error("baseline_full_search: grid_size must be >= 2");
    double p_lo = 1e-4 * params.cfg.p_max;
    double ratio = std::log(params.cfg.p_max / p_lo);
    SearchResult best;
    bool have = false;
    for (int i = 0; i < grid_size; ++i) {
        double frac = static_cast<double>(i) / (grid_size - 1);
        double p = i + 1 == grid_size ? params.cfg.p_max : p_lo * std::exp(ratio * frac);
        double v = ee_homogeneous(p, params);
        if (!have || v > best.ee_value) {
            best = {p, v};
            have = true;
        }
    }
    return best;
}

}  // namespace udnmf
