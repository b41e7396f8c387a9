#include "udnmf/channel.hpp"

#include <cmath>

#include "udnmf/errors.hpp"
#include "udnmf/math_util.hpp"

namespace udnmf {

double FadingParams::mu_norm() const { return std::hypot(mu_x, mu_y); }
double FadingState::norm() const { return std::hypot(gx, gy); }
double FadingState::norm_sq() const { return gx * gx + gy * gy; }

AntennaModel::AntennaModel(int n_antennas) : n(n_antennas) {
    if (n_antennas < 1) throw parameter_error("AntennaModel: n_antennas must be >= 1");
}

double AntennaModel::main_gain() const { return static_cast<double>(n); }
double AntennaModel::beam_width() const { return 2.0 * M_PI / std::sqrt(static_cast<double>(n)); }
double AntennaModel::hit_probability() const { return 1.0 / std::sqrt(static_cast<double>(n)); }
double AntennaModel::mean_factor() const { return std::sqrt(static_cast<double>(n)); }

double path_loss(double distance, double alpha) {
    if (alpha <= 2.0) throw parameter_error("path_loss: alpha must be > 2");
    if (distance < 0.0) throw parameter_error("path_loss: distance must be >= 0");
    if (distance <= 1.0) return 1.0;
    return std::pow(distance, -alpha);
}

double path_loss_powerlaw(double distance, double alpha) {
    if (alpha <= 2.0) throw parameter_error("path_loss_powerlaw: alpha must be > 2");
    if (distance < 0.0) throw parameter_error("path_loss_powerlaw: distance must be >= 0");
    return std::pow(std::max(distance, 1e-9), -alpha);
}

FadingState evolve_fading(const FadingState& state, double dt, const FadingParams& params,
                          rng_t& rng) {
    if (dt <= 0.0) throw parameter_error("evolve_fading: dt must be > 0");
    double decay = std::exp(-0.5 * dt);
    double sd = params.eta * std::sqrt(-std::expm1(-dt));
    std::normal_distribution<double> normal(0.0, 1.0);
    FadingState out;
    out.gx = params.mu_x + (state.gx - params.mu_x) * decay + sd * normal(rng);
    out.gy = params.mu_y + (state.gy - params.mu_y) * decay + sd * normal(rng);
    out.t = state.t + dt;
    return out;
}

RicianMarginal fading_marginal(double t, const FadingParams& params, MarginalMode mode) {
    if (t < 0.0) throw parameter_error("fading_marginal: t must be >= 0");
    double relax = -std::expm1(-0.5 * t);  // 1 - e^(-t/2)
    double full = -std::expm1(-t);         // 1 - e^(-t)
    RicianMarginal m;
    m.nu = params.mu_norm() * relax;
    m.s = mode == MarginalMode::paper ? params.eta * full : params.eta * std::sqrt(full);
    return m;
}

double fading_second_moment(const RicianMarginal& m) { return m.nu * m.nu + 2.0 * m.s * m.s; }

double fading_log_moment(const RicianMarginal& m) {
    if (m.nu < 0.0 || m.s < 0.0) throw parameter_error("fading_log_moment: negative parameter");
    if (m.s == 0.0) {
        if (m.nu == 0.0)
            throw insufficient_data_error("fading_log_moment: degenerate zero magnitude");
        return std::log(m.nu);  // point mass at nu
    }
    double nu = m.nu, s = m.s;
    double inv2s2 = 1.0 / (2.0 * s * s);
    // log density of Rice(nu, s) kept in log space; the Bessel factor can be huge
    auto log_pdf = [&](double r) {
        return std::log(r) - 2.0 * std::log(s) - (r * r + nu * nu) * inv2s2 +
               log_bessel_i0(r * nu / (s * s));
    };
    // substitute x = log r; integrand x * f(e^x) * e^x handles the log kink at 0.
    // When nu >> s the density is a sliver near nu; shrink the domain onto it so
    // the adaptive rule cannot step over the peak.
    double r_lo = std::max(s * 1e-9, nu - 13.0 * s);
    double x_lo = std::log(r_lo);
    double x_hi = std::log(nu + 13.0 * s);
    auto integrand = [&](double x) {
        double r = std::exp(x);
        return x * std::exp(log_pdf(r) + x);
    };
    // split at the mode: a probe point lands on the bulk of the mass even when
    // the density is a narrow spike far from both endpoints
    double x_mode = std::log(std::max(nu, s));
    return adaptive_simpson(integrand, x_lo, x_mode, 1e-10) +
           adaptive_simpson(integrand, x_mode, x_hi, 1e-10);
}

double sample_rician(const RicianMarginal& m, rng_t& rng) {
    if (m.s == 0.0) return m.nu;
    std::normal_distribution<double> normal(0.0, m.s);
    double x = m.nu + normal(rng);
    double y = normal(rng);
    return std::hypot(x, y);
}

namespace {

struct GaussLaw {
    double mean, sd;
    double pdf(double u) const {
        double z = (u - mean) / sd;
        return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
    }
};

GaussLaw component_law(double t, const FadingParams& p, MarginalMode mode) {
    double relax = -std::expm1(-0.5 * t);
    double full = -std::expm1(-t);
    double sd = mode == MarginalMode::paper ? p.eta * full : p.eta * std::sqrt(full);
    return {p.mu_x * relax, sd};
}

}  // namespace

double fpk_residual_check(const FadingParams& params, MarginalMode mode, double t,
                          int n_points) {
    if (n_points < 5) throw parameter_error("fpk_residual_check: need at least 5 grid points");
    if (!(t > 0.0)) throw parameter_error("fpk_residual_check: t must be > 0");
    if (params.eta <= 0.0) throw parameter_error("fpk_residual_check: eta must be > 0");
    GaussLaw now = component_law(t, params, mode);
    double h = 12.0 * now.sd / (n_points - 1);
    double ht = 0.25 * h;
    GaussLaw fwd = component_law(t + ht, params, mode);
    GaussLaw bwd = component_law(t - ht, params, mode);
    double mu = params.mu_x;
    double eta2 = params.eta * params.eta;
    double u0 = now.mean - 6.0 * now.sd;
    double sup = 0.0;
    for (int i = 1; i + 1 < n_points; ++i) {
        double u = u0 + i * h;
        double fm = now.pdf(u - h), f0 = now.pdf(u), fp = now.pdf(u + h);
        double dfdt = (fwd.pdf(u) - bwd.pdf(u)) / (2.0 * ht);
        double drift = ((u + h - mu) * fp - (u - h - mu) * fm) / (2.0 * h);
        double diff = (fp - 2.0 * f0 + fm) / (h * h);
        double res = std::abs(dfdt - 0.5 * drift - 0.5 * eta2 * diff);
        sup = std::max(sup, res);
    }
    return sup;
}

}  // namespace udnmf
