#include "udnmf/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "udnmf/ee.hpp"
#include "udnmf/errors.hpp"
#include "udnmf/math_util.hpp"

namespace udnmf {

void NetworkConfig::validate() const {
    if (!(alpha > 2.0)) throw parameter_error("NetworkConfig: alpha > 2 required");
    if (lambda_b < 0.0) throw parameter_error("NetworkConfig: lambda_b >= 0 required");
    if (lambda_u < 0.0) throw parameter_error("NetworkConfig: lambda_u >= 0 required");
    if (n_antennas < 1) throw parameter_error("NetworkConfig: n_antennas >= 1 required");
    if (noise < 0.0) throw parameter_error("NetworkConfig: noise >= 0 required");
    if (!(p_max > 0.0)) throw parameter_error("NetworkConfig: p_max > 0 required");
    if (!(p_c > 0.0)) throw parameter_error("NetworkConfig: p_c > 0 required");
    if (!(radius > 0.0)) throw parameter_error("NetworkConfig: radius > 0 required");
}

double normalized_noise(const NetworkConfig& cfg) {
    cfg.validate();
    if (cfg.lambda_b <= 0.0) throw parameter_error("normalized_noise: lambda_b must be > 0");
    return cfg.noise / (cfg.n_antennas * std::pow(cfg.lambda_b, cfg.alpha / 2.0));
}

namespace {

double tail_term(double radius, double alpha) {
    return (1.0 - std::pow(radius, 2.0 - alpha)) / (alpha - 2.0);
}

}  // namespace

MFInterference mf_interference(const NetworkConfig& cfg, double p_hat, double eg2) {
    cfg.validate();
    if (cfg.lambda_b <= 0.0) throw parameter_error("mf_interference: lambda_b must be > 0");
    if (p_hat < 0.0 || p_hat > cfg.p_max)
        throw parameter_error("mf_interference: p_hat must lie in [0, p_max]");
    if (eg2 < 0.0) throw parameter_error("mf_interference: eg2 must be >= 0");
    double bracket = cfg.branch == RBranch::asymptotic
                         ? 1.0 + 1.0 / (cfg.alpha - 2.0)
                         : 1.0 + tail_term(cfg.radius, cfg.alpha);
    double lead = cfg.lambda_u * M_PI * cfg.radius;
    double denom = std::sqrt(static_cast<double>(cfg.n_antennas)) *
                   std::pow(cfg.lambda_b, cfg.alpha / 2.0);
    return {lead * lead / denom * bracket * p_hat * eg2, cfg.branch, p_hat};
}

double mean_pathloss_to_typical(const NetworkConfig& cfg) {
    cfg.validate();
    return cfg.lambda_u * M_PI * (1.0 + tail_term(cfg.radius, cfg.alpha));
}

double pathloss_disk_integral(double radius, double alpha) {
    if (alpha <= 2.0) throw parameter_error("pathloss_disk_integral: alpha must be > 2");
    if (radius <= 0.0) throw parameter_error("pathloss_disk_integral: radius must be > 0");
    if (radius <= 1.0) return M_PI * radius * radius;  // bounded law is 1 on the unit disk
    return M_PI * (1.0 + 2.0 * tail_term(radius, alpha));
}

double nearest_pathloss_mean(double lambda, double radius, double alpha) {
    if (alpha <= 2.0) throw parameter_error("nearest_pathloss_mean: alpha must be > 2");
    if (lambda < 0.0) throw parameter_error("nearest_pathloss_mean: lambda must be >= 0");
    if (radius <= 0.0) throw parameter_error("nearest_pathloss_mean: radius must be > 0");
    if (lambda == 0.0) return 0.0;
    double r1 = std::min(1.0, radius);
    // nearest-distance density 2 pi lambda r exp(-pi lambda r^2) on [0, R]
    double inside = -std::expm1(-M_PI * lambda * r1 * r1);
    if (radius <= 1.0) return inside;
    auto f = [&](double r) {
        return std::pow(r, -alpha) * 2.0 * M_PI * lambda * r *
               std::exp(-M_PI * lambda * r * r);
    };
    return inside + adaptive_simpson(f, 1.0, radius, 1e-12);
}

double expected_normalized_interference(const NetworkConfig& cfg, double p_hat, double eg2) {
    cfg.validate();
    if (cfg.lambda_b <= 0.0)
        throw parameter_error("expected_normalized_interference: lambda_b must be > 0");
    if (p_hat < 0.0) throw parameter_error("expected_normalized_interference: p_hat must be >= 0");
    if (eg2 < 0.0) throw parameter_error("expected_normalized_interference: eg2 must be >= 0");
    double pa = active_probability(cfg.lambda_b, cfg.lambda_u);
    double mass = cfg.lambda_b * pathloss_disk_integral(cfg.radius, cfg.alpha) -
                  nearest_pathloss_mean(cfg.lambda_b, cfg.radius, cfg.alpha);
    double denom = std::sqrt(static_cast<double>(cfg.n_antennas)) *
                   std::pow(cfg.lambda_b, cfg.alpha / 2.0);
    return pa * mass * p_hat * eg2 / denom;
}

UDNDiagnostics udn_condition_check(const NetworkConfig& cfg, double threshold) {
    cfg.validate();
    UDNDiagnostics d;
    double num = cfg.n_antennas * std::pow(cfg.lambda_b, cfg.alpha);
    double lu4 = std::pow(cfg.lambda_u, 4.0);
    double lur4 = std::pow(cfg.lambda_u * cfg.radius, 4.0);
    d.ratio_a0 = lur4 > 0.0 ? num / lur4 : std::numeric_limits<double>::infinity();
    d.ratio_a2 = lu4 > 0.0 ? num / lu4 : std::numeric_limits<double>::infinity();
    d.a0_satisfied = d.ratio_a0 >= threshold;
    return d;
}

double mf_rate(const NetworkConfig& cfg, const MFInterference& i_hat,
               const RicianMarginal& fading, double tx_power) {
    if (tx_power <= 0.0) throw parameter_error("mf_rate: tx_power must be > 0");
    double denom = normalized_noise(cfg) + i_hat.value;
    if (denom <= 0.0) throw parameter_error("mf_rate: sigma'^2 + I_hat must be > 0");
    double c1 = compute_c1(cfg.alpha, fading_log_moment(fading));
    return c1 + std::log(tx_power / denom);
}

EmpiricalMeasure empirical_mf_measure(const std::vector<NetworkSnapshot>& snapshots,
                                      const NetworkConfig& cfg, const RicianMarginal& fading,
                                      double tx_power, rng_t& rng) {
    cfg.validate();
    if (tx_power < 0.0) throw parameter_error("empirical_mf_measure: tx_power must be >= 0");
    constexpr int kBins = 64;
    EmpiricalMeasure out;
    out.bin_lo = 0.0;
    out.bin_hi = 2.0 * tx_power * (fading.nu * fading.nu + 2.0 * fading.s * fading.s + 1.0);
    out.histogram.assign(kBins, 0.0);
    std::vector<double> snap_means;
    std::vector<double> marks;
    for (const auto& snap : snapshots) {
        marks.clear();
        for (std::size_t i = 0; i < snap.bs_points.size(); ++i) {
            if (!snap.active[i]) continue;
            if (static_cast<std::ptrdiff_t>(i) == snap.serving_index) continue;
            double d = std::hypot(snap.bs_points[i].x, snap.bs_points[i].y);
            double g = sample_rician(fading, rng);
            marks.push_back(tx_power * g * g * path_loss(d, cfg.alpha));
        }
        if (marks.empty()) continue;
        double sum = 0.0;
        for (double v : marks) {
            sum += v;
            int b = static_cast<int>(static_cast<double>(kBins) * (v - out.bin_lo) /
                                     (out.bin_hi - out.bin_lo));
            out.histogram[std::min(kBins - 1, std::max(0, b))] += 1.0;
        }
        out.interferer_count += marks.size();
        snap_means.push_back(sum / static_cast<double>(marks.size()));
    }
    if (snap_means.empty())
        throw insufficient_data_error("empirical_mf_measure: no active interferer in any snapshot");
    out.snapshots_used = snap_means.size();
    double m = 0.0;
    for (double v : snap_means) m += v;
    m /= static_cast<double>(snap_means.size());
    out.mean = m;
    double var = 0.0;
    for (double v : snap_means) var += (v - m) * (v - m);
    if (snap_means.size() > 1)
        out.std_error = std::sqrt(var / (static_cast<double>(snap_means.size()) *
                                         (static_cast<double>(snap_means.size()) - 1.0)));
    return out;
}

double kantorovich_gap(const std::vector<double>& samples) {
    if (samples.empty()) throw insufficient_data_error("kantorovich_gap: empty sample list");
    double lo = samples[0], hi = samples[0];
    for (double v : samples) {
        if (v <= 0.0) throw parameter_error("kantorovich_gap: samples must be > 0");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return (lo + hi) * (lo + hi) / (4.0 * lo * hi);
}

}  // namespace udnmf
