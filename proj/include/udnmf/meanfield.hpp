#pragma once

#include <cstdint>
#include <vector>

#include "udnmf/channel.hpp"
#include "udnmf/geometry.hpp"

namespace udnmf {

enum class RBranch { finite, asymptotic };

struct NetworkConfig {
    double lambda_b = 1.0;
    double lambda_u = 1.0;
    int n_antennas = 1;
    double alpha = 4.0;
    double radius = 1.0;   // reception radius R
    double noise = 0.0;    // sigma^2
    double p_max = 1.0;
    double p_c = 1.0;
    RBranch branch = RBranch::finite;
    void validate() const;  // throws parameter_error naming the violated invariant
    bool operator==(const NetworkConfig&) const = default;
};

// Normalized aggregate interference with the branch and population power it
// was evaluated at. value is linear in p_hat; p_hat == 0 marks a frozen value.
struct MFInterference {
    double value = 0.0;
    RBranch branch = RBranch::finite;
    double p_hat = 0.0;
};

struct UDNDiagnostics {
    double ratio_a0 = 0.0;  // N lambda_b^alpha / (lambda_u R)^4
    double ratio_a2 = 0.0;  // N lambda_b^alpha / lambda_u^4
    bool a0_satisfied = false;
};

// sigma^2 / (N lambda_b^(alpha/2))
double normalized_noise(const NetworkConfig& cfg);

// Density-normalized mean-field interference closed form:
// (lambda_u pi R)^2 / (sqrt(N) lambda_b^(alpha/2)) * (1 + (1 - R^(2-alpha))/(alpha-2))
// * p_hat * eg2, with the bracket's R term dropped on the asymptotic branch.
MFInterference mf_interference(const NetworkConfig& cfg, double p_hat, double eg2);

// Per-interferer mean path-loss term: lambda_u pi (1 + (1 - R^(2-alpha))/(alpha-2)).
// Note: the true plane integral of min(1, r^-alpha) carries twice that tail term;
// see pathloss_disk_integral for the exact mass.
double mean_pathloss_to_typical(const NetworkConfig& cfg);

// Integral of min(1, r^-alpha) over the disk of given radius, unit density.
double pathloss_disk_integral(double radius, double alpha);

// E[min(1, d0^-alpha)] for d0 the nearest point of a PPP(lambda) within the
// disk (zero contribution when the disk is empty).
double nearest_pathloss_mean(double lambda, double radius, double alpha);

// Exact expectation of the simulator's normalized interference sample under
// thinning-mode activity: Campbell mass minus the serving-point hole, thinned
// by p_a, per unit fading power eg2 and interferer power p_hat.
double expected_normalized_interference(const NetworkConfig& cfg, double p_hat, double eg2);

UDNDiagnostics udn_condition_check(const NetworkConfig& cfg, double threshold = 100.0);

// High-SINR mean spectral rate c1 + log(P / (sigma'^2 + I_hat)).
double mf_rate(const NetworkConfig& cfg, const MFInterference& i_hat,
               const RicianMarginal& fading, double tx_power);

struct EmpiricalMeasure {
    double mean = 0.0;       // average interferer mark P * |g|^2 * l(d)
    double std_error = 0.0;  // over per-snapshot means
    std::uint64_t interferer_count = 0;
    std::uint64_t snapshots_used = 0;
    std::vector<double> histogram;  // mark distribution, bin_lo..bin_hi
    double bin_lo = 0.0;
    double bin_hi = 0.0;
};

// Empirical mean of the per-interferer mark over active non-serving BSs, with
// i.i.d. fading draws from the marginal and constant transmit power.
EmpiricalMeasure empirical_mf_measure(const std::vector<NetworkSnapshot>& snapshots,
                                      const NetworkConfig& cfg, const RicianMarginal& fading,
                                      double tx_power, rng_t& rng);

// Concentration bound factor (min+max)^2 / (4 min max) of positive samples.
double kantorovich_gap(const std::vector<double>& samples);

}  // namespace udnmf
