#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "udnmf/ee.hpp"

namespace udnmf {

enum class RateMetric { log_rate, literal_caption };
enum class ServingLaw { powerlaw, bounded };

struct SimConfig {
    std::uint64_t trials = 1000;
    std::uint64_t master_seed = 12345;
    double dt = 0.05;
    double horizon = 20.0;
    ActivityMode activity_mode = ActivityMode::voronoi;
    RateMetric rate_metric = RateMetric::log_rate;
    ServingLaw serving_law = ServingLaw::powerlaw;
    double transient_cut = 5.0;
    // fading age of a one-shot snapshot; infinity = stationary
    double fading_time = std::numeric_limits<double>::infinity();
    int threads = 0;  // 0 = hardware concurrency
    void validate() const;
    bool operator==(const SimConfig&) const = default;
};

struct SinrSample {
    double sinr = 0.0;
    double signal_norm = 0.0;
    double interference_norm = 0.0;
    bool outage = false;
};

// Deterministic parallel trial runner: per-trial random streams derived from
// the master seed, results written to caller-owned per-trial slots, so the
// outcome is independent of the worker count.
void run_trials(std::uint64_t trials, int threads, std::uint64_t master_seed,
                const std::function<void(std::uint64_t, rng_t&)>& body);

// SINR of the typical user for one already-sampled snapshot. Fading magnitudes
// are drawn i.i.d. from the marginal; each active interferer lands in the beam
// with probability 1/sqrt(N) at gain N.
SinrSample evaluate_snapshot_sinr(const NetworkConfig& cfg, const NetworkSnapshot& snap,
                                  const RicianMarginal& fading, double tx_power,
                                  ServingLaw law, rng_t& rng);

// Sample geometry + activity + SINR in one go.
SinrSample simulate_snapshot_sinr(const NetworkConfig& cfg, const FadingParams& fp,
                                  const SimConfig& sim, double tx_power, rng_t& rng);

struct EstimateWithCI {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials_used = 0;
    std::uint64_t outage_count = 0;
};

// Mean rate over non-outage snapshots (log(1+SINR), or 1+SINR in literal mode).
EstimateWithCI estimate_average_rate(const NetworkConfig& cfg, const FadingParams& fp,
                                     const SimConfig& sim, double tx_power);

// Mean normalized interference over snapshots (outage snapshots excluded).
EstimateWithCI estimate_normalized_interference(const NetworkConfig& cfg, const FadingParams& fp,
                                                const SimConfig& sim, double tx_power);

struct TrajectoryResult {
    std::vector<double> times;
    std::vector<double> ee_proposed;
    std::vector<double> ee_fixed;
    std::vector<double> ee_full_search;
    std::vector<double> power_trace;  // proposed policy's transmit power
};

// Trial-averaged EE traces under the three policies: fixed-point power control
// re-solved each step, fixed p_max/2, and log-grid full search. The typical
// link's fading evolves by the exact transition from g(0) = 0; closed-form
// moments at each instant come from the printed time marginal.
TrajectoryResult simulate_trajectory(const NetworkConfig& cfg, const FadingParams& fp,
                                     const SimConfig& sim);

struct SweepCell {
    int n_antennas = 0;
    double lambda_b = 0.0;
    double power = 0.0;
    double ee_value = 0.0;
    bool clamped = false;
    int iterations = 0;
    bool solved = false;
};

// Stationary maximized EE over an antennas x density grid.
std::vector<SweepCell> stationary_ee_sweep(const NetworkConfig& cfg_base, const FadingParams& fp,
                                           const std::vector<int>& n_list,
                                           const std::vector<double>& lambda_b_list);

struct ActiveProbabilityCheck {
    double empirical = 0.0;
    double analytical = 0.0;
    double relative_gap = 0.0;
};

// Empirical BS active fraction against the closed form. Counting is confined
// to an interior disk and points are padded outward so border cells are fully
// populated (no edge bias).
ActiveProbabilityCheck validate_active_probability(const DensityConfig& cfg,
                                                   std::uint64_t snapshots,
                                                   std::uint64_t master_seed, int threads = 0);

}  // namespace udnmf
