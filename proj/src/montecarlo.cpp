#include "udnmf/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "udnmf/errors.hpp"
#include "udnmf/math_util.hpp"

namespace udnmf {

void SimConfig::validate() const {
    if (trials < 1) throw parameter_error("SimConfig: trials >= 1 required");
    if (!(dt > 0.0)) throw parameter_error("SimConfig: dt > 0 required");
    if (!(horizon >= dt)) throw parameter_error("SimConfig: horizon >= dt required");
    if (transient_cut < 0.0) throw parameter_error("SimConfig: transient_cut >= 0 required");
    if (!(fading_time >= 0.0)) throw parameter_error("SimConfig: fading_time >= 0 required");
    if (threads < 0) throw parameter_error("SimConfig: threads >= 0 required");
}

void run_trials(std::uint64_t trials, int threads, std::uint64_t master_seed,
                const std::function<void(std::uint64_t, rng_t&)>& body) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (static_cast<std::uint64_t>(workers) > trials) workers = static_cast<int>(trials);
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < trials; ++i) {
            rng_t rng = make_trial_rng(master_seed, i);
            body(i, rng);
        }
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (!stop.load(std::memory_order_relaxed)) {
            std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= trials) break;
            rng_t rng = make_trial_rng(master_seed, i);
            try {
                body(i, rng);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                stop.store(true, std::memory_order_relaxed);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

SinrSample evaluate_snapshot_sinr(const NetworkConfig& cfg, const NetworkSnapshot& snap,
                                  const RicianMarginal& fading, double tx_power,
                                  ServingLaw law, rng_t& rng) {
    cfg.validate();
    if (tx_power <= 0.0) throw parameter_error("evaluate_snapshot_sinr: tx_power must be > 0");
    SinrSample out;
    if (snap.serving_index < 0) {
        out.outage = true;
        return out;
    }
    double lb_pow = std::pow(cfg.lambda_b, cfg.alpha / 2.0);
    const Point2D& sv = snap.bs_points[static_cast<std::size_t>(snap.serving_index)];
    double d0 = std::hypot(sv.x, sv.y);
    double l0 = law == ServingLaw::powerlaw ? path_loss_powerlaw(d0, cfg.alpha)
                                            : path_loss(d0, cfg.alpha);
    double g0 = sample_rician(fading, rng);
    out.signal_norm = tx_power * l0 * g0 * g0 / lb_pow;
    double hit = 1.0 / std::sqrt(static_cast<double>(cfg.n_antennas));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < snap.bs_points.size(); ++i) {
        if (!snap.active[i] || static_cast<std::ptrdiff_t>(i) == snap.serving_index) continue;
        double g = sample_rician(fading, rng);
        double u = unif(rng);
        if (u >= hit) continue;  // beam miss
        double d = std::hypot(snap.bs_points[i].x, snap.bs_points[i].y);
        acc += tx_power * path_loss(d, cfg.alpha) * g * g;
    }
    out.interference_norm = acc / lb_pow;
    out.sinr = out.signal_norm / (normalized_noise(cfg) + out.interference_norm);
    return out;
}

SinrSample simulate_snapshot_sinr(const NetworkConfig& cfg, const FadingParams& fp,
                                  const SimConfig& sim, double tx_power, rng_t& rng) {
    cfg.validate();
    sim.validate();
    NetworkSnapshot snap =
        make_snapshot({cfg.lambda_b, cfg.lambda_u, cfg.radius}, sim.activity_mode, rng);
    RicianMarginal marg = fading_marginal(sim.fading_time, fp, MarginalMode::sde);
    return evaluate_snapshot_sinr(cfg, snap, marg, tx_power, sim.serving_law, rng);
}

namespace {

EstimateWithCI reduce_non_outage(const std::vector<double>& values,
                                 const std::vector<char>& outage) {
    EstimateWithCI est;
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (outage[i]) {
            ++est.outage_count;
            continue;
        }
        sum += values[i];
        ++est.trials_used;
    }
    if (est.trials_used == 0)
        throw insufficient_data_error("estimate: every trial was an outage");
    est.mean = sum / static_cast<double>(est.trials_used);
    double var = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (outage[i]) continue;
        double d = values[i] - est.mean;
        var += d * d;
    }
    if (est.trials_used > 1)
        est.std_error = std::sqrt(var / (static_cast<double>(est.trials_used) *
                                         (static_cast<double>(est.trials_used) - 1.0)));
    return est;
}

}  // namespace

EstimateWithCI estimate_average_rate(const NetworkConfig& cfg, const FadingParams& fp,
                                     const SimConfig& sim, double tx_power) {
    cfg.validate();
    sim.validate();
    if (sim.trials < 100)
        throw parameter_error("estimate_average_rate: at least 100 trials required");
    std::vector<double> values(sim.trials, 0.0);
    std::vector<char> outage(sim.trials, 0);
    run_trials(sim.trials, sim.threads, sim.master_seed, [&](std::uint64_t i, rng_t& rng) {
        SinrSample s = simulate_snapshot_sinr(cfg, fp, sim, tx_power, rng);
        if (s.outage) {
            outage[i] = 1;
            return;
        }
        values[i] = sim.rate_metric == RateMetric::log_rate ? std::log1p(s.sinr) : 1.0 + s.sinr;
    });
    return reduce_non_outage(values, outage);
}

EstimateWithCI estimate_normalized_interference(const NetworkConfig& cfg, const FadingParams& fp,
                                                const SimConfig& sim, double tx_power) {
    cfg.validate();
    sim.validate();
    std::vector<double> values(sim.trials, 0.0);
    std::vector<char> outage(sim.trials, 0);
    run_trials(sim.trials, sim.threads, sim.master_seed, [&](std::uint64_t i, rng_t& rng) {
        SinrSample s = simulate_snapshot_sinr(cfg, fp, sim, tx_power, rng);
        if (s.outage) {
            outage[i] = 1;
            return;
        }
        values[i] = s.interference_norm;
    });
    return reduce_non_outage(values, outage);
}

TrajectoryResult simulate_trajectory(const NetworkConfig& cfg, const FadingParams& fp,
                                     const SimConfig& sim) {
    cfg.validate();
    sim.validate();
    int steps = static_cast<int>(std::llround(sim.horizon / sim.dt));
    if (steps < 1) steps = 1;
    double noise = normalized_noise(cfg);
    double p_max = cfg.p_max, p_c = cfg.p_c;
    double p_fixed = p_max / 2.0;

    constexpr int kGrid = 1000;
    std::vector<double> grid_p(kGrid), grid_pc(kGrid);
    double p_lo = 1e-4 * p_max;
    double span = std::log(p_max / p_lo);
    for (int i = 0; i < kGrid; ++i) {
        grid_p[i] = i + 1 == kGrid ? p_max : p_lo * std::exp(span * i / (kGrid - 1));
        grid_pc[i] = p_c + grid_p[i];
    }

    // population-level quantities per step, shared by all trials
    std::vector<double> pop_ihat(steps), fixed_ihat(steps);
    std::vector<std::vector<double>> full_log(steps, std::vector<double>(kGrid));
    for (int k = 0; k < steps; ++k) {
        double t = (k + 1) * sim.dt;
        RicianMarginal marg = fading_marginal(t, fp, MarginalMode::paper);
        double eg2 = fading_second_moment(marg);
        double c1bar = compute_c1(cfg.alpha, fading_log_moment(marg));
        MFInterference i_ref = mf_interference(cfg, p_max, eg2);
        double coeff = i_ref.value / p_max;
        EEParams pop_params{cfg, c1bar, i_ref, t};
        try {
            EEResult pop = optimal_power_fixed_point(pop_params, p_max, p_max);
            pop_ihat[k] = pop.i_hat_at_solution;
        } catch (const convergence_error& e) {
            throw convergence_error("simulate_trajectory: population fixed point failed at t=" +
                                        std::to_string(t) + ": " + e.what(),
                                    e.residual_trace);
        }
        fixed_ihat[k] = coeff * p_fixed;
        for (int i = 0; i < kGrid; ++i)
            full_log[k][i] = std::log(grid_p[i] / (noise + coeff * grid_p[i]));
    }

    std::size_t n_tr = static_cast<std::size_t>(sim.trials);
    std::vector<std::vector<double>> slots(n_tr);
    run_trials(sim.trials, sim.threads, sim.master_seed, [&](std::uint64_t tr, rng_t& rng) {
        std::vector<double>& slot = slots[tr];
        slot.resize(4 * static_cast<std::size_t>(steps));
        FadingState g;
        for (int k = 0; k < steps; ++k) {
            g = evolve_fading(g, sim.dt, fp, rng);
            double c1r = compute_c1(cfg.alpha, std::log(std::max(g.norm(), 1e-12)));
            // proposed: typical's own first-order optimum against the population field
            double d_prop = noise + pop_ihat[k];
            double w = lambert_w0(p_c * std::exp(c1r - 1.0) / d_prop);
            double pw = p_c / w;
            if (pw > p_max) pw = p_max;
            double ee_prop = (c1r + std::log(pw / d_prop)) / (p_c + pw);
            double ee_fix = (c1r + std::log(p_fixed / (noise + fixed_ihat[k]))) / (p_c + p_fixed);
            const std::vector<double>& fl = full_log[k];
            double ee_full = (c1r + fl[0]) / grid_pc[0];
            for (int i = 1; i < kGrid; ++i)
                ee_full = std::max(ee_full, (c1r + fl[i]) / grid_pc[i]);
            std::size_t base = 4 * static_cast<std::size_t>(k);
            slot[base] = ee_prop;
            slot[base + 1] = ee_fix;
            slot[base + 2] = ee_full;
            slot[base + 3] = pw;
        }
    });

    TrajectoryResult out;
    out.times.resize(steps);
    out.ee_proposed.assign(steps, 0.0);
    out.ee_fixed.assign(steps, 0.0);
    out.ee_full_search.assign(steps, 0.0);
    out.power_trace.assign(steps, 0.0);
    for (int k = 0; k < steps; ++k) out.times[k] = (k + 1) * sim.dt;
    for (std::size_t tr = 0; tr < n_tr; ++tr) {  // ordered reduction
        const auto& slot = slots[tr];
        for (int k = 0; k < steps; ++k) {
            std::size_t base = 4 * static_cast<std::size_t>(k);
            out.ee_proposed[k] += slot[base];
            out.ee_fixed[k] += slot[base + 1];
            out.ee_full_search[k] += slot[base + 2];
            out.power_trace[k] += slot[base + 3];
        }
    }
    double inv = 1.0 / static_cast<double>(sim.trials);
    for (int k = 0; k < steps; ++k) {
        out.ee_proposed[k] *= inv;
        out.ee_fixed[k] *= inv;
        out.ee_full_search[k] *= inv;
        out.power_trace[k] *= inv;
    }
    return out;
}

std::vector<SweepCell> stationary_ee_sweep(const NetworkConfig& cfg_base, const FadingParams& fp,
                                           const std::vector<int>& n_list,
                                           const std::vector<double>& lambda_b_list) {
    if (n_list.empty() || lambda_b_list.empty())
        throw parameter_error("stationary_ee_sweep: sweep lists must be non-empty");
    RicianMarginal stat = fading_marginal(std::numeric_limits<double>::infinity(), fp,
                                          MarginalMode::paper);
    double eg2 = fading_second_moment(stat);
    double e_log_g = fading_log_moment(stat);
    std::vector<SweepCell> cells;
    cells.reserve(n_list.size() * lambda_b_list.size());
    for (int n : n_list) {
        for (double lb : lambda_b_list) {
            SweepCell cell;
            cell.n_antennas = n;
            cell.lambda_b = lb;
            try {
                NetworkConfig cfg = cfg_base;
                cfg.n_antennas = n;
                cfg.lambda_b = lb;
                cfg.validate();
                EEParams params{cfg, compute_c1(cfg.alpha, e_log_g),
                                mf_interference(cfg, cfg.p_max, eg2),
                                std::numeric_limits<double>::infinity()};
                EEResult res = optimal_power_fixed_point(params, cfg.p_max, cfg.p_max);
                cell.power = res.power;
                cell.ee_value = res.ee_value;
                cell.clamped = res.clamped;
                cell.iterations = res.iterations;
                cell.solved = true;
            } catch (const error&) {
                cell.solved = false;  // recorded, sweep continues
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

ActiveProbabilityCheck validate_active_probability(const DensityConfig& cfg,
                                                   std::uint64_t snapshots,
                                                   std::uint64_t master_seed, int threads) {
    if (cfg.lambda_b <= 0.0)
        throw parameter_error("validate_active_probability: lambda_b must be > 0");
    if (cfg.lambda_u < 0.0)
        throw parameter_error("validate_active_probability: lambda_u must be >= 0");
    if (cfg.radius <= 0.0)
        throw parameter_error("validate_active_probability: radius must be > 0");
    if (snapshots < 1)
        throw parameter_error("validate_active_probability: snapshots must be >= 1");
    ActiveProbabilityCheck out;
    out.analytical = active_probability(cfg.lambda_b, cfg.lambda_u);
    // pad outward so cells of the counted interior BSs are fully populated
    double margin = 4.0 / std::sqrt(cfg.lambda_b);
    double r_count2 = cfg.radius * cfg.radius;
    double r_user = cfg.radius + margin;
    double r_bs = cfg.radius + 2.0 * margin;
    std::vector<std::uint64_t> active_in(snapshots, 0), total_in(snapshots, 0);
    run_trials(snapshots, threads, master_seed, [&](std::uint64_t i, rng_t& rng) {
        std::vector<Point2D> bs = sample_ppp(cfg.lambda_b, r_bs, rng);
        std::vector<Point2D> users = sample_ppp(cfg.lambda_u, r_user, rng);
        std::vector<char> flags = compute_active_flags(bs, users);
        for (std::size_t j = 0; j < bs.size(); ++j) {
            if (bs[j].x * bs[j].x + bs[j].y * bs[j].y > r_count2) continue;
            ++total_in[i];
            if (flags[j]) ++active_in[i];
        }
    });
    std::uint64_t act = 0, tot = 0;
    for (std::uint64_t i = 0; i < snapshots; ++i) {
        act += active_in[i];
        tot += total_in[i];
    }
    if (tot == 0)
        throw insufficient_data_error("validate_active_probability: no BS fell in the window");
    out.empirical = static_cast<double>(act) / static_cast<double>(tot);
    out.relative_gap = out.analytical > 0.0
                           ? std::abs(out.empirical - out.analytical) / out.analytical
                           : (out.empirical == 0.0 ? 0.0
                                                   : std::numeric_limits<double>::infinity());
    return out;
}

}  // namespace udnmf
