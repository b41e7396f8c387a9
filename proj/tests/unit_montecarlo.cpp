#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "support/stats.hpp"
#include "udnmf/errors.hpp"
#include "udnmf/math_util.hpp"
#include "udnmf/montecarlo.hpp"

using namespace udnmf;

namespace {

NetworkConfig base_cfg() {
    NetworkConfig cfg;
    cfg.lambda_b = 1.0;
    cfg.lambda_u = 0.0;
    cfg.n_antennas = 1;
    cfg.alpha = 4.0;
    cfg.radius = 5.0;
    cfg.noise = 1.0;
    cfg.p_max = 1.0;
    cfg.p_c = 1.0;
    return cfg;
}

NetworkSnapshot one_bs_snapshot(double d0) {
    NetworkSnapshot snap;
    snap.window_radius = 5.0;
    snap.bs_points = {{d0, 0.0}};
    snap.active = {1};
    snap.serving_index = 0;
    return snap;
}

}  // namespace

TEST_CASE("sim config validation") {
    SimConfig sim;
    CHECK_NOTHROW(sim.validate());
    sim.trials = 0;
    CHECK_THROWS_AS(sim.validate(), parameter_error);
    sim = SimConfig{};
    sim.dt = 0.0;
    CHECK_THROWS_AS(sim.validate(), parameter_error);
    sim = SimConfig{};
    sim.horizon = 0.01;  // below dt
    CHECK_THROWS_AS(sim.validate(), parameter_error);
    sim = SimConfig{};
    sim.transient_cut = -1.0;
    CHECK_THROWS_AS(sim.validate(), parameter_error);
    sim = SimConfig{};
    sim.fading_time = -0.5;
    CHECK_THROWS_AS(sim.validate(), parameter_error);
    sim = SimConfig{};
    sim.threads = -1;
    CHECK_THROWS_AS(sim.validate(), parameter_error);
}

TEST_CASE("trial runner: per-trial streams independent of worker count") {
    auto collect = [&](int threads) {
        std::vector<double> first(500, 0.0);
        run_trials(500, threads, 987654321u, [&](std::uint64_t i, rng_t& rng) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            first[i] = u(rng);
        });
        return first;
    };
    std::vector<double> serial = collect(1);
    CHECK(collect(3) == serial);
    CHECK(collect(8) == serial);

    // identical to constructing each trial stream by hand
    rng_t trial7 = make_trial_rng(987654321u, 7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CHECK(u(trial7) == serial[7]);

    // zero trials runs nothing
    run_trials(0, 4, 1, [&](std::uint64_t, rng_t&) { FAIL("body must not run"); });
}

TEST_CASE("trial runner propagates the first body exception") {
    for (int threads : {1, 3}) {
        CHECK_THROWS_AS(run_trials(64, threads, 5u,
                                   [&](std::uint64_t i, rng_t&) {
                                       if (i == 17) throw std::runtime_error("boom");
                                   }),
                        std::runtime_error);
    }
}

TEST_CASE("snapshot sinr on hand-built geometry") {
    NetworkConfig cfg = base_cfg();
    RicianMarginal point{1.0, 0.0};
    rng_t rng(1);

    // lone serving BS inside unit distance: SINR = N / sigma^2 exactly
    for (int n : {1, 4, 9}) {
        NetworkConfig c = cfg;
        c.n_antennas = n;
        SinrSample s = evaluate_snapshot_sinr(c, one_bs_snapshot(0.5), point, 1.0,
                                              ServingLaw::bounded, rng);
        CHECK_FALSE(s.outage);
        CHECK(s.interference_norm == 0.0);
        CHECK(s.sinr == doctest::Approx(static_cast<double>(n)).epsilon(1e-14));
    }

    // unbounded serving response amplifies short links
    SinrSample amp = evaluate_snapshot_sinr(cfg, one_bs_snapshot(0.5), point, 1.0,
                                            ServingLaw::powerlaw, rng);
    CHECK(amp.sinr == doctest::Approx(16.0).epsilon(1e-14));

    // empty window flags an outage
    NetworkSnapshot empty;
    empty.window_radius = 5.0;
    SinrSample out = evaluate_snapshot_sinr(cfg, empty, point, 1.0, ServingLaw::bounded, rng);
    CHECK(out.outage);
    CHECK(out.sinr == 0.0);

    // one active interferer at distance 2, single antenna: hit probability 1
    NetworkSnapshot two = one_bs_snapshot(0.5);
    two.bs_points.push_back({0.0, 2.0});
    two.active = {1, 1};
    SinrSample s2 = evaluate_snapshot_sinr(cfg, two, point, 1.0, ServingLaw::bounded, rng);
    CHECK(s2.interference_norm == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(s2.sinr == doctest::Approx(1.0 / (1.0 + 0.0625)).epsilon(1e-14));

    // inactive interferers contribute nothing
    two.active = {1, 0};
    SinrSample s3 = evaluate_snapshot_sinr(cfg, two, point, 1.0, ServingLaw::bounded, rng);
    CHECK(s3.interference_norm == 0.0);

    CHECK_THROWS_AS(
        evaluate_snapshot_sinr(cfg, two, point, 0.0, ServingLaw::bounded, rng),
        parameter_error);
}

TEST_CASE("beam hits at four antennas occur half the time") {
    NetworkConfig cfg = base_cfg();
    cfg.n_antennas = 4;
    NetworkSnapshot two = one_bs_snapshot(0.5);
    two.bs_points.push_back({0.0, 2.0});
    two.active = {1, 1};
    RicianMarginal point{1.0, 0.0};
    rng_t rng(99);
    const int n = 20000;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i)
        vals[i] = evaluate_snapshot_sinr(cfg, two, point, 1.0, ServingLaw::bounded, rng)
                      .interference_norm;
    auto ms = testsupport::summarize(vals);
    CHECK(std::abs(ms.mean - 0.03125) < 4.0 * std::sqrt(ms.variance / n));
}

TEST_CASE("sampled snapshots with no user load carry zero interference") {
    NetworkConfig cfg = base_cfg();
    cfg.lambda_b = 3.0;
    SimConfig sim;
    sim.activity_mode = ActivityMode::thinning;
    FadingParams fp{1.0, 1.0, 1.0};
    rng_t rng(7);
    int covered = 0;
    for (int i = 0; i < 300; ++i) {
        SinrSample s = simulate_snapshot_sinr(cfg, fp, sim, 1.0, rng);
        if (s.outage) continue;
        ++covered;
        CHECK(s.interference_norm == 0.0);
        CHECK(s.sinr > 0.0);
    }
    CHECK(covered > 250);
}

TEST_CASE("average rate: degenerate configuration is exact") {
    // every covered link sits inside unit distance with frozen unit fading,
    // so the rate is the same number in every trial
    NetworkConfig cfg = base_cfg();
    cfg.lambda_b = 10.0;
    cfg.radius = 0.9;
    cfg.n_antennas = 4;
    cfg.noise = 0.5;
    FadingParams still{1.0, 0.0, 0.0};
    SimConfig sim;
    sim.trials = 2000;
    sim.activity_mode = ActivityMode::thinning;
    sim.serving_law = ServingLaw::bounded;
    sim.threads = 1;

    EstimateWithCI est = estimate_average_rate(cfg, still, sim, 1.0);
    CHECK(est.mean == doctest::Approx(std::log1p(8.0)).epsilon(1e-13));
    CHECK(est.std_error < 1e-12);  // identical samples, only summation rounding left
    CHECK(est.trials_used + est.outage_count == sim.trials);

    SimConfig lit = sim;
    lit.rate_metric = RateMetric::literal_caption;
    CHECK(estimate_average_rate(cfg, still, lit, 1.0).mean ==
          doctest::Approx(9.0).epsilon(1e-13));

    SimConfig few = sim;
    few.trials = 99;
    CHECK_THROWS_AS(estimate_average_rate(cfg, still, few, 1.0), parameter_error);
}

TEST_CASE("average rate: determinism and sampling error behave") {
    NetworkConfig cfg = base_cfg();
    cfg.lambda_b = 2.0;
    cfg.lambda_u = 1.0;
    cfg.n_antennas = 4;
    FadingParams fp{1.0, 1.0, 1.0};
    SimConfig sim;
    sim.trials = 3000;
    sim.master_seed = 2024;

    sim.threads = 1;
    EstimateWithCI a = estimate_average_rate(cfg, fp, sim, 0.7);
    sim.threads = 3;
    EstimateWithCI b = estimate_average_rate(cfg, fp, sim, 0.7);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.outage_count == b.outage_count);
    CHECK(a.std_error > 0.0);

    SimConfig other = sim;
    other.master_seed = 2025;
    EstimateWithCI c = estimate_average_rate(cfg, fp, other, 0.7);
    CHECK(c.mean != a.mean);
    // two independent estimates agree within combined error bars
    CHECK(std::abs(a.mean - c.mean) <
          4.0 * std::sqrt(a.std_error * a.std_error + c.std_error * c.std_error));
}

TEST_CASE("outage fraction follows the coverage law") {
    NetworkConfig cfg = base_cfg();
    cfg.lambda_b = 0.1;
    cfg.radius = 1.0;
    FadingParams fp{1.0, 1.0, 1.0};
    SimConfig sim;
    sim.trials = 10000;
    sim.master_seed = 31;
    EstimateWithCI est = estimate_average_rate(cfg, fp, sim, 1.0);
    double miss = 1.0 - coverage_probability({cfg.lambda_b, cfg.lambda_u, cfg.radius});
    double frac = static_cast<double>(est.outage_count) / static_cast<double>(sim.trials);
    double se = std::sqrt(miss * (1.0 - miss) / static_cast<double>(sim.trials));
    CHECK(std::abs(frac - miss) < 3.0 * se);
}

TEST_CASE("sampled interference matches the exact thinned mean") {
    NetworkConfig cfg = base_cfg();
    cfg.lambda_b = 5.0;
    cfg.lambda_u = 2.0;
    cfg.n_antennas = 4;
    cfg.radius = 10.0;
    FadingParams fp{1.0, 1.0, 1.0};
    double eg2 = fading_second_moment(
        fading_marginal(std::numeric_limits<double>::infinity(), fp, MarginalMode::sde));
    CHECK(eg2 == doctest::Approx(4.0).epsilon(1e-12));

    SimConfig sim;
    sim.trials = 4000;
    sim.master_seed = 606;
    sim.activity_mode = ActivityMode::thinning;
    EstimateWithCI mc = estimate_normalized_interference(cfg, fp, sim, 1.0);
    double exact = expected_normalized_interference(cfg, 1.0, eg2);
    CHECK(std::abs(mc.mean - exact) < 3.0 * mc.std_error);

    // unlike the rate estimator, small pilot runs are allowed here
    SimConfig tiny = sim;
    tiny.trials = 10;
    CHECK_NOTHROW(estimate_normalized_interference(cfg, fp, tiny, 1.0));
}

TEST_CASE("trajectory traces: shape, determinism, settling") {
    NetworkConfig cfg = base_cfg();
    cfg.lambda_b = 10.0;
    cfg.lambda_u = 1.0;
    cfg.n_antennas = 4;
    cfg.noise = 0.5;
    FadingParams fp{1.0, 1.0, 1.0};
    SimConfig sim;
    sim.trials = 40;
    sim.dt = 0.25;
    sim.horizon = 3.0;
    sim.master_seed = 11;

    sim.threads = 1;
    TrajectoryResult tr = simulate_trajectory(cfg, fp, sim);
    REQUIRE(tr.times.size() == 12);
    CHECK(tr.times.front() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(tr.times.back() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(tr.ee_proposed.size() == 12);
    CHECK(tr.ee_fixed.size() == 12);
    CHECK(tr.ee_full_search.size() == 12);
    CHECK(tr.power_trace.size() == 12);
    for (double p : tr.power_trace) {
        CHECK(p > 0.0);
        CHECK(p <= cfg.p_max);
    }
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        CHECK(std::isfinite(tr.ee_proposed[k]));
        CHECK(std::isfinite(tr.ee_fixed[k]));
        CHECK(std::isfinite(tr.ee_full_search[k]));
    }

    sim.threads = 2;
    TrajectoryResult tr2 = simulate_trajectory(cfg, fp, sim);
    CHECK(tr2.ee_proposed == tr.ee_proposed);
    CHECK(tr2.ee_fixed == tr.ee_fixed);
    CHECK(tr2.ee_full_search == tr.ee_full_search);
    CHECK(tr2.power_trace == tr.power_trace);

    // frozen fading: the whole trace is deterministic and settles
    FadingParams still{1.0, 0.0, 0.0};
    SimConfig long_run = sim;
    long_run.trials = 1;
    long_run.dt = 0.5;
    long_run.horizon = 30.0;
    TrajectoryResult st = simulate_trajectory(cfg, still, long_run);
    std::size_t last = st.times.size() - 1;
    CHECK(std::abs(st.ee_proposed[last] - st.ee_proposed[last - 2]) <
          1e-6 * std::abs(st.ee_proposed[last]));
}

TEST_CASE("stationary sweep mirrors the single-cell solver and records failures") {
    NetworkConfig cfg = base_cfg();
    cfg.lambda_u = 1.0;
    cfg.noise = 1e-3;
    FadingParams fp{1.0, 1.0, 1.0};

    std::vector<SweepCell> one = stationary_ee_sweep(cfg, fp, {4}, {10.0});
    REQUIRE(one.size() == 1);
    CHECK(one[0].solved);
    CHECK(one[0].n_antennas == 4);
    CHECK(one[0].lambda_b == 10.0);

    NetworkConfig cell_cfg = cfg;
    cell_cfg.n_antennas = 4;
    cell_cfg.lambda_b = 10.0;
    RicianMarginal stat = fading_marginal(std::numeric_limits<double>::infinity(), fp,
                                          MarginalMode::paper);
    EEParams params{cell_cfg, compute_c1(cfg.alpha, fading_log_moment(stat)),
                    mf_interference(cell_cfg, cfg.p_max, fading_second_moment(stat)),
                    std::numeric_limits<double>::infinity()};
    EEResult direct = optimal_power_fixed_point(params, cfg.p_max, cfg.p_max);
    CHECK(one[0].power == direct.power);
    CHECK(one[0].ee_value == direct.ee_value);
    CHECK(one[0].clamped == direct.clamped);
    CHECK(one[0].iterations == direct.iterations);

    // row-major ordering over the two sweep axes
    std::vector<SweepCell> grid = stationary_ee_sweep(cfg, fp, {1, 4}, {1.0, 3.0});
    REQUIRE(grid.size() == 4);
    CHECK(grid[0].n_antennas == 1);
    CHECK(grid[0].lambda_b == 1.0);
    CHECK(grid[1].n_antennas == 1);
    CHECK(grid[1].lambda_b == 3.0);
    CHECK(grid[3].n_antennas == 4);
    CHECK(grid[3].lambda_b == 3.0);

    // an invalid cell is recorded, the rest of the sweep continues
    std::vector<SweepCell> mixed = stationary_ee_sweep(cfg, fp, {1}, {0.0, 5.0});
    REQUIRE(mixed.size() == 2);
    CHECK_FALSE(mixed[0].solved);
    CHECK(mixed[1].solved);

    // a dead objective (no noise, no interference) is a recorded failure too
    NetworkConfig dead = cfg;
    dead.lambda_u = 0.0;
    dead.noise = 0.0;
    std::vector<SweepCell> dd = stationary_ee_sweep(dead, fp, {1}, {1.0});
    REQUIRE(dd.size() == 1);
    CHECK_FALSE(dd[0].solved);

    CHECK_THROWS_AS(stationary_ee_sweep(cfg, fp, {}, {1.0}), parameter_error);
    CHECK_THROWS_AS(stationary_ee_sweep(cfg, fp, {1}, {}), parameter_error);
}

TEST_CASE("empirical active fraction validator") {
    ActiveProbabilityCheck chk = validate_active_probability({3.0, 0.3, 8.0}, 800, 5150, 1);
    CHECK(chk.analytical == doctest::Approx(active_probability(3.0, 0.3)).epsilon(1e-15));
    CHECK(chk.relative_gap ==
          doctest::Approx(std::abs(chk.empirical - chk.analytical) / chk.analytical)
              .epsilon(1e-12));
    CHECK(chk.relative_gap < 0.03);

    CHECK_THROWS_AS(validate_active_probability({0.0, 1.0, 5.0}, 10, 1), parameter_error);
    CHECK_THROWS_AS(validate_active_probability({1.0, 1.0, 5.0}, 0, 1), parameter_error);
}
