#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "doctest.h"
#include "udnmf/errors.hpp"
#include "udnmf/experiment.hpp"

using namespace udnmf;
namespace fs = std::filesystem;

TEST_CASE("preset names round trip") {
    for (const char* name : {"fig1", "fig2", "fig3", "validate", "custom"}) {
        CHECK(preset_name(preset_from_name(name)) == name);
    }
    CHECK_THROWS_AS(preset_from_name("fig9"), parse_error);
}

TEST_CASE("preset parameter sets") {
    ExperimentSpec f1 = preset_spec(Preset::fig1);
    CHECK(f1.network.lambda_u == 0.001);
    CHECK(f1.network.n_antennas == 10);
    CHECK(f1.network.alpha == 4.0);
    CHECK(f1.network.radius == truncation_radius(4.0));
    CHECK(f1.network.radius == doctest::Approx(22.360679774997896).epsilon(1e-15));
    CHECK(f1.network.noise == 0.001);
    CHECK(f1.network.branch == RBranch::asymptotic);
    CHECK(f1.sim.trials == 10000);
    REQUIRE(f1.ratio_sweep.size() == 5);
    CHECK(f1.ratio_sweep.front() == 100.0);
    CHECK(f1.ratio_sweep[2] == 1000.0);
    CHECK(f1.ratio_sweep.back() == 10000.0);
    CHECK(f1.output_path == "fig1.csv");

    ExperimentSpec f2 = preset_spec(Preset::fig2);
    CHECK(f2.network.lambda_b == 10.0);
    CHECK(f2.network.lambda_u == 1.0);
    CHECK(f2.network.n_antennas == 1);
    CHECK(f2.network.radius == 1.0);
    CHECK(f2.network.noise == 2000.0);
    CHECK(f2.sim.trials == 1000);
    CHECK(f2.sim.dt == 0.05);
    CHECK(f2.sim.horizon == 20.0);
    CHECK(f2.sim.transient_cut == 5.0);

    ExperimentSpec f3 = preset_spec(Preset::fig3);
    CHECK(f3.antenna_sweep == std::vector<int>{1, 4, 16, 64});
    CHECK(f3.density_sweep == std::vector<double>{1.0, 3.0, 10.0, 30.0, 100.0});
    CHECK(f3.network.lambda_u == 1.0);
    CHECK(f3.network.noise == 0.001);
    CHECK(f3.network.radius == 10.0);

    ExperimentSpec va = preset_spec(Preset::validate);
    CHECK(va.network.lambda_b == 5.0);
    CHECK(va.network.lambda_u == 0.5);
    CHECK(va.sim.trials == 200);

    FadingParams unit{1.0, 1.0, 1.0};
    for (Preset p : {Preset::fig1, Preset::fig2, Preset::fig3, Preset::validate}) {
        CHECK(preset_spec(p).fading == unit);
    }
}

TEST_CASE("dump and parse are inverse on full configs") {
    for (Preset p : {Preset::fig1, Preset::fig2, Preset::fig3, Preset::validate}) {
        ExperimentSpec spec = preset_spec(p);
        ExperimentSpec back = parse_config_json(dump_config(spec));
        CHECK(back == spec);
        // a second round trip is textually stable
        CHECK(dump_config(back) == dump_config(spec));
    }
    // fully-specified custom config round trips too
    ExperimentSpec custom = preset_spec(Preset::fig2);
    custom.preset = Preset::custom;
    custom.sim.fading_time = 2.5;
    custom.output_path = "somewhere.csv";
    CHECK(parse_config_json(dump_config(custom)) == custom);
}

TEST_CASE("config parsing reports precise failures") {
    CHECK_THROWS_WITH_AS(parse_config_json(R"({"preset":"fig2","bogus":1})"),
                         "config: unknown key \"bogus\"", parse_error);

    try {
        parse_config_json("{}");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        std::string msg = e.what();
        for (const char* field : {"lambda_b", "lambda_u", "n_antennas", "alpha", "radius",
                                  "noise", "p_max", "p_c", "trials", "seed"}) {
            CHECK(msg.find(field) != std::string::npos);
        }
    }

    // invariant violations surface under the field's own name
    CHECK_THROWS_WITH_AS(parse_config_json(R"({"preset":"fig2","alpha":2.0})"),
                         "NetworkConfig: alpha > 2 required", parameter_error);
    CHECK_THROWS_AS(parse_config_json(R"({"preset":"fig2","eta":-1.0})"), parameter_error);

    CHECK_THROWS_AS(parse_config_json("{oops"), parse_error);
    CHECK_THROWS_AS(parse_config_json("[1,2]"), parse_error);
    CHECK_THROWS_AS(parse_config_json(R"({"preset":"fig1","ratio_sweep":[]})"), parse_error);
    CHECK_THROWS_AS(parse_config_json(R"({"preset":"fig1","branch":"round"})"), parse_error);
    CHECK_THROWS_AS(parse_config_json(R"({"preset":"fig2","trials":-5})"), parse_error);
    CHECK_THROWS_AS(parse_config_json(R"({"preset":"fig2","n_antennas":2.5})"), parse_error);
    CHECK_THROWS_AS(parse_config_json(R"({"preset":"fig2","fading_time":"soon"})"), parse_error);

    ExperimentSpec timed = parse_config_json(R"({"preset":"fig2","fading_time":"inf"})");
    CHECK(std::isinf(timed.sim.fading_time));
    CHECK(parse_config_json(R"({"preset":"fig2","fading_time":3.5})").sim.fading_time == 3.5);
}

TEST_CASE("config files load or fail with an io error") {
    CHECK_THROWS_AS(load_config("no_such_file_anywhere.json"), io_error);

    fs::path path = "exp_test_cfg.json";
    std::string text = dump_config(preset_spec(Preset::fig3));
    {
        std::ofstream out(path, std::ios::binary);
        out << text;
    }
    CHECK(load_config(path.string()) == parse_config_json(text));
    fs::remove(path);
}

TEST_CASE("single-point run: metrics, csv shape, atomic file output") {
    ExperimentSpec spec;
    spec.network.lambda_b = 5.0;
    spec.network.lambda_u = 0.5;
    spec.network.n_antennas = 4;
    spec.network.alpha = 4.0;
    spec.network.radius = 5.0;
    spec.network.noise = 1.0;
    spec.network.p_max = 1.0;
    spec.network.p_c = 1.0;
    spec.sim.trials = 300;
    spec.sim.master_seed = 99;
    spec.output_path = "exp_test_point.csv";

    ExperimentResult res = run_experiment(spec);
    for (const char* key : {"sim_rate", "analytic_rate", "rate_ratio", "sim_interference",
                            "exact_interference", "mf_interference", "p_star", "ee_star"}) {
        REQUIRE(res.metrics.count(key) == 1);
        CHECK(std::isfinite(res.metrics.at(key)));
    }
    CHECK(res.csv.rfind("# seed=99 version=0.1.0\n", 0) == 0);
    CHECK(res.csv.find('\r') == std::string::npos);
    CHECK(res.csv.back() == '\n');
    // header comment + column names + one data row
    CHECK(std::count(res.csv.begin(), res.csv.end(), '\n') == 3);
    CHECK(res.summary.find("single point") != std::string::npos);

    REQUIRE(fs::exists("exp_test_point.csv"));
    CHECK_FALSE(fs::exists("exp_test_point.csv.tmp"));
    std::ifstream in("exp_test_point.csv", std::ios::binary);
    std::string file_content((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
    CHECK(file_content == res.csv);
    fs::remove("exp_test_point.csv");
}

TEST_CASE("trajectory run: deterministic csv, worker-count independent") {
    ExperimentSpec spec = preset_spec(Preset::fig2);
    spec.sim.trials = 50;
    spec.sim.dt = 0.1;
    spec.sim.horizon = 2.0;
    spec.sim.transient_cut = 1.0;
    spec.output_path.clear();

    spec.sim.threads = 1;
    ExperimentResult a = run_experiment(spec);
    ExperimentResult b = run_experiment(spec);
    CHECK(a.csv == b.csv);
    spec.sim.threads = 2;
    ExperimentResult c = run_experiment(spec);
    CHECK(a.csv == c.csv);

    CHECK(a.metrics.at("steps") == 20.0);
    CHECK(std::count(a.csv.begin(), a.csv.end(), '\n') == 22);
    CHECK(a.metrics.at("ee_ratio_fixed") > 0.0);
    CHECK(std::isfinite(a.metrics.at("ee_ratio_full")));
    CHECK(a.metrics.at("mean_p_star") > 0.0);

    // a transient cut past the horizon leaves nothing to average
    ExperimentSpec cut = spec;
    cut.sim.transient_cut = 2.0;
    CHECK_THROWS_AS(run_experiment(cut), parameter_error);
}

TEST_CASE("grid run: monotone metrics and failure escalation") {
    ExperimentSpec spec = preset_spec(Preset::fig3);
    spec.antenna_sweep = {1, 4};
    spec.density_sweep = {5.0, 50.0};
    spec.output_path.clear();
    ExperimentResult res = run_experiment(spec);
    CHECK(res.metrics.at("cells") == 4.0);
    CHECK(res.metrics.at("monotone_in_antennas") == 1.0);
    CHECK(res.metrics.at("monotone_in_density") == 1.0);
    CHECK(res.metrics.at("min_ee") <= res.metrics.at("max_ee"));
    CHECK(std::count(res.csv.begin(), res.csv.end(), '\n') == 6);

    // a cell with a dead objective aborts the grid with a convergence error
    ExperimentSpec bad = spec;
    bad.network.lambda_u = 0.0;
    bad.network.noise = 0.0;
    CHECK_THROWS_AS(run_experiment(bad), convergence_error);
}

TEST_CASE("rate sweep without the analytic reference") {
    ExperimentSpec spec;
    spec.network.lambda_b = 1.0;  // overwritten per sweep point
    spec.network.lambda_u = 0.02;
    spec.network.n_antennas = 2;
    spec.network.alpha = 4.0;
    spec.network.radius = 5.0;
    spec.network.noise = 0.5;
    spec.network.p_max = 1.0;
    spec.network.p_c = 1.0;
    spec.sim.trials = 120;
    spec.sim.rate_metric = RateMetric::literal_caption;
    spec.ratio_sweep = {50.0};

    ExperimentResult res = run_experiment(spec);
    CHECK(res.metrics.at("points") == 1.0);
    CHECK(res.metrics.count("min_rate_ratio") == 0);
    CHECK(res.csv.find("nan") != std::string::npos);

    ExperimentSpec bad = spec;
    bad.ratio_sweep = {-1.0};
    CHECK_THROWS_AS(run_experiment(bad), parameter_error);
}

TEST_CASE("validation preset passes its own checks") {
    ExperimentSpec spec = preset_spec(Preset::validate);
    ExperimentResult res = run_experiment(spec);
    CHECK(res.metrics.at("all_passed") == 1.0);
    CHECK(res.metrics.at("checks_passed") == res.metrics.at("checks_total"));
    CHECK(res.metrics.at("checks_total") >= 8.0);
    CHECK(res.summary.find("PASS") != std::string::npos);
    CHECK(res.summary.find("FAIL") == std::string::npos);
    CHECK(res.csv.rfind("# seed=", 0) == 0);
    CHECK(res.csv.find("check,passed,observed,expected") != std::string::npos);
}
