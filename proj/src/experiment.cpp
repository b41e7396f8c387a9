#include "udnmf/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "udnmf/errors.hpp"
#include "udnmf/math_util.hpp"

namespace udnmf {

namespace {

using njson = nlohmann::ordered_json;

std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

const char* branch_name(RBranch b) { return b == RBranch::finite ? "finite" : "asymptotic"; }
const char* activity_name(ActivityMode m) {
    return m == ActivityMode::voronoi ? "voronoi" : "thinning";
}
const char* metric_name(RateMetric m) { return m == RateMetric::log_rate ? "log" : "literal"; }
const char* law_name(ServingLaw l) { return l == ServingLaw::powerlaw ? "powerlaw" : "bounded"; }

RBranch branch_from_name(const std::string& s) {
    if (s == "finite") return RBranch::finite;
    if (s == "asymptotic") return RBranch::asymptotic;
    throw parse_error("config field branch: expected finite|asymptotic, got \"" + s + "\"");
}

ActivityMode activity_from_name(const std::string& s) {
    if (s == "voronoi") return ActivityMode::voronoi;
    if (s == "thinning") return ActivityMode::thinning;
    throw parse_error("config field activity_mode: expected voronoi|thinning, got \"" + s + "\"");
}

RateMetric metric_from_name(const std::string& s) {
    if (s == "log") return RateMetric::log_rate;
    if (s == "literal") return RateMetric::literal_caption;
    throw parse_error("config field rate_metric: expected log|literal, got \"" + s + "\"");
}

ServingLaw law_from_name(const std::string& s) {
    if (s == "powerlaw") return ServingLaw::powerlaw;
    if (s == "bounded") return ServingLaw::bounded;
    throw parse_error("config field serving_law: expected powerlaw|bounded, got \"" + s + "\"");
}

double get_num(const njson& v, const std::string& key) {
    if (!v.is_number()) throw parse_error("config field " + key + ": expected a number");
    return v.get<double>();
}

int get_int(const njson& v, const std::string& key) {
    if (!v.is_number_integer())
        throw parse_error("config field " + key + ": expected an integer");
    return v.get<int>();
}

std::uint64_t get_u64(const njson& v, const std::string& key) {
    if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)))
        throw parse_error("config field " + key + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string get_str(const njson& v, const std::string& key) {
    if (!v.is_string()) throw parse_error("config field " + key + ": expected a string");
    return v.get<std::string>();
}

std::vector<double> get_num_array(const njson& v, const std::string& key) {
    if (!v.is_array() || v.empty())
        throw parse_error("config field " + key + ": expected a non-empty array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(get_num(e, key));
    return out;
}

std::vector<int> get_int_array(const njson& v, const std::string& key) {
    if (!v.is_array() || v.empty())
        throw parse_error("config field " + key + ": expected a non-empty array of integers");
    std::vector<int> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(get_int(e, key));
    return out;
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw io_error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw io_error("rename to " + target.string() + " failed: " + ec.message());
    }
}

std::string csv_header(const ExperimentSpec& spec, const char* columns) {
    std::string s = "# seed=" + std::to_string(spec.sim.master_seed) + " version=" + kVersion + "\n";
    s += columns;
    s += "\n";
    return s;
}

ExperimentResult run_rate_sweep(const ExperimentSpec& spec) {
    ExperimentResult res;
    res.csv = csv_header(spec, "lambda_b,density_ratio,sim_rate,sim_se,analytic_rate,sim_over_analytic");
    bool analytic = spec.sim.rate_metric == RateMetric::log_rate;
    double min_ratio = std::numeric_limits<double>::infinity();
    double min_ratio_udn = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spec.ratio_sweep.size(); ++i) {
        double ratio = spec.ratio_sweep[i];
        if (!(ratio > 0.0)) throw parameter_error("ratio_sweep entries must be > 0");
        NetworkConfig cfg = spec.network;
        cfg.lambda_b = ratio * cfg.lambda_u;
        cfg.validate();
        SimConfig sim = spec.sim;
        sim.master_seed = spec.sim.master_seed + 1000003ull * static_cast<std::uint64_t>(i);
        EstimateWithCI est = estimate_average_rate(cfg, spec.fading, sim, cfg.p_max);
        double ref = std::numeric_limits<double>::quiet_NaN();
        double sa = std::numeric_limits<double>::quiet_NaN();
        if (analytic) {
            RicianMarginal marg = fading_marginal(sim.fading_time, spec.fading, MarginalMode::paper);
            MFInterference ih = mf_interference(cfg, cfg.p_max, fading_second_moment(marg));
            ref = mf_rate(cfg, ih, marg, cfg.p_max);
            sa = est.mean / ref;
            min_ratio = std::min(min_ratio, sa);
            if (ratio >= 1000.0) min_ratio_udn = std::min(min_ratio_udn, sa);
        }
        res.csv += fmt_num(cfg.lambda_b) + "," + fmt_num(ratio) + "," + fmt_num(est.mean) + "," +
                   fmt_num(est.std_error) + "," + fmt_num(ref) + "," + fmt_num(sa) + "\n";
    }
    res.metrics["points"] = static_cast<double>(spec.ratio_sweep.size());
    char buf[200];
    if (analytic) {
        res.metrics["min_rate_ratio"] = min_ratio;
        if (std::isfinite(min_ratio_udn)) res.metrics["min_rate_ratio_udn"] = min_ratio_udn;
        std::snprintf(buf, sizeof(buf),
                      "rate sweep: %zu densities, sim/analytic min %.4f, min at ratio>=1e3 %.4f",
                      spec.ratio_sweep.size(), min_ratio,
                      std::isfinite(min_ratio_udn) ? min_ratio_udn : min_ratio);
    } else {
        std::snprintf(buf, sizeof(buf), "rate sweep: %zu densities (literal metric, no analytic reference)",
                      spec.ratio_sweep.size());
    }
    res.summary = buf;
    return res;
}

ExperimentResult run_trajectory(const ExperimentSpec& spec) {
    TrajectoryResult tr = simulate_trajectory(spec.network, spec.fading, spec.sim);
    ExperimentResult res;
    res.csv = csv_header(spec, "t,ee_proposed,ee_fixed,ee_full_search,p_star");
    double sp = 0.0, sf = 0.0, ss = 0.0, spw = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        res.csv += fmt_num(tr.times[k]) + "," + fmt_num(tr.ee_proposed[k]) + "," +
                   fmt_num(tr.ee_fixed[k]) + "," + fmt_num(tr.ee_full_search[k]) + "," +
                   fmt_num(tr.power_trace[k]) + "\n";
        if (tr.times[k] <= spec.sim.transient_cut) continue;
        sp += tr.ee_proposed[k];
        sf += tr.ee_fixed[k];
        ss += tr.ee_full_search[k];
        spw += tr.power_trace[k];
        ++used;
    }
    if (used == 0)
        throw parameter_error("trajectory: transient_cut leaves no post-transient samples");
    double n = static_cast<double>(used);
    double mp = sp / n, mf = sf / n, ms = ss / n, mw = spw / n;
    res.metrics["ee_ratio_fixed"] = mp / mf;
    res.metrics["ee_ratio_full"] = mp / ms;
    res.metrics["mean_ee_proposed"] = mp;
    res.metrics["mean_ee_fixed"] = mf;
    res.metrics["mean_ee_full_search"] = ms;
    res.metrics["mean_p_star"] = mw;
    res.metrics["steps"] = static_cast<double>(tr.times.size());
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "EE trajectory: proposed/fixed %.4f, proposed/full-search %.4f (time average, t > %g)",
                  mp / mf, mp / ms, spec.sim.transient_cut);
    res.summary = buf;
    return res;
}

ExperimentResult run_ee_grid(const ExperimentSpec& spec) {
    std::vector<int> ns = spec.antenna_sweep;
    if (ns.empty()) ns.push_back(spec.network.n_antennas);
    std::vector<double> ds = spec.density_sweep;
    if (ds.empty()) ds.push_back(spec.network.lambda_b);
    std::vector<SweepCell> cells = stationary_ee_sweep(spec.network, spec.fading, ns, ds);
    std::size_t failed = 0;
    for (const auto& c : cells)
        if (!c.solved) ++failed;
    if (failed > 0)
        throw convergence_error("ee grid: " + std::to_string(failed) + " of " +
                                    std::to_string(cells.size()) + " cells failed to converge",
                                {});
    ExperimentResult res;
    res.csv = csv_header(spec, "n_antennas,lambda_b,p_star,ee,clamped,iterations");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& c : cells) {
        res.csv += std::to_string(c.n_antennas) + "," + fmt_num(c.lambda_b) + "," +
                   fmt_num(c.power) + "," + fmt_num(c.ee_value) + "," +
                   (c.clamped ? "1" : "0") + "," + std::to_string(c.iterations) + "\n";
        lo = std::min(lo, c.ee_value);
        hi = std::max(hi, c.ee_value);
    }
    // pairwise grid monotonicity along both axes (antennas outer, density inner)
    std::size_t nd = ds.size();
    bool mono_n = true, mono_d = true;
    constexpr double eps = 1e-12;
    for (std::size_t i = 0; i + 1 < ns.size(); ++i)
        for (std::size_t j = 0; j < nd; ++j)
            if (cells[(i + 1) * nd + j].ee_value + eps < cells[i * nd + j].ee_value) mono_n = false;
    for (std::size_t i = 0; i < ns.size(); ++i)
        for (std::size_t j = 0; j + 1 < nd; ++j)
            if (cells[i * nd + j + 1].ee_value + eps < cells[i * nd + j].ee_value) mono_d = false;
    res.metrics["monotone_in_antennas"] = mono_n ? 1.0 : 0.0;
    res.metrics["monotone_in_density"] = mono_d ? 1.0 : 0.0;
    res.metrics["min_ee"] = lo;
    res.metrics["max_ee"] = hi;
    res.metrics["cells"] = static_cast<double>(cells.size());
    char buf[220];
    std::snprintf(buf, sizeof(buf),
                  "stationary EE grid %zux%zu: monotone in antennas %s, in density %s, EE range [%.4g, %.4g]",
                  ns.size(), nd, mono_n ? "yes" : "NO", mono_d ? "yes" : "NO", lo, hi);
    res.summary = buf;
    return res;
}

ExperimentResult run_single_point(const ExperimentSpec& spec) {
    const NetworkConfig& cfg = spec.network;
    RicianMarginal marg_p = fading_marginal(spec.sim.fading_time, spec.fading, MarginalMode::paper);
    RicianMarginal marg_s = fading_marginal(spec.sim.fading_time, spec.fading, MarginalMode::sde);
    EstimateWithCI rate = estimate_average_rate(cfg, spec.fading, spec.sim, cfg.p_max);
    EstimateWithCI intf = estimate_normalized_interference(cfg, spec.fading, spec.sim, cfg.p_max);
    double exact = expected_normalized_interference(cfg, cfg.p_max, fading_second_moment(marg_s));
    MFInterference printed = mf_interference(cfg, cfg.p_max, fading_second_moment(marg_p));
    double analytic = std::numeric_limits<double>::quiet_NaN();
    if (spec.sim.rate_metric == RateMetric::log_rate)
        analytic = mf_rate(cfg, printed, marg_p, cfg.p_max);
    EEParams params{cfg, compute_c1(cfg.alpha, fading_log_moment(marg_p)), printed,
                    spec.sim.fading_time};
    EEResult fp = optimal_power_fixed_point(params, cfg.p_max, cfg.p_max);

    ExperimentResult res;
    res.csv = csv_header(spec,
                         "lambda_b,lambda_u,n_antennas,alpha,sim_rate,sim_rate_se,analytic_rate,"
                         "sim_interference,sim_interference_se,exact_interference,mf_interference,"
                         "p_star,ee_star");
    res.csv += fmt_num(cfg.lambda_b) + "," + fmt_num(cfg.lambda_u) + "," +
               std::to_string(cfg.n_antennas) + "," + fmt_num(cfg.alpha) + "," +
               fmt_num(rate.mean) + "," + fmt_num(rate.std_error) + "," + fmt_num(analytic) + "," +
               fmt_num(intf.mean) + "," + fmt_num(intf.std_error) + "," + fmt_num(exact) + "," +
               fmt_num(printed.value) + "," + fmt_num(fp.power) + "," + fmt_num(fp.ee_value) + "\n";
    res.metrics["sim_rate"] = rate.mean;
    res.metrics["sim_rate_se"] = rate.std_error;
    if (std::isfinite(analytic)) {
        res.metrics["analytic_rate"] = analytic;
        res.metrics["rate_ratio"] = rate.mean / analytic;
    }
    res.metrics["sim_interference"] = intf.mean;
    res.metrics["sim_interference_se"] = intf.std_error;
    res.metrics["exact_interference"] = exact;
    res.metrics["mf_interference"] = printed.value;
    res.metrics["p_star"] = fp.power;
    res.metrics["ee_star"] = fp.ee_value;
    res.metrics["iterations"] = fp.iterations;
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "single point: rate %.4f (analytic %.4f), interference %.4g (exact %.4g), "
                  "P* %.4g, EE %.4g",
                  rate.mean, analytic, intf.mean, exact, fp.power, fp.ee_value);
    res.summary = buf;
    return res;
}

struct CheckRow {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double expected = 0.0;
};

ExperimentResult run_validation(const ExperimentSpec& spec) {
    std::vector<CheckRow> checks;
    std::uint64_t seed = spec.sim.master_seed;

    {
        double w1 = lambert_w0(1.0);
        double ref = 0.5671432904097838;
        checks.push_back({"lambert_w_reference", std::abs(w1 - ref) <= 1e-10, w1, ref});
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            double y = std::pow(10.0, -8.0 + 14.0 * i / 99.0);
            double w = lambert_w0(y);
            worst = std::max(worst, std::abs(w * std::exp(w) - y) / std::max(1.0, y));
        }
        checks.push_back({"lambert_w_identity_residual", worst <= 1e-12, worst, 1e-12});
    }
    {
        DensityConfig dc{0.1, 0.1, 1.0};
        std::uint64_t snaps = 4000;
        std::vector<char> outage(snaps, 0);
        run_trials(snaps, spec.sim.threads, seed + 101, [&](std::uint64_t i, rng_t& rng) {
            NetworkSnapshot s = make_snapshot(dc, ActivityMode::voronoi, rng);
            outage[i] = s.serving_index < 0;
        });
        std::uint64_t cnt = 0;
        for (char f : outage) cnt += f;
        double emp = static_cast<double>(cnt) / static_cast<double>(snaps);
        double ref = 1.0 - coverage_probability(dc);
        double se = std::sqrt(ref * (1.0 - ref) / static_cast<double>(snaps));
        checks.push_back({"outage_vs_coverage", std::abs(emp - ref) <= 3.5 * se, emp, ref});
    }
    {
        ActiveProbabilityCheck ap = validate_active_probability({5.0, 0.5, 10.0}, spec.sim.trials,
                                                                seed + 202, spec.sim.threads);
        checks.push_back({"active_probability_gap", ap.relative_gap <= 0.05, ap.empirical,
                          ap.analytical});
    }
    {
        double v = fading_log_moment({0.0, 1.0});
        double ref = 0.5 * (std::log(2.0) - euler_gamma);
        checks.push_back({"rayleigh_log_moment", std::abs(v - ref) <= 1e-8, v, ref});
    }
    {
        RicianMarginal m{1.2, 0.7};
        double s2 = m.s * m.s;
        auto f = [&](double r) {
            if (r <= 0.0) return 0.0;
            double logpdf = std::log(r / s2) - (r * r + m.nu * m.nu) / (2.0 * s2) +
                            log_bessel_i0(r * m.nu / s2);
            return r * r * std::exp(logpdf);
        };
        double q = adaptive_simpson(f, 0.0, m.nu + 13.0 * m.s, 1e-10);
        double ref = fading_second_moment(m);
        checks.push_back({"rician_second_moment_quadrature", std::abs(q - ref) <= 1e-6, q, ref});
    }
    {
        FadingParams fp{1.0, 1.0, 1.0};
        double r1 = fpk_residual_check(fp, MarginalMode::sde, 1.0, 201);
        double r2 = fpk_residual_check(fp, MarginalMode::sde, 1.0, 401);
        double ratio = r2 > 0.0 ? r1 / r2 : 0.0;
        checks.push_back({"fpk_residual_refinement", ratio >= 3.0 && ratio <= 5.0, ratio, 4.0});
    }
    {
        NetworkConfig cfg;
        cfg.lambda_b = 10.0;
        cfg.lambda_u = 1.0;
        cfg.n_antennas = 1;
        cfg.alpha = 4.0;
        cfg.radius = 10.0;
        double v = mf_interference(cfg, 0.5, 4.0).value;
        double ref = 29.510117159257182;
        checks.push_back({"mf_interference_reference", std::abs(v / ref - 1.0) <= 1e-9, v, ref});
    }
    {
        ExperimentSpec f2 = preset_spec(Preset::fig2);
        double inf = std::numeric_limits<double>::infinity();
        RicianMarginal st = fading_marginal(inf, f2.fading, MarginalMode::paper);
        EEParams params{f2.network, compute_c1(f2.network.alpha, fading_log_moment(st)),
                        mf_interference(f2.network, f2.network.p_max, fading_second_moment(st)),
                        inf};
        CheckRow row{"fixed_point_convergence", false, 0.0, 1.0};
        try {
            EEResult r = optimal_power_fixed_point(params, 0.01, 0.01);
            row.passed = r.iterations <= 10;
            row.observed = r.power;
        } catch (const error&) {
            row.passed = false;
        }
        checks.push_back(row);
    }

    ExperimentResult res;
    res.csv = csv_header(spec, "check,passed,observed,expected");
    std::string table;
    int passed = 0;
    for (const auto& c : checks) {
        res.csv += c.name + "," + (c.passed ? "1" : "0") + "," + fmt_num(c.observed) + "," +
                   fmt_num(c.expected) + "\n";
        char line[160];
        std::snprintf(line, sizeof(line), "%-34s %s  observed=%.10g expected=%.10g\n",
                      c.name.c_str(), c.passed ? "PASS" : "FAIL", c.observed, c.expected);
        table += line;
        res.metrics[c.name] = c.passed ? 1.0 : 0.0;
        if (c.passed) ++passed;
    }
    res.metrics["checks_total"] = static_cast<double>(checks.size());
    res.metrics["checks_passed"] = static_cast<double>(passed);
    res.metrics["all_passed"] =
        passed == static_cast<int>(checks.size()) ? 1.0 : 0.0;
    char buf[80];
    std::snprintf(buf, sizeof(buf), "validation: %d/%zu checks passed", passed, checks.size());
    res.summary = table + buf;
    return res;
}

}  // namespace

Preset preset_from_name(const std::string& name) {
    if (name == "fig1") return Preset::fig1;
    if (name == "fig2") return Preset::fig2;
    if (name == "fig3") return Preset::fig3;
    if (name == "validate") return Preset::validate;
    if (name == "custom") return Preset::custom;
    throw parse_error("unknown preset \"" + name + "\"");
}

std::string preset_name(Preset p) {
    switch (p) {
        case Preset::fig1: return "fig1";
        case Preset::fig2: return "fig2";
        case Preset::fig3: return "fig3";
        case Preset::validate: return "validate";
        case Preset::custom: return "custom";
    }
    return "custom";
}

ExperimentSpec preset_spec(Preset p) {
    ExperimentSpec spec;
    spec.preset = p;
    spec.fading = {1.0, 1.0, 1.0};
    switch (p) {
        case Preset::custom:
            break;
        case Preset::fig1:
            // rate-validation sweep over the density ratio, run in the wide-window regime
            spec.network.lambda_u = 0.001;
            spec.network.lambda_b = 0.1;  // overwritten per sweep point
            spec.network.n_antennas = 10;
            spec.network.alpha = 4.0;
            spec.network.radius = truncation_radius(4.0);
            spec.network.noise = 0.001;
            spec.network.p_max = 1.0;
            spec.network.p_c = 1.0;
            spec.network.branch = RBranch::asymptotic;
            spec.sim.trials = 10000;
            spec.ratio_sweep = {100.0, std::pow(10.0, 2.5), 1000.0, std::pow(10.0, 3.5), 10000.0};
            spec.output_path = "fig1.csv";
            break;
        case Preset::fig2:
            // power-control trajectory comparison
            spec.network.lambda_b = 10.0;
            spec.network.lambda_u = 1.0;
            spec.network.n_antennas = 1;
            spec.network.alpha = 4.0;
            spec.network.radius = 1.0;
            spec.network.noise = 2000.0;
            spec.network.p_max = 1.0;
            spec.network.p_c = 1.0;
            spec.sim.trials = 1000;
            spec.sim.dt = 0.05;
            spec.sim.horizon = 20.0;
            spec.sim.transient_cut = 5.0;
            spec.output_path = "fig2.csv";
            break;
        case Preset::fig3:
            // stationary maximized EE across antennas and BS density
            spec.network.lambda_b = 1.0;  // overwritten per grid cell
            spec.network.lambda_u = 1.0;
            spec.network.n_antennas = 1;  // overwritten per grid cell
            spec.network.alpha = 4.0;
            spec.network.radius = 10.0;
            spec.network.noise = 0.001;
            spec.network.p_max = 1.0;
            spec.network.p_c = 1.0;
            spec.antenna_sweep = {1, 4, 16, 64};
            spec.density_sweep = {1.0, 3.0, 10.0, 30.0, 100.0};
            spec.output_path = "fig3.csv";
            break;
        case Preset::validate:
            spec.network.lambda_b = 5.0;
            spec.network.lambda_u = 0.5;
            spec.network.n_antennas = 1;
            spec.network.alpha = 4.0;
            spec.network.radius = 10.0;
            spec.network.noise = 0.001;
            spec.network.p_max = 1.0;
            spec.network.p_c = 1.0;
            spec.sim.trials = 200;  // snapshots for the empirical activity check
            break;
    }
    return spec;
}

ExperimentSpec parse_config_json(const std::string& text) {
    njson j;
    try {
        j = njson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw parse_error("config: root must be a JSON object");

    Preset preset = Preset::custom;
    if (j.contains("preset")) preset = preset_from_name(get_str(j["preset"], "preset"));
    ExperimentSpec spec = preset_spec(preset);

    if (preset == Preset::custom) {
        static const char* const required[] = {"lambda_b", "lambda_u", "n_antennas", "alpha",
                                               "radius",   "noise",    "p_max",      "p_c",
                                               "trials",   "seed"};
        std::string missing;
        for (const char* k : required) {
            if (j.contains(k)) continue;
            if (!missing.empty()) missing += ", ";
            missing += k;
        }
        if (!missing.empty())
            throw parse_error("custom config missing required fields: " + missing);
    }

    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const njson& v = it.value();
        if (k == "preset") continue;
        if (k == "lambda_b") spec.network.lambda_b = get_num(v, k);
        else if (k == "lambda_u") spec.network.lambda_u = get_num(v, k);
        else if (k == "n_antennas") spec.network.n_antennas = get_int(v, k);
        else if (k == "alpha") spec.network.alpha = get_num(v, k);
        else if (k == "radius") spec.network.radius = get_num(v, k);
        else if (k == "noise") spec.network.noise = get_num(v, k);
        else if (k == "p_max") spec.network.p_max = get_num(v, k);
        else if (k == "p_c") spec.network.p_c = get_num(v, k);
        else if (k == "branch") spec.network.branch = branch_from_name(get_str(v, k));
        else if (k == "mu_x") spec.fading.mu_x = get_num(v, k);
        else if (k == "mu_y") spec.fading.mu_y = get_num(v, k);
        else if (k == "eta") spec.fading.eta = get_num(v, k);
        else if (k == "trials") spec.sim.trials = get_u64(v, k);
        else if (k == "seed") spec.sim.master_seed = get_u64(v, k);
        else if (k == "dt") spec.sim.dt = get_num(v, k);
        else if (k == "horizon") spec.sim.horizon = get_num(v, k);
        else if (k == "activity_mode") spec.sim.activity_mode = activity_from_name(get_str(v, k));
        else if (k == "rate_metric") spec.sim.rate_metric = metric_from_name(get_str(v, k));
        else if (k == "serving_law") spec.sim.serving_law = law_from_name(get_str(v, k));
        else if (k == "transient_cut") spec.sim.transient_cut = get_num(v, k);
        else if (k == "fading_time") {
            if (v.is_string()) {
                if (v.get<std::string>() != "inf")
                    throw parse_error("config field fading_time: expected a number or \"inf\"");
                spec.sim.fading_time = std::numeric_limits<double>::infinity();
            } else {
                spec.sim.fading_time = get_num(v, k);
            }
        } else if (k == "threads") spec.sim.threads = get_int(v, k);
        else if (k == "ratio_sweep") spec.ratio_sweep = get_num_array(v, k);
        else if (k == "antenna_sweep") spec.antenna_sweep = get_int_array(v, k);
        else if (k == "density_sweep") spec.density_sweep = get_num_array(v, k);
        else if (k == "output") spec.output_path = get_str(v, k);
        else throw parse_error("config: unknown key \"" + k + "\"");
    }

    spec.network.validate();
    spec.sim.validate();
    if (spec.fading.eta < 0.0) throw parameter_error("config: eta >= 0 required");
    return spec;
}

ExperimentSpec load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot read config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

std::string dump_config(const ExperimentSpec& spec) {
    njson j;
    j["preset"] = preset_name(spec.preset);
    j["lambda_b"] = spec.network.lambda_b;
    j["lambda_u"] = spec.network.lambda_u;
    j["n_antennas"] = spec.network.n_antennas;
    j["alpha"] = spec.network.alpha;
    j["radius"] = spec.network.radius;
    j["noise"] = spec.network.noise;
    j["p_max"] = spec.network.p_max;
    j["p_c"] = spec.network.p_c;
    j["branch"] = branch_name(spec.network.branch);
    j["mu_x"] = spec.fading.mu_x;
    j["mu_y"] = spec.fading.mu_y;
    j["eta"] = spec.fading.eta;
    j["trials"] = spec.sim.trials;
    j["seed"] = spec.sim.master_seed;
    j["dt"] = spec.sim.dt;
    j["horizon"] = spec.sim.horizon;
    j["activity_mode"] = activity_name(spec.sim.activity_mode);
    j["rate_metric"] = metric_name(spec.sim.rate_metric);
    j["serving_law"] = law_name(spec.sim.serving_law);
    j["transient_cut"] = spec.sim.transient_cut;
    if (std::isinf(spec.sim.fading_time)) j["fading_time"] = "inf";
    else j["fading_time"] = spec.sim.fading_time;
    j["threads"] = spec.sim.threads;
    if (!spec.ratio_sweep.empty()) j["ratio_sweep"] = spec.ratio_sweep;
    if (!spec.antenna_sweep.empty()) j["antenna_sweep"] = spec.antenna_sweep;
    if (!spec.density_sweep.empty()) j["density_sweep"] = spec.density_sweep;
    j["output"] = spec.output_path;
    return j.dump(2) + "\n";
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.network.validate();
    spec.sim.validate();
    ExperimentResult res;
    switch (spec.preset) {
        case Preset::fig1:
            res = run_rate_sweep(spec);
            break;
        case Preset::fig2:
            res = run_trajectory(spec);
            break;
        case Preset::fig3:
            res = run_ee_grid(spec);
            break;
        case Preset::validate:
            res = run_validation(spec);
            break;
        case Preset::custom:
            if (!spec.ratio_sweep.empty()) res = run_rate_sweep(spec);
            else if (!spec.antenna_sweep.empty() || !spec.density_sweep.empty())
                res = run_ee_grid(spec);
            else res = run_single_point(spec);
            break;
    }
    if (!spec.output_path.empty()) write_atomic(spec.output_path, res.csv);
    return res;
}

}  // namespace udnmf
