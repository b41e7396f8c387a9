#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "udnmf.h"

namespace {

int exit_code_for(udnmf_status st) {
    switch (st) {
        case UDNMF_OK:
            return 0;
        case UDNMF_E_INVALID:
        case UDNMF_E_DOMAIN:
        case UDNMF_E_PARSE:
            return 2;  // config error
        case UDNMF_E_CONVERGENCE:
        case UDNMF_E_DATA:
            return 3;  // solver failure
        case UDNMF_E_IO:
            return 4;
        default:
            return 1;
    }
}

int fail(udnmf_status st) {
    std::fprintf(stderr, "error: %s\n", udnmf_last_error());
    return exit_code_for(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ultra-dense downlink simulator and mean-field analytics"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::int64_t trials = 0;
    int threads = 0;
    std::string out_path, activity, metric;
    bool dump_only = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "master RNG seed");
        sub->add_option("--trials", trials, "Monte-Carlo trials per point")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", out_path, "output CSV path");
        sub->add_option("--activity-mode", activity, "BS activity model")
            ->check(CLI::IsMember({"voronoi", "thinning"}));
        sub->add_option("--rate-metric", metric, "averaged rate definition")
            ->check(CLI::IsMember({"log", "literal"}));
        sub->add_option("--threads", threads, "worker threads (0 = all cores)");
        sub->add_flag("--dump-config", dump_only, "print the effective config and exit");
    };

    CLI::App* sub_fig1 = app.add_subcommand("fig1", "rate validation sweep over BS density");
    CLI::App* sub_fig2 = app.add_subcommand("fig2", "power-control EE trajectory");
    CLI::App* sub_fig3 = app.add_subcommand("fig3", "stationary EE over antennas x density");
    CLI::App* sub_val = app.add_subcommand("validate", "internal oracle checks");
    CLI::App* sub_run = app.add_subcommand("run", "run an experiment from a JSON config");
    sub_run->add_option("config", config_path, "config file (JSON)")->required();
    for (CLI::App* s : {sub_fig1, sub_fig2, sub_fig3, sub_val, sub_run}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    udnmf_config* cfg = nullptr;
    udnmf_status st;
    if (sub == sub_run) st = udnmf_config_load(config_path.c_str(), &cfg);
    else st = udnmf_config_from_preset(sub->get_name().c_str(), &cfg);
    if (st != UDNMF_OK) return fail(st);

    if (st == UDNMF_OK && sub->count("--seed"))
        st = udnmf_config_set(cfg, "seed", std::to_string(seed).c_str());
    if (st == UDNMF_OK && sub->count("--trials"))
        st = udnmf_config_set(cfg, "trials", std::to_string(trials).c_str());
    if (st == UDNMF_OK && sub->count("--threads"))
        st = udnmf_config_set(cfg, "threads", std::to_string(threads).c_str());
    if (st == UDNMF_OK && sub->count("--out"))
        st = udnmf_config_set_string(cfg, "output", out_path.c_str());
    if (st == UDNMF_OK && sub->count("--activity-mode"))
        st = udnmf_config_set_string(cfg, "activity_mode", activity.c_str());
    if (st == UDNMF_OK && sub->count("--rate-metric"))
        st = udnmf_config_set_string(cfg, "rate_metric", metric.c_str());
    if (st != UDNMF_OK) {
        udnmf_config_destroy(cfg);
        return fail(st);
    }

    if (dump_only) {
        char* text = nullptr;
        st = udnmf_config_to_json(cfg, &text);
        if (st != UDNMF_OK) {
            udnmf_config_destroy(cfg);
            return fail(st);
        }
        std::fputs(text, stdout);
        udnmf_string_free(text);
        udnmf_config_destroy(cfg);
        return 0;
    }

    udnmf_report* rep = nullptr;
    st = udnmf_run(cfg, &rep);
    if (st != UDNMF_OK) {
        udnmf_config_destroy(cfg);
        return fail(st);
    }

    char* summary = nullptr;
    if (udnmf_report_summary(rep, &summary) == UDNMF_OK) {
        std::fputs(summary, stdout);
        std::fputc('\n', stdout);
        udnmf_string_free(summary);
    }

    int rc = 0;
    double all_passed = 1.0;  // only the validation preset reports this metric
    if (udnmf_report_metric(rep, "all_passed", &all_passed) == UDNMF_OK && all_passed != 1.0)
        rc = 3;
    udnmf_report_destroy(rep);
    udnmf_config_destroy(cfg);
    return rc;
}
