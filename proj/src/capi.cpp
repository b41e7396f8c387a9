#include "udnmf.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "udnmf/errors.hpp"
#include "udnmf/experiment.hpp"

struct udnmf_config {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
};

struct udnmf_report {
    udnmf::ExperimentResult result;
};

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename F>
udnmf_status guarded(F&& body) noexcept {
    try {
        body();
        t_last_error.clear();
        return UDNMF_OK;
    } catch (const udnmf::parameter_error& e) {
        t_last_error = e.what();
        return UDNMF_E_INVALID;
    } catch (const udnmf::domain_error& e) {
        t_last_error = e.what();
        return UDNMF_E_DOMAIN;
    } catch (const udnmf::convergence_error& e) {
        t_last_error = e.what();
        return UDNMF_E_CONVERGENCE;
    } catch (const udnmf::insufficient_data_error& e) {
        t_last_error = e.what();
        return UDNMF_E_DATA;
    } catch (const udnmf::io_error& e) {
        t_last_error = e.what();
        return UDNMF_E_IO;
    } catch (const udnmf::parse_error& e) {
        t_last_error = e.what();
        return UDNMF_E_PARSE;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return UDNMF_E_INTERNAL;
    } catch (...) {
        t_last_error = "unknown error";
        return UDNMF_E_INTERNAL;
    }
}

udnmf_status invalid_arg(const char* msg) {
    t_last_error = msg;
    return UDNMF_E_INVALID;
}

}  // namespace

extern "C" {

const char* udnmf_version(void) { return udnmf::kVersion; }

const char* udnmf_last_error(void) { return t_last_error.c_str(); }

udnmf_status udnmf_config_create(udnmf_config** out) {
    if (!out) return invalid_arg("udnmf_config_create: out must not be null");
    return guarded([&] { *out = new udnmf_config(); });
}

udnmf_status udnmf_config_from_preset(const char* name, udnmf_config** out) {
    if (!name || !out)
        return invalid_arg("udnmf_config_from_preset: name and out must not be null");
    return guarded([&] {
        udnmf::preset_from_name(name);  // rejects unknown names
        auto cfg = std::make_unique<udnmf_config>();
        cfg->doc["preset"] = name;
        *out = cfg.release();
    });
}

udnmf_status udnmf_config_from_json(const char* text, udnmf_config** out) {
    if (!text || !out)
        return invalid_arg("udnmf_config_from_json: text and out must not be null");
    return guarded([&] {
        udnmf::parse_config_json(text);  // full validation up front
        auto cfg = std::make_unique<udnmf_config>();
        cfg->doc = nlohmann::ordered_json::parse(text);
        *out = cfg.release();
    });
}

udnmf_status udnmf_config_load(const char* path, udnmf_config** out) {
    if (!path || !out) return invalid_arg("udnmf_config_load: path and out must not be null");
    return guarded([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw udnmf::io_error(std::string("cannot read config file ") + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        udnmf::parse_config_json(text);
        auto cfg = std::make_unique<udnmf_config>();
        cfg->doc = nlohmann::ordered_json::parse(text);
        *out = cfg.release();
    });
}

udnmf_status udnmf_config_set(udnmf_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value)
        return invalid_arg("udnmf_config_set: cfg, key and value must not be null");
    return guarded([&] {
        nlohmann::ordered_json v = nlohmann::ordered_json::parse(value, nullptr, false);
        if (v.is_discarded())
            throw udnmf::parse_error(std::string("value for ") + key +
                                     " is not a JSON literal: " + value);
        cfg->doc[key] = v;
    });
}

udnmf_status udnmf_config_set_string(udnmf_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value)
        return invalid_arg("udnmf_config_set_string: cfg, key and value must not be null");
    return guarded([&] { cfg->doc[key] = value; });
}

udnmf_status udnmf_config_to_json(const udnmf_config* cfg, char** out_text) {
    if (!cfg || !out_text)
        return invalid_arg("udnmf_config_to_json: cfg and out_text must not be null");
    return guarded([&] {
        udnmf::ExperimentSpec spec = udnmf::parse_config_json(cfg->doc.dump());
        *out_text = dup_string(udnmf::dump_config(spec));
    });
}

void udnmf_config_destroy(udnmf_config* cfg) { delete cfg; }

udnmf_status udnmf_run(const udnmf_config* cfg, udnmf_report** out) {
    if (!cfg || !out) return invalid_arg("udnmf_run: cfg and out must not be null");
    return guarded([&] {
        udnmf::ExperimentSpec spec = udnmf::parse_config_json(cfg->doc.dump());
        auto rep = std::make_unique<udnmf_report>();
        rep->result = udnmf::run_experiment(spec);
        *out = rep.release();
    });
}

udnmf_status udnmf_report_summary(const udnmf_report* rep, char** out_text) {
    if (!rep || !out_text)
        return invalid_arg("udnmf_report_summary: rep and out_text must not be null");
    return guarded([&] { *out_text = dup_string(rep->result.summary); });
}

udnmf_status udnmf_report_csv(const udnmf_report* rep, char** out_text) {
    if (!rep || !out_text)
        return invalid_arg("udnmf_report_csv: rep and out_text must not be null");
    return guarded([&] { *out_text = dup_string(rep->result.csv); });
}

udnmf_status udnmf_report_metric(const udnmf_report* rep, const char* name, double* out_value) {
    if (!rep || !name || !out_value)
        return invalid_arg("udnmf_report_metric: rep, name and out_value must not be null");
    return guarded([&] {
        auto it = rep->result.metrics.find(name);
        if (it == rep->result.metrics.end())
            throw udnmf::parameter_error(std::string("unknown metric \"") + name + "\"");
        *out_value = it->second;
    });
}

void udnmf_report_destroy(udnmf_report* rep) { delete rep; }

void udnmf_string_free(char* text) { std::free(text); }

udnmf_status udnmf_lambert_w0(double y, double* out) {
    if (!out) return invalid_arg("udnmf_lambert_w0: out must not be null");
    return guarded([&] { *out = udnmf::lambert_w0(y); });
}

udnmf_status udnmf_coverage_probability(double lambda_b, double radius, double* out) {
    if (!out) return invalid_arg("udnmf_coverage_probability: out must not be null");
    return guarded([&] { *out = udnmf::coverage_probability({lambda_b, 0.0, radius}); });
}

udnmf_status udnmf_active_probability(double lambda_b, double lambda_u, double* out) {
    if (!out) return invalid_arg("udnmf_active_probability: out must not be null");
    return guarded([&] { *out = udnmf::active_probability(lambda_b, lambda_u); });
}

udnmf_status udnmf_mf_interference(double lambda_b, double lambda_u, int n_antennas, double alpha,
                                   double radius, double p_hat, double eg2, double* out) {
    if (!out) return invalid_arg("udnmf_mf_interference: out must not be null");
    return guarded([&] {
        udnmf::NetworkConfig cfg;
        cfg.lambda_b = lambda_b;
        cfg.lambda_u = lambda_u;
        cfg.n_antennas = n_antennas;
        cfg.alpha = alpha;
        cfg.radius = radius;
        cfg.p_max = p_hat > 1.0 ? p_hat : 1.0;  // scalar helper: no cap semantics
        *out = udnmf::mf_interference(cfg, p_hat, eg2).value;
    });
}

}  // extern "C"
