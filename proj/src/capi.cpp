#include "anisofermi.h"

#include <algorithm>
#include <cstring>
#include <string>

#include "anisofermi/config.hpp"
#include "anisofermi/error.hpp"
#include "anisofermi/sweep.hpp"
#include "anisofermi/version.hpp"

using anisofermi::SimulationConfig;
using anisofermi::SweepResults;

struct af_config {
    SimulationConfig cfg;
};
struct af_results {
    SweepResults results;
};

namespace {

thread_local std::string g_last_error;

af_status status_of(const anisofermi::Error& e) {
    switch (e.code()) {
        case anisofermi::ErrorCode::config: return AF_ERR_CONFIG;
        case anisofermi::ErrorCode::numeric: return AF_ERR_NUMERIC;
        case anisofermi::ErrorCode::io: return AF_ERR_IO;
    }
    return AF_ERR_INVALID;
}

template <class Fn>
af_status wrap(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return AF_OK;
    } catch (const anisofermi::Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AF_ERR_INVALID;
    } catch (...) {
        g_last_error = "unknown error";
        return AF_ERR_INVALID;
    }
}

af_status invalid(const char* msg) {
    g_last_error = msg;
    return AF_ERR_INVALID;
}

} // namespace

extern "C" {

const char* af_version(void) { return anisofermi::kVersion; }

const char* af_last_error(void) { return g_last_error.c_str(); }

af_status af_config_parse_string(const char* text, af_config** out) {
    if (!text || !out) return invalid("null argument");
    *out = nullptr;
    return wrap([&] { *out = new af_config{anisofermi::parse_config(text)}; });
}

af_status af_config_parse_file(const char* path, af_config** out) {
    if (!path || !out) return invalid("null argument");
    *out = nullptr;
    return wrap([&] { *out = new af_config{anisofermi::parse_config_file(path)}; });
}

void af_config_free(af_config* cfg) { delete cfg; }

af_status af_config_set(af_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return invalid("null argument");
    return wrap([&] {
        const std::string dotted(key);
        const std::size_t dotpos = dotted.find('.');
        if (dotpos == std::string::npos || dotpos == 0 || dotpos + 1 == dotted.size())
            throw anisofermi::ConfigError("key must be of the form section.key");
        // Re-parse the canonical form with the override appended (last wins).
        std::string text = anisofermi::serialize_config(cfg->cfg);
        text += "\n[" + dotted.substr(0, dotpos) + "]\n" + dotted.substr(dotpos + 1) +
                " = " + value + "\n";
        cfg->cfg = anisofermi::parse_config(text);
    });
}

af_status af_config_digest(const af_config* cfg, char out[17]) {
    if (!cfg || !out) return invalid("null argument");
    return wrap([&] {
        const std::string hex = anisofermi::config_digest_hex(cfg->cfg);
        std::memcpy(out, hex.c_str(), 17);
    });
}

af_status af_config_check(const af_config* cfg, char* buf, size_t buflen,
                          int* n_violations) {
    if (!cfg) return invalid("null argument");
    return wrap([&] {
        const anisofermi::ModelDiagnostics diag = anisofermi::validate_model(
            cfg->cfg.model, {cfg->cfg.t0, cfg->cfg.t1});
        std::string report;
        for (const auto& v : diag.violations) report += "violation: " + v + "\n";
        for (const auto& f : diag.flags) report += "flag: " + f + "\n";
        if (n_violations) *n_violations = static_cast<int>(diag.violations.size());
        if (buf && buflen > 0) {
            const std::size_t len = std::min(buflen - 1, report.size());
            std::memcpy(buf, report.data(), len);
            buf[len] = '\0';
        }
    });
}

af_status af_run(const af_config* cfg, af_results** out) {
    if (!cfg || !out) return invalid("null argument");
    *out = nullptr;
    return wrap([&] { *out = new af_results{anisofermi::run_sweep(cfg->cfg)}; });
}

void af_results_free(af_results* results) { delete results; }

int af_results_time_count(const af_results* results) {
    return results ? static_cast<int>(results->results.times.size()) : 0;
}

double af_results_time(const af_results* results, int i) {
    if (!results || i < 0 || i >= af_results_time_count(results)) return 0;
    return results->results.times[static_cast<std::size_t>(i)];
}

af_status af_results_stress(const af_results* results, int i, double out[8]) {
    if (!results || !out) return invalid("null argument");
    if (i < 0 || i >= af_results_time_count(results)) return invalid("index out of range");
    const anisofermi::StressTensor& st = results->results.stress[static_cast<std::size_t>(i)];
    out[0] = st.t00;
    out[1] = st.t11;
    out[2] = st.t22;
    out[3] = st.t33;
    out[4] = st.t12;
    out[5] = st.t13;
    out[6] = st.t23;
    out[7] = st.n;
    return AF_OK;
}

double af_results_max_residual(const af_results* results) {
    return results ? results->results.manifest.max_constraint_residual : 0;
}

af_status af_results_digest(const af_results* results, char out[17]) {
    if (!results || !out) return invalid("null argument");
    const std::string& hex = results->results.manifest.config_digest;
    std::memcpy(out, hex.c_str(), std::min<std::size_t>(hex.size() + 1, 17));
    out[16] = '\0';
    return AF_OK;
}

af_status af_results_write(const af_results* results, const char* dir) {
    if (!results) return invalid("null argument");
    return wrap([&] {
        const std::string target = dir ? dir : results->results.config.out_dir;
        anisofermi::write_outputs(results->results, target);
    });
}

} // extern "C"
