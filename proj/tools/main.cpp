// anisofermi command-line front end. Talks to the shared library purely
// through the C interface in anisofermi.h.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "anisofermi.h"

namespace {

int fail(af_status status) {
    std::fprintf(stderr, "error: %s\n", af_last_error());
    switch (status) {
        case AF_ERR_CONFIG: return 2;
        case AF_ERR_NUMERIC: return 3;
        case AF_ERR_IO: return 4;
        default: return 2;
    }
}

struct ConfigHandle {
    af_config* ptr = nullptr;
    ~ConfigHandle() { af_config_free(ptr); }
};
struct ResultsHandle {
    af_results* ptr = nullptr;
    ~ResultsHandle() { af_results_free(ptr); }
};

int run_simulate(const std::string& config_path, const std::string& out_dir,
                 int threads, const std::string& formulation, bool check_only) {
    ConfigHandle cfg;
    af_status st = af_config_parse_file(config_path.c_str(), &cfg.ptr);
    if (st != AF_OK) return fail(st);

    if (threads >= 0) {
        st = af_config_set(cfg.ptr, "run.threads", std::to_string(threads).c_str());
        if (st != AF_OK) return fail(st);
    }
    if (!formulation.empty()) {
        st = af_config_set(cfg.ptr, "run.formulation", formulation.c_str());
        if (st != AF_OK) return fail(st);
    }
    if (!out_dir.empty()) {
        st = af_config_set(cfg.ptr, "output.dir", out_dir.c_str());
        if (st != AF_OK) return fail(st);
    }

    char digest[17] = {0};
    af_config_digest(cfg.ptr, digest);

    if (check_only) {
        char report[4096] = {0};
        int violations = 0;
        st = af_config_check(cfg.ptr, report, sizeof report, &violations);
        if (st != AF_OK) return fail(st);
        if (report[0]) std::fputs(report, stdout);
        std::printf("config ok, digest %s\n", digest);
        return violations == 0 ? 0 : 2;
    }

    ResultsHandle results;
    st = af_run(cfg.ptr, &results.ptr);
    if (st != AF_OK) return fail(st);

    st = af_results_write(results.ptr, out_dir.empty() ? nullptr : out_dir.c_str());
    if (st != AF_OK) return fail(st);

    const int nt = af_results_time_count(results.ptr);
    double last[8] = {0};
    if (nt > 0) af_results_stress(results.ptr, nt - 1, last);
    std::printf("run complete: digest %s, %d output times, max residual %.3e\n", digest,
                nt, af_results_max_residual(results.ptr));
    std::printf("final T00 = %.9e, n = %.9e\n", last[0], last[7]);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fermion pair creation in Bianchi type-I backgrounds"};
    app.set_version_flag("--version", af_version());
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string formulation;
    int threads = -1;
    bool check_only = false;

    CLI::App* sim = app.add_subcommand("simulate", "integrate a mode sweep and write outputs");
    sim->add_option("config", config_path, "run configuration file")->required();
    sim->add_option("--out", out_dir, "output directory (overrides config)");
    sim->add_option("--threads", threads, "worker thread count (0 = auto)");
    sim->add_option("--formulation", formulation, "suv|complex|dirac")
        ->check(CLI::IsMember({"suv", "complex", "dirac"}));
    sim->add_flag("--check", check_only, "validate the configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage problems are configuration errors
    }

    return run_simulate(config_path, out_dir, threads, formulation, check_only);
}
