// Exercises the shared-library surface exactly as an external client would:
// only anisofermi.h, opaque handles, and status codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "anisofermi.h"

namespace fs = std::filesystem;

namespace {

const char* kConfig = R"(
[background]
type = powerlaw
a0 = 1 1 1
p = 0.6666666666666666 0.6666666666666666 -0.3333333333333333
t_ref = 1
[run]
mass = 1
t0 = 1
t1 = 3
output_count = 4
[grid]
k_min = 0.5
k_max = 4
n_k = 2
n_theta = 2
n_phi = 2
)";

struct Config {
    af_config* ptr = nullptr;
    ~Config() { af_config_free(ptr); }
};
struct Results {
    af_results* ptr = nullptr;
    ~Results() { af_results_free(ptr); }
};

std::string temp_dir() {
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    return (fs::temp_directory_path() / ("anisofermi_capi_" + std::to_string(stamp)))
        .string();
}

} // namespace

TEST_CASE("version string") {
    REQUIRE(af_version() != nullptr);
    CHECK(std::strcmp(af_version(), "0.1.0") == 0);
}

TEST_CASE("null arguments are rejected without crashing") {
    CHECK(af_config_parse_string(nullptr, nullptr) == AF_ERR_INVALID);
    af_config* cfg = nullptr;
    CHECK(af_config_parse_string(nullptr, &cfg) == AF_ERR_INVALID);
    CHECK(af_run(nullptr, nullptr) == AF_ERR_INVALID);
    af_config_free(nullptr);
    af_results_free(nullptr);
    CHECK(af_results_time_count(nullptr) == 0);
}

TEST_CASE("parse failures set the error code and message") {
    af_config* cfg = nullptr;
    std::string bad(kConfig);
    bad.replace(bad.find("k_min = 0.5"), 11, "k_min = 0.0");
    CHECK(af_config_parse_string(bad.c_str(), &cfg) == AF_ERR_CONFIG);
    CHECK(cfg == nullptr);
    CHECK(std::string(af_last_error()).find("k_min") != std::string::npos);

    CHECK(af_config_parse_file("/nonexistent/path.conf", &cfg) == AF_ERR_IO);
}

TEST_CASE("digest is exposed and stable") {
    Config a, b;
    REQUIRE(af_config_parse_string(kConfig, &a.ptr) == AF_OK);
    REQUIRE(af_config_parse_string(kConfig, &b.ptr) == AF_OK);
    char da[17] = {0}, db[17] = {0};
    REQUIRE(af_config_digest(a.ptr, da) == AF_OK);
    REQUIRE(af_config_digest(b.ptr, db) == AF_OK);
    CHECK(std::strlen(da) == 16);
    CHECK(std::strcmp(da, db) == 0);
}

TEST_CASE("overrides re-validate like parsed text") {
    Config cfg;
    REQUIRE(af_config_parse_string(kConfig, &cfg.ptr) == AF_OK);
    char before[17] = {0}, after[17] = {0};
    af_config_digest(cfg.ptr, before);

    // execution parameters leave the content digest alone
    CHECK(af_config_set(cfg.ptr, "run.threads", "2") == AF_OK);
    af_config_digest(cfg.ptr, after);
    CHECK(std::strcmp(before, after) == 0);

    // physics content changes it
    CHECK(af_config_set(cfg.ptr, "run.mass", "2") == AF_OK);
    af_config_digest(cfg.ptr, after);
    CHECK(std::strcmp(before, after) != 0);

    CHECK(af_config_set(cfg.ptr, "run.bogus", "1") == AF_ERR_CONFIG);
    CHECK(af_config_set(cfg.ptr, "grid.k_min", "-1") == AF_ERR_CONFIG);
    CHECK(af_config_set(cfg.ptr, "nodots", "1") == AF_ERR_CONFIG);
}

TEST_CASE("validation report surfaces informational flags") {
    Config cfg;
    REQUIRE(af_config_parse_string(kConfig, &cfg.ptr) == AF_OK);
    char report[1024] = {0};
    int violations = -1;
    REQUIRE(af_config_check(cfg.ptr, report, sizeof report, &violations) == AF_OK);
    CHECK(violations == 0);
    CHECK(std::string(report).find("vacuum Kasner") != std::string::npos);
}

TEST_CASE("a run produces stress tensors and files") {
    Config cfg;
    REQUIRE(af_config_parse_string(kConfig, &cfg.ptr) == AF_OK);
    Results results;
    REQUIRE(af_run(cfg.ptr, &results.ptr) == AF_OK);

    REQUIRE(af_results_time_count(results.ptr) == 4);
    CHECK(af_results_time(results.ptr, 0) == 1.0);
    CHECK(af_results_time(results.ptr, 3) == 3.0);
    CHECK(af_results_max_residual(results.ptr) < 1e-6);

    double row[8];
    REQUIRE(af_results_stress(results.ptr, 3, row) == AF_OK);
    CHECK(row[0] >= 0.0);  // T00
    for (double v : row) CHECK(std::isfinite(v));
    CHECK(af_results_stress(results.ptr, 99, row) == AF_ERR_INVALID);

    char cfg_digest[17] = {0}, run_digest[17] = {0};
    af_config_digest(cfg.ptr, cfg_digest);
    REQUIRE(af_results_digest(results.ptr, run_digest) == AF_OK);
    CHECK(std::strcmp(cfg_digest, run_digest) == 0);

    const std::string dir = temp_dir();
    REQUIRE(af_results_write(results.ptr, dir.c_str()) == AF_OK);
    CHECK(fs::exists(fs::path(dir) / "stress.csv"));
    CHECK(fs::exists(fs::path(dir) / "manifest.json"));
    CHECK(fs::exists(fs::path(dir) / "spectrum_0003.csv"));
    fs::remove_all(dir);

    SUBCASE("determinism across repeated runs") {
        Results again;
        REQUIRE(af_run(cfg.ptr, &again.ptr) == AF_OK);
        double a[8], b[8];
        af_results_stress(results.ptr, 2, a);
        af_results_stress(again.ptr, 2, b);
        CHECK(std::memcmp(a, b, sizeof a) == 0);
    }
    SUBCASE("write failures report AF_ERR_IO") {
        CHECK(af_results_write(results.ptr, "/proc/anisofermi_cannot_write_here") ==
              AF_ERR_IO);
    }
}
