#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anisofermi/background.hpp"
#include "anisofermi/evolution.hpp"
#include "anisofermi/integrator.hpp"
#include "anisofermi/observables.hpp"

namespace anisofermi {

struct GridSpec {
    double k_min = 0;
    double k_max = 0;
    std::size_t n_k = 0;
    std::size_t n_theta = 0;
    std::size_t n_phi = 0;
};

enum class StrategyChoice { literal, derived };

struct SimulationConfig {
    BackgroundModel model{StaticFactors{}};
    double mass = 0;
    double t0 = 0;
    double t1 = 0;
    std::vector<double> output_times;  // materialized, ascending, within [t0, t1]
    GridSpec grid;
    IntegratorConfig integrator;  // output_times member unused here
    Formulation formulation = Formulation::suv;
    StrategyChoice strategy = StrategyChoice::literal;
    StressOptions stress;
    std::string out_dir = "out";
    int threads = 0;  // 0 = hardware concurrency
    std::vector<double> validity_override;  // empty or {t_lo, t_hi}
    std::vector<std::string> warnings;      // informational flags from validation
};

// Flat, line-oriented `key = value` text with [section] headers, `#` comments.
// Unknown keys, type mismatches, and invariant violations raise ConfigError
// naming the key and line. Omitted optional keys take the documented defaults
// (tolerances 1e-10, formulation suv, strategy literal, 16 output times).
SimulationConfig parse_config(const std::string& text);
SimulationConfig parse_config_file(const std::string& path);

// Canonical serialization: sections and keys in fixed order, numbers at full
// precision. parse(serialize(cfg)) is structurally identical to cfg, and the
// digest below hashes this form, so it is stable under reordering of the
// source text.
std::string serialize_config(const SimulationConfig& cfg);

// Digest of the run content (background, interval, grid, integrator,
// formulation...). Execution parameters (thread count, output directory) are
// excluded, so runs that must produce identical data hash identically.
std::uint64_t config_digest(const SimulationConfig& cfg);
std::string config_digest_hex(const SimulationConfig& cfg);

CouplingStrategy make_strategy(StrategyChoice choice);

} // namespace anisofermi
