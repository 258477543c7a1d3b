#pragma once

#include <string>
#include <vector>

#include "anisofermi/config.hpp"
#include "anisofermi/observables.hpp"

namespace anisofermi {

struct RunManifest {
    std::string config_digest;
    std::string artifact_version;
    double wall_time_seconds = 0;
    double max_constraint_residual = 0;
    std::vector<std::string> warnings;
};

struct SpectrumRow {
    double k = 0, costheta = 0, phi = 0;
    int r = +1;
    double s = 0, u = 0, v = 0;
};

struct SweepResults {
    SimulationConfig config;
    std::vector<double> times;
    std::vector<StressTensor> stress;                // one per output time
    std::vector<std::vector<SpectrumRow>> spectra;   // [time][mode], r-major
    RunManifest manifest;
};

// Integrates every (grid node, r) mode over [t0, t1] in parallel, assembles
// the stress tensor and number density at each output time, and records the
// max constraint residual. Outputs are identical for any thread count: modes
// are independent work units and every reduction runs in fixed index order.
SweepResults run_sweep(const SimulationConfig& cfg);

// Writes stress.csv, spectrum_<tindex>.csv, and manifest.json into out_dir.
// Values are written with 17 significant digits (scientific), so reading a
// file back reproduces the in-memory doubles exactly. Each file is staged to
// a temporary name and atomically renamed; no partial file ever persists.
void write_outputs(const SweepResults& results, const std::string& out_dir);

} // namespace anisofermi
