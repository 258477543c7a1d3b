#include "anisofermi/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "anisofermi/error.hpp"
#include "anisofermi/version.hpp"

namespace anisofermi {

namespace {

namespace fs = std::filesystem;

// Dynamic dispatch of independent work units over a small thread pool. The
// first exception wins; remaining units are abandoned.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (n == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!stop.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) break;
            try {
                fn(i);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
                stop.store(true, std::memory_order_relaxed);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);  // 17 significant digits
    return buf;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed for '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() +
                      "': " + ec.message());
    }
}

} // namespace

SweepResults run_sweep(const SimulationConfig& cfg) {
    const auto wall_start = std::chrono::steady_clock::now();

    const MomentumGrid grid = MomentumGrid::logarithmic(
        cfg.grid.k_min, cfg.grid.k_max, cfg.grid.n_k, cfg.grid.n_theta, cfg.grid.n_phi);
    const std::size_t n_nodes = grid.nodes.size();
    const std::size_t n_modes = 2 * n_nodes;  // r = +1 block, then r = -1

    IntegratorConfig icfg = cfg.integrator;
    icfg.output_times = cfg.output_times;
    const CouplingStrategy strategy = make_strategy(cfg.strategy);

    std::vector<ModeTrajectory> trajectories(n_modes);
    parallel_for(n_modes, cfg.threads, [&](std::size_t idx) {
        const std::size_t node = idx % n_nodes;
        const int r = idx < n_nodes ? +1 : -1;
        const ModeIndex mode{grid.wavevector(grid.nodes[node]), r};
        trajectories[idx] =
            integrate_mode(mode, cfg.model, cfg.mass, cfg.t0, icfg, strategy,
                           cfg.formulation);
    });

    SweepResults results;
    results.config = cfg;
    results.times = cfg.output_times;
    const std::size_t n_times = results.times.size();
    results.stress.reserve(n_times);
    results.spectra.assign(n_times, {});

    double max_residual = 0;
    for (const auto& traj : trajectories)
        max_residual = std::max(max_residual, traj.max_constraint_residual);

    std::vector<SUVState> states(n_modes);
    for (std::size_t it = 0; it < n_times; ++it) {
        for (std::size_t idx = 0; idx < n_modes; ++idx) states[idx] = trajectories[idx].states[it];
        const BackgroundState bg = cfg.model.evaluate(results.times[it]);
        results.stress.push_back(integrate_stress(grid, states, bg, cfg.mass, cfg.stress));

        auto& rows = results.spectra[it];
        rows.reserve(n_modes);
        for (std::size_t idx = 0; idx < n_modes; ++idx) {
            const auto& node = grid.nodes[idx % n_nodes];
            SpectrumRow row;
            row.k = node.k;
            row.costheta = node.costheta;
            row.phi = node.phi;
            row.r = idx < n_nodes ? +1 : -1;
            row.s = states[idx].s;
            row.u = states[idx].u;
            row.v = states[idx].v;
            rows.push_back(row);
        }
    }

    const auto wall_end = std::chrono::steady_clock::now();
    results.manifest.config_digest = config_digest_hex(cfg);
    results.manifest.artifact_version = kVersion;
    results.manifest.wall_time_seconds =
        std::chrono::duration<double>(wall_end - wall_start).count();
    results.manifest.max_constraint_residual = max_residual;
    results.manifest.warnings = cfg.warnings;
    return results;
}

void write_outputs(const SweepResults& results, const std::string& out_dir) {
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

    {
        std::string csv = "t,T00,T11,T22,T33,T12,T13,T23,n\n";
        for (std::size_t i = 0; i < results.times.size(); ++i) {
            const StressTensor& st = results.stress[i];
            csv += format_value(results.times[i]);
            for (double v : {st.t00, st.t11, st.t22, st.t33, st.t12, st.t13, st.t23, st.n}) {
                csv += ',';
                csv += format_value(v);
            }
            csv += '\n';
        }
        write_text_atomic(dir / "stress.csv", csv);
    }

    for (std::size_t it = 0; it < results.spectra.size(); ++it) {
        std::string csv = "k,costheta,phi,r,S,U,V\n";
        for (const SpectrumRow& row : results.spectra[it]) {
            csv += format_value(row.k);
            csv += ',';
            csv += format_value(row.costheta);
            csv += ',';
            csv += format_value(row.phi);
            csv += ',';
            csv += std::to_string(row.r);
            csv += ',';
            csv += format_value(row.s);
            csv += ',';
            csv += format_value(row.u);
            csv += ',';
            csv += format_value(row.v);
            csv += '\n';
        }
        char name[32];
        std::snprintf(name, sizeof name, "spectrum_%04zu.csv", it);
        write_text_atomic(dir / name, csv);
    }

    nlohmann::json manifest;
    manifest["config_digest"] = results.manifest.config_digest;
    manifest["artifact_version"] = results.manifest.artifact_version;
    manifest["wall_time_seconds"] = results.manifest.wall_time_seconds;
    manifest["max_constraint_residual"] = results.manifest.max_constraint_residual;
    manifest["warnings"] = results.manifest.warnings;
    write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

} // namespace anisofermi
