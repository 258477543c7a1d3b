#include "anisofermi/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "anisofermi/error.hpp"

namespace anisofermi {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using EntryMap = std::map<std::string, Entry>;  // "section.key" -> entry

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

EntryMap tokenize(const std::string& text) {
    EntryMap entries;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header (line " +
                                  std::to_string(lineno) + ")");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("empty section name (line " + std::to_string(lineno) + ")");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value' (line " + std::to_string(lineno) + ")");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("empty key (line " + std::to_string(lineno) + ")");
        if (section.empty())
            throw ConfigError("key '" + key + "' outside any section (line " +
                              std::to_string(lineno) + ")");
        // Last occurrence wins; lets callers patch a serialized config by
        // appending overrides.
        entries["" + section + "." + key] = Entry{value, lineno, false};
    }
    return entries;
}

[[noreturn]] void fail(const std::string& key, const Entry& e, const std::string& what) {
    throw ConfigError("'" + key + "': " + what + " (line " + std::to_string(e.line) + ")");
}

double to_double(const std::string& key, const Entry& e, const std::string& token) {
    const char* s = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || !std::isfinite(v))
        fail(key, e, "'" + token + "' is not a finite number");
    return v;
}

std::vector<double> to_list(const std::string& key, const Entry& e) {
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string token;
    while (in >> token) out.push_back(to_double(key, e, token));
    if (out.empty()) fail(key, e, "expected at least one number");
    return out;
}

class Reader {
public:
    explicit Reader(EntryMap entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    const Entry* find(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    double number(const std::string& key, double fallback) {
        const Entry* e = find(key);
        if (!e) return fallback;
        return to_double(key, *e, e->value);
    }

    double required_number(const std::string& key) {
        const Entry* e = find(key);
        if (!e) throw ConfigError("missing required key '" + key + "'");
        return to_double(key, *e, e->value);
    }

    long integer(const std::string& key, long fallback) {
        const Entry* e = find(key);
        if (!e) return fallback;
        const double v = to_double(key, *e, e->value);
        if (v != std::floor(v)) fail(key, *e, "expected an integer");
        return static_cast<long>(v);
    }

    bool boolean(const std::string& key, bool fallback) {
        const Entry* e = find(key);
        if (!e) return fallback;
        if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
        if (e->value == "false" || e->value == "0" || e->value == "no") return false;
        fail(key, *e, "expected true/false");
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const Entry* e = find(key);
        return e ? e->value : fallback;
    }

    std::vector<double> list(const std::string& key) {
        const Entry* e = find(key);
        if (!e) return {};
        return to_list(key, *e);
    }

    std::vector<double> fixed_list(const std::string& key, std::size_t n) {
        const Entry* e = find(key);
        if (!e) throw ConfigError("missing required key '" + key + "'");
        auto v = to_list(key, *e);
        if (v.size() != n)
            fail(key, *e, "expected " + std::to_string(n) + " numbers, got " +
                              std::to_string(v.size()));
        return v;
    }

    void check_positive(const std::string& key, double v, const std::string& what) {
        if (!(v > 0)) {
            auto it = entries_.find(key);
            if (it != entries_.end()) fail(key, it->second, what);
            throw ConfigError("'" + key + "': " + what);
        }
    }

    void reject_unused() const {
        for (const auto& [key, e] : entries_)
            if (!e.used)
                throw ConfigError("unknown key '" + key + "' (line " +
                                  std::to_string(e.line) + ")");
    }

private:
    EntryMap entries_;
};

BackgroundModel build_model(Reader& r) {
    const Entry* type_entry = r.find("background.type");
    if (!type_entry) throw ConfigError("missing required key 'background.type'");
    const std::string type = type_entry->value;

    TimeInterval validity = TimeInterval::unbounded();
    if (r.has("background.validity")) {
        auto v = r.fixed_list("background.validity", 2);
        validity = {v[0], v[1]};
    }

    auto triple = [&](const std::string& key) {
        auto v = r.fixed_list(key, 3);
        return std::array<double, 3>{v[0], v[1], v[2]};
    };

    if (type == "static") {
        return BackgroundModel(StaticFactors{triple("background.A")}, validity);
    }
    if (type == "powerlaw") {
        PowerLawFactors f;
        f.amplitude = triple("background.a0");
        f.exponent = triple("background.p");
        f.t_ref = r.required_number("background.t_ref");
        return BackgroundModel(f, validity);
    }
    if (type == "isotropic_static") {
        return BackgroundModel(
            IsotropicFactors{ScalarStaticFactor{r.required_number("background.A")}},
            validity);
    }
    if (type == "isotropic_powerlaw") {
        ScalarPowerLawFactor f;
        f.amplitude = r.required_number("background.a0");
        f.exponent = r.required_number("background.p");
        f.t_ref = r.required_number("background.t_ref");
        return BackgroundModel(IsotropicFactors{f}, validity);
    }
    if (type == "isotropic_tabulated") {
        ScalarTableFactor f;
        const Entry* te = r.find("background.times");
        const Entry* ve = r.find("background.values");
        if (!te || !ve)
            throw ConfigError("isotropic_tabulated needs 'background.times' and "
                              "'background.values'");
        f.times = to_list("background.times", *te);
        f.values = to_list("background.values", *ve);
        if (f.times.size() != f.values.size())
            fail("background.values", *ve, "times/values length mismatch");
        return BackgroundModel(IsotropicFactors{f}, validity);
    }
    if (type == "tabulated") {
        TabulatedFactors f;
        const Entry* te = r.find("background.times");
        if (!te) throw ConfigError("tabulated needs 'background.times'");
        f.times = to_list("background.times", *te);
        const char* axes[3] = {"background.a1", "background.a2", "background.a3"};
        for (int i = 0; i < 3; ++i) {
            const Entry* ae = r.find(axes[i]);
            if (!ae) throw ConfigError(std::string("tabulated needs '") + axes[i] + "'");
            f.values[i] = to_list(axes[i], *ae);
            if (f.values[i].size() != f.times.size())
                fail(axes[i], *ae, "times/values length mismatch");
        }
        return BackgroundModel(f, validity);
    }
    fail("background.type", *type_entry, "unknown model type '" + type + "'");
}

SimulationConfig assemble(EntryMap entries) {
    Reader r(std::move(entries));
    SimulationConfig cfg;

    if (r.has("background.validity")) cfg.validity_override = r.list("background.validity");
    // (re-read inside build_model; mark as used first)
    cfg.model = build_model(r);

    cfg.mass = r.required_number("run.mass");
    if (cfg.mass < 0) throw ConfigError("'run.mass' must be non-negative");
    cfg.t0 = r.required_number("run.t0");
    cfg.t1 = r.required_number("run.t1");
    if (!(cfg.t1 > cfg.t0)) throw ConfigError("'run.t1' must exceed 'run.t0'");

    if (r.has("run.output_times") && r.has("run.output_count"))
        throw ConfigError("give either 'run.output_times' or 'run.output_count', not both");
    if (r.has("run.output_times")) {
        cfg.output_times = r.list("run.output_times");
        double prev = cfg.t0;
        for (double t : cfg.output_times) {
            if (t < prev || t > cfg.t1)
                throw ConfigError("'run.output_times' must be ascending within [t0, t1]");
            prev = t;
        }
    } else {
        const long count = r.integer("run.output_count", 16);
        if (count < 1) throw ConfigError("'run.output_count' must be >= 1");
        if (count == 1) {
            cfg.output_times = {cfg.t1};
        } else {
            cfg.output_times.resize(count);
            for (long i = 0; i < count; ++i)
                cfg.output_times[i] =
                    cfg.t0 + (cfg.t1 - cfg.t0) * double(i) / double(count - 1);
            cfg.output_times.back() = cfg.t1;
        }
    }

    const std::string formulation = r.text("run.formulation", "suv");
    if (formulation == "suv") cfg.formulation = Formulation::suv;
    else if (formulation == "complex") cfg.formulation = Formulation::complex_pair;
    else if (formulation == "dirac") cfg.formulation = Formulation::dirac_oracle;
    else throw ConfigError("'run.formulation' must be suv|complex|dirac");

    const std::string strategy = r.text("run.strategy", "literal");
    if (strategy == "literal") cfg.strategy = StrategyChoice::literal;
    else if (strategy == "derived") cfg.strategy = StrategyChoice::derived;
    else throw ConfigError("'run.strategy' must be literal|derived");

    cfg.stress.t23_z_plus = r.boolean("run.t23_z_plus", false);
    cfg.threads = static_cast<int>(r.integer("run.threads", 0));
    if (cfg.threads < 0) throw ConfigError("'run.threads' must be >= 0");

    cfg.grid.k_min = r.required_number("grid.k_min");
    r.check_positive("grid.k_min", cfg.grid.k_min, "k_min must be positive");
    cfg.grid.k_max = r.required_number("grid.k_max");
    if (!(cfg.grid.k_max > cfg.grid.k_min))
        throw ConfigError("'grid.k_max' must exceed k_min");
    const long nk = r.integer("grid.n_k", 0);
    const long nt = r.integer("grid.n_theta", 0);
    const long np = r.integer("grid.n_phi", 0);
    if (nk < 2 || nt < 2 || np < 2)
        throw ConfigError("grid needs n_k, n_theta, n_phi >= 2");
    if (nt % 2 != 0) throw ConfigError("'grid.n_theta' must be even");
    cfg.grid.n_k = nk;
    cfg.grid.n_theta = nt;
    cfg.grid.n_phi = np;

    const std::string method = r.text("integrator.method", "adaptive");
    if (method == "adaptive") cfg.integrator.method = IntegratorConfig::Method::adaptive54;
    else if (method == "rk4") cfg.integrator.method = IntegratorConfig::Method::rk4;
    else throw ConfigError("'integrator.method' must be adaptive|rk4");
    cfg.integrator.rel_tol = r.number("integrator.rel_tol", 1e-10);
    cfg.integrator.abs_tol = r.number("integrator.abs_tol", 1e-10);
    if (!(cfg.integrator.rel_tol > 0) || !(cfg.integrator.abs_tol > 0))
        throw ConfigError("integrator tolerances must be positive");
    cfg.integrator.max_step = r.number("integrator.max_step", 0);
    cfg.integrator.initial_step = r.number("integrator.initial_step", 0);
    if (cfg.integrator.max_step < 0 || cfg.integrator.initial_step < 0)
        throw ConfigError("integrator steps must be >= 0");
    const long max_steps = r.integer("integrator.max_steps", 0);
    if (max_steps < 0) throw ConfigError("'integrator.max_steps' must be >= 0");
    cfg.integrator.max_steps = static_cast<std::size_t>(max_steps);

    cfg.out_dir = r.text("output.dir", "out");

    r.reject_unused();

    // Model-level validation over the run interval.
    ModelDiagnostics diag = validate_model(cfg.model, {cfg.t0, cfg.t1});
    if (!diag.ok()) {
        std::string msg = "background model invalid:";
        for (const auto& v : diag.violations) msg += " " + v + ";";
        throw ConfigError(msg);
    }
    cfg.warnings = diag.flags;
    return cfg;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += fmt(v[i]);
    }
    return out;
}

template <std::size_t N>
std::string fmt(const std::array<double, N>& v) {
    return fmt(std::vector<double>(v.begin(), v.end()));
}

} // namespace

SimulationConfig parse_config(const std::string& text) { return assemble(tokenize(text)); }

SimulationConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const SimulationConfig& cfg) {
    std::ostringstream os;
    os << "[background]\n";
    const FactorModel& f = cfg.model.factors();
    if (auto* s = std::get_if<StaticFactors>(&f)) {
        os << "type = static\n";
        os << "A = " << fmt(s->scale) << "\n";
    } else if (auto* pl = std::get_if<PowerLawFactors>(&f)) {
        os << "type = powerlaw\n";
        os << "a0 = " << fmt(pl->amplitude) << "\n";
        os << "p = " << fmt(pl->exponent) << "\n";
        os << "t_ref = " << fmt(pl->t_ref) << "\n";
    } else if (auto* iso = std::get_if<IsotropicFactors>(&f)) {
        if (auto* ss = std::get_if<ScalarStaticFactor>(&iso->axis)) {
            os << "type = isotropic_static\n";
            os << "A = " << fmt(ss->scale) << "\n";
        } else if (auto* sp = std::get_if<ScalarPowerLawFactor>(&iso->axis)) {
            os << "type = isotropic_powerlaw\n";
            os << "a0 = " << fmt(sp->amplitude) << "\n";
            os << "p = " << fmt(sp->exponent) << "\n";
            os << "t_ref = " << fmt(sp->t_ref) << "\n";
        } else if (auto* st = std::get_if<ScalarTableFactor>(&iso->axis)) {
            os << "type = isotropic_tabulated\n";
            os << "times = " << fmt(st->times) << "\n";
            os << "values = " << fmt(st->values) << "\n";
        }
    } else if (auto* tab = std::get_if<TabulatedFactors>(&f)) {
        os << "type = tabulated\n";
        os << "times = " << fmt(tab->times) << "\n";
        os << "a1 = " << fmt(tab->values[0]) << "\n";
        os << "a2 = " << fmt(tab->values[1]) << "\n";
        os << "a3 = " << fmt(tab->values[2]) << "\n";
    }
    if (cfg.validity_override.size() == 2)
        os << "validity = " << fmt(cfg.validity_override) << "\n";

    os << "\n[run]\n";
    os << "mass = " << fmt(cfg.mass) << "\n";
    os << "t0 = " << fmt(cfg.t0) << "\n";
    os << "t1 = " << fmt(cfg.t1) << "\n";
    os << "output_times = " << fmt(cfg.output_times) << "\n";
    os << "formulation = "
       << (cfg.formulation == Formulation::suv
               ? "suv"
               : cfg.formulation == Formulation::complex_pair ? "complex" : "dirac")
       << "\n";
    os << "strategy = " << (cfg.strategy == StrategyChoice::literal ? "literal" : "derived")
       << "\n";
    os << "t23_z_plus = " << (cfg.stress.t23_z_plus ? "true" : "false") << "\n";
    os << "threads = " << cfg.threads << "\n";

    os << "\n[grid]\n";
    os << "k_min = " << fmt(cfg.grid.k_min) << "\n";
    os << "k_max = " << fmt(cfg.grid.k_max) << "\n";
    os << "n_k = " << cfg.grid.n_k << "\n";
    os << "n_theta = " << cfg.grid.n_theta << "\n";
    os << "n_phi = " << cfg.grid.n_phi << "\n";

    os << "\n[integrator]\n";
    os << "method = "
       << (cfg.integrator.method == IntegratorConfig::Method::adaptive54 ? "adaptive" : "rk4")
       << "\n";
    os << "rel_tol = " << fmt(cfg.integrator.rel_tol) << "\n";
    os << "abs_tol = " << fmt(cfg.integrator.abs_tol) << "\n";
    os << "max_step = " << fmt(cfg.integrator.max_step) << "\n";
    os << "initial_step = " << fmt(cfg.integrator.initial_step) << "\n";
    os << "max_steps = " << cfg.integrator.max_steps << "\n";

    os << "\n[output]\n";
    os << "dir = " << cfg.out_dir << "\n";
    return os.str();
}

std::uint64_t config_digest(const SimulationConfig& cfg) {
    // FNV-1a over the canonical serialization of the run content. Thread
    // count and output directory are execution parameters, not content, so
    // two runs of the same physics hash identically.
    SimulationConfig content = cfg;
    content.threads = 0;
    content.out_dir = "out";
    const std::string text = serialize_config(content);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_digest_hex(const SimulationConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(config_digest(cfg)));
    return buf;
}

CouplingStrategy make_strategy(StrategyChoice choice) {
    return choice == StrategyChoice::literal ? CouplingStrategy::literal_omega_dot()
                                             : CouplingStrategy::derived_connection();
}

} // namespace anisofermi
