#include "hqs/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "hqs/errors.hpp"

namespace hqs {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::vector<double> parse_list(const std::string& value, const std::string& key, int line) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                              "': invalid number '" + item + "'");
        }
    }
    return out;
}

double parse_num(const std::string& value, const std::string& key, int line) {
    const auto v = parse_list(value, key, line);
    if (v.size() != 1)
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "' expects a single number");
    return v[0];
}

const std::vector<std::string> kRequiredKeys = {"mode", "delta_c", "omega", "t_end", "dt_out"};

const std::vector<std::string> kKnownKeys = {
    "mode",         "delta_c",        "omega",          "eta",
    "kappa",        "gamma_h",        "gamma_p",        "delta",
    "n_spins",      "mean_spin_detuning", "n_classes",  "n_spins_quantum",
    "fock_cutoff",  "frame",          "r",              "r_values",
    "delta_values", "method",         "dt",             "svd_cutoff",
    "max_rank",     "krylov_tol",     "initial_state",  "t_end",
    "dt_out",       "output_dir",     "seed",           "sampling",
    "peak_prominence", "wigner_extent", "wigner_resolution", "workers",
    "save_cavity_states", "note"};

}  // namespace

Eigen::VectorXcd parse_initial_state(const std::string& spec, int fock_cutoff) {
    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(fock_cutoff);
    try {
    const auto colon = spec.find(':');
    const std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "fock") {
        const int n = std::stoi(args);
        if (n < 0 || n >= fock_cutoff)
            throw ConfigError("initial_state fock level out of range: " + spec);
        ket[n] = 1.0;
    } else if (kind == "super") {
        std::stringstream ss(args);
        std::string item;
        int count = 0;
        while (std::getline(ss, item, ',')) {
            const int n = std::stoi(trim(item));
            if (n < 0 || n >= fock_cutoff)
                throw ConfigError("initial_state fock level out of range: " + spec);
            ket[n] = 1.0;
            ++count;
        }
        if (count < 1) throw ConfigError("initial_state super needs at least one level");
        ket /= std::sqrt(static_cast<double>(count));
    } else {
        throw ConfigError("unknown initial_state spec '" + spec +
                          "' (expected fock:N or super:N1,N2)");
    }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("malformed initial_state spec '" + spec +
                          "' (expected fock:N or super:N1,N2)");
    }
    return ket;
}

RunConfig parse_config(const std::string& text) {
    std::map<std::string, std::pair<std::string, int>> kv;
    {
        std::stringstream ss(text);
        std::string line;
        int lineno = 0;
        while (std::getline(ss, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
                throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            kv[key] = {value, lineno};
        }
    }

    std::string missing;
    for (const auto& k : kRequiredKeys)
        if (!kv.count(k)) missing += (missing.empty() ? "" : ", ") + k;
    if (!missing.empty())
        throw ConfigError("missing required keys: " + missing +
                          " (required: mode, delta_c, omega, t_end, dt_out)");

    RunConfig c;
    auto get = [&](const char* key) -> std::pair<std::string, int>* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto num = [&](const char* key, double def) {
        auto* e = get(key);
        return e ? parse_num(e->first, key, e->second) : def;
    };

    {
        const auto& [value, line] = kv.at("mode");
        if (value == "semiclassical") c.mode = RunMode::Semiclassical;
        else if (value == "quantum") c.mode = RunMode::Quantum;
        else if (value == "wigner") c.mode = RunMode::Wigner;
        else if (value == "sweep") c.mode = RunMode::Sweep;
        else throw ConfigError("line " + std::to_string(line) + ": key 'mode': unknown mode '" + value + "'");
    }

    c.params.delta_c = num("delta_c", 0.0);
    c.params.omega_coll = num("omega", 0.0);
    c.params.kappa = num("kappa", 0.0);
    c.params.gamma_h = num("gamma_h", 0.0);
    c.params.gamma_p = num("gamma_p", 0.0);
    c.params.delta_width = num("delta", 0.0);
    c.params.n_spins = static_cast<long>(num("n_spins", 1.0));
    if (auto* e = get("mean_spin_detuning")) {
        c.params.mean_spin_detuning = parse_num(e->first, "mean_spin_detuning", e->second);
        c.mean_detuning_overridden = true;
    }
    c.n_classes = static_cast<int>(num("n_classes", 1.0));
    c.n_spins_quantum = static_cast<int>(num("n_spins_quantum", 1.0));
    c.fock_cutoff = static_cast<int>(num("fock_cutoff", 10.0));

    if (auto* e = get("frame")) {
        if (e->first == "lab") c.frame = Frame::Lab;
        else if (e->first == "squeezed") c.frame = Frame::Squeezed;
        else throw ConfigError("line " + std::to_string(e->second) + ": key 'frame': expected lab|squeezed");
    }

    const int r_sources = (get("r") != nullptr) + (get("r_values") != nullptr) + (get("eta") != nullptr);
    if (r_sources > 1)
        throw ConfigError("keys r, r_values and eta are mutually exclusive");
    if (auto* e = get("r")) c.r_values = {parse_num(e->first, "r", e->second)};
    if (auto* e = get("r_values")) c.r_values = parse_list(e->first, "r_values", e->second);
    if (auto* e = get("eta")) {
        const double eta = parse_num(e->first, "eta", e->second);
        try {
            c.r_values = {squeezing_parameter(eta, c.params.delta_c)};
        } catch (const std::exception& ex) {
            throw ConfigError("line " + std::to_string(e->second) + ": key 'eta': " + ex.what());
        }
    }
    if (c.r_values.empty()) {
        if (c.mode == RunMode::Sweep)
            throw ConfigError("sweep mode requires a non-empty r_values list");
        c.r_values = {0.0};
    }
    if (auto* e = get("delta_values"))
        c.delta_values = parse_list(e->first, "delta_values", e->second);
    if (c.delta_values.empty()) c.delta_values = {c.params.delta_width};

    if (auto* e = get("method")) {
        if (e->first == "dense-expm") c.propagator.method = PropagationMethod::DenseExpm;
        else if (e->first == "trotter2") c.propagator.method = PropagationMethod::Trotter2;
        else if (e->first == "trotter2-truncated")
            c.propagator.method = PropagationMethod::Trotter2Truncated;
        else throw ConfigError("line " + std::to_string(e->second) +
                               ": key 'method': expected dense-expm|trotter2|trotter2-truncated");
    }
    c.propagator.dt = num("dt", c.propagator.dt);
    c.propagator.svd_cutoff = num("svd_cutoff", 0.0);
    if (auto* e = get("max_rank"))
        c.propagator.max_rank = static_cast<int>(parse_num(e->first, "max_rank", e->second));
    c.propagator.krylov_tol = num("krylov_tol", c.propagator.krylov_tol);

    if (auto* e = get("initial_state")) c.initial_state = e->first;
    c.t_end = num("t_end", 0.0);
    c.dt_out = num("dt_out", 0.0);
    if (auto* e = get("output_dir")) c.output_dir = e->first;
    c.seed = static_cast<std::uint64_t>(num("seed", 0.0));
    if (auto* e = get("sampling")) {
        if (e->first != "quantile" && e->first != "random")
            throw ConfigError("line " + std::to_string(e->second) +
                              ": key 'sampling': expected quantile|random");
        c.sampling = e->first;
    }
    c.peak_prominence = num("peak_prominence", 1e-3);
    c.wigner_extent = num("wigner_extent", 6.0);
    c.wigner_resolution = static_cast<int>(num("wigner_resolution", 101.0));
    c.workers = static_cast<int>(num("workers", 0.0));
    if (auto* e = get("save_cavity_states")) {
        if (e->first != "true" && e->first != "false")
            throw ConfigError("line " + std::to_string(e->second) +
                              ": key 'save_cavity_states': expected true|false");
        c.save_cavity_states = e->first == "true";
    }
    if (auto* e = get("note")) c.note = e->first;

    // model-level invariants
    c.params.validate();
    for (double r : c.r_values) {
        const double eta = drive_for_r(r, c.params.delta_c);
        if (std::abs(eta) >= c.params.delta_c)
            throw ConfigError("key 'r': drive exceeds parametric instability threshold");
    }
    if (c.t_end <= 0 && c.mode != RunMode::Wigner)
        throw ConfigError("key 't_end': must be positive");
    if (c.dt_out <= 0) throw ConfigError("key 'dt_out': must be positive");
    if (c.mode == RunMode::Semiclassical || c.mode == RunMode::Sweep) {
        if (c.n_classes < 1 || c.n_classes > c.params.n_spins)
            throw ConfigError("key 'n_classes': must be in [1, n_spins]");
    }
    if (c.mode == RunMode::Quantum || c.mode == RunMode::Wigner) {
        if (c.fock_cutoff < 2) throw ConfigError("key 'fock_cutoff': must be >= 2");
        if (c.n_spins_quantum < 0) throw ConfigError("key 'n_spins_quantum': must be >= 0");
        c.propagator.validate();
        parse_initial_state(c.initial_state, c.fock_cutoff);  // validates spec string
    }
    return c;
}

std::string serialize(const RunConfig& c) {
    std::ostringstream out;
    out << "mode = ";
    switch (c.mode) {
        case RunMode::Semiclassical: out << "semiclassical"; break;
        case RunMode::Quantum: out << "quantum"; break;
        case RunMode::Wigner: out << "wigner"; break;
        case RunMode::Sweep: out << "sweep"; break;
    }
    out << "\n";
    out << "delta_c = " << fmt(c.params.delta_c) << "\n";
    out << "omega = " << fmt(c.params.omega_coll) << "\n";
    out << "kappa = " << fmt(c.params.kappa) << "\n";
    out << "gamma_h = " << fmt(c.params.gamma_h) << "\n";
    out << "gamma_p = " << fmt(c.params.gamma_p) << "\n";
    out << "delta = " << fmt(c.params.delta_width) << "\n";
    out << "n_spins = " << c.params.n_spins << "\n";
    if (c.mean_detuning_overridden)
        out << "mean_spin_detuning = " << fmt(c.params.mean_spin_detuning) << "\n";
    out << "n_classes = " << c.n_classes << "\n";
    out << "n_spins_quantum = " << c.n_spins_quantum << "\n";
    out << "fock_cutoff = " << c.fock_cutoff << "\n";
    out << "frame = " << (c.frame == Frame::Lab ? "lab" : "squeezed") << "\n";
    out << "r_values = ";
    for (std::size_t i = 0; i < c.r_values.size(); ++i)
        out << (i ? "," : "") << fmt(c.r_values[i]);
    out << "\n";
    out << "delta_values = ";
    for (std::size_t i = 0; i < c.delta_values.size(); ++i)
        out << (i ? "," : "") << fmt(c.delta_values[i]);
    out << "\n";
    out << "method = ";
    switch (c.propagator.method) {
        case PropagationMethod::DenseExpm: out << "dense-expm"; break;
        case PropagationMethod::Trotter2: out << "trotter2"; break;
        case PropagationMethod::Trotter2Truncated: out << "trotter2-truncated"; break;
    }
    out << "\n";
    out << "dt = " << fmt(c.propagator.dt) << "\n";
    out << "svd_cutoff = " << fmt(c.propagator.svd_cutoff) << "\n";
    if (c.propagator.max_rank != std::numeric_limits<int>::max())
        out << "max_rank = " << c.propagator.max_rank << "\n";
    out << "krylov_tol = " << fmt(c.propagator.krylov_tol) << "\n";
    out << "initial_state = " << c.initial_state << "\n";
    out << "t_end = " << fmt(c.t_end) << "\n";
    out << "dt_out = " << fmt(c.dt_out) << "\n";
    out << "output_dir = " << c.output_dir << "\n";
    out << "seed = " << c.seed << "\n";
    out << "sampling = " << c.sampling << "\n";
    out << "peak_prominence = " << fmt(c.peak_prominence) << "\n";
    out << "wigner_extent = " << fmt(c.wigner_extent) << "\n";
    out << "wigner_resolution = " << c.wigner_resolution << "\n";
    out << "workers = " << c.workers << "\n";
    out << "save_cavity_states = " << (c.save_cavity_states ? "true" : "false") << "\n";
    if (!c.note.empty()) out << "note = " << c.note << "\n";
    return out.str();
}

std::uint64_t config_hash(const RunConfig& config) {
    const std::string s = serialize(config);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<std::string> preset_names() { return {"fig2a", "fig2b", "fig3-desk"}; }

RunConfig preset(const std::string& name) {
    RunConfig c;
    if (name == "fig2a") {
        c.mode = RunMode::Semiclassical;
        c.params.delta_c = 70000.0;  // 70 GHz
        c.params.omega_coll = 40.0;
        c.params.delta_width = 60.0;
        c.params.n_spins = 10000;
        c.n_classes = 200;
        c.r_values = {0.0, 1.0, 2.0};
        c.delta_values = {60.0};
        c.t_end = 0.5;
        c.dt_out = 2e-4;
        // the Rabi envelope rides on a weak counter-rotating ripple; only
        // peaks that stand out by >= 1% of the global maximum belong to it
        c.peak_prominence = 1e-2;
    } else if (name == "fig2b") {
        c = preset("fig2a");
        c.mode = RunMode::Sweep;
        c.delta_values = {60.0, 70.0, 80.0};
        c.r_values.clear();
        for (int i = 0; i <= 12; ++i) c.r_values.push_back(0.2 * i);
    } else if (name == "fig3-desk") {
        c.mode = RunMode::Quantum;
        // Desk-scale stand-in for a mesoscopic-ensemble quantum run: 4 spins in
        // 10 Fock levels, with the cavity detuning reduced so the fast
        // common-mode rotation stays resolvable at desk-scale step sizes.
        c.params.delta_c = 8000.0;
        c.params.omega_coll = 40.0;
        c.params.delta_width = 30.0;
        c.params.kappa = 7.0;
        c.params.gamma_h = 7.0 / 8.0;
        c.params.gamma_p = 7.0 / 16.0;
        c.params.n_spins = 4;
        c.n_spins_quantum = 4;
        c.fock_cutoff = 10;
        c.frame = Frame::Squeezed;
        c.r_values = {0.0, 1.0, 2.0};
        c.delta_values = {30.0};
        c.propagator.method = PropagationMethod::Trotter2;
        c.propagator.dt = 5e-5;
        c.initial_state = "super:1,2";
        c.t_end = 0.15;
        c.dt_out = 4e-5;
        c.note = "desk-scale run: 4 spins stand in for the mesoscopic ensemble";
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return c;
}

std::string schema_text() {
    return R"(hqsim flat key = value configuration schema
# comments start with '#'; lists are comma-separated

mode                semiclassical | quantum | wigner | sweep   (required)
delta_c             cavity detuning [MHz]                      (required)
omega               collective coupling Omega [MHz]            (required)
t_end               simulated time [us]                        (required)
dt_out              output sampling step [us]                  (required)
kappa               cavity loss rate [MHz]                     (default 0)
gamma_h             spin radiative decay [MHz]                 (default 0)
gamma_p             spin dephasing [MHz]                       (default 0)
delta               Gaussian inhomogeneity width [MHz]         (default 0)
n_spins             physical spin count N                      (default 1)
mean_spin_detuning  center of spin distribution [MHz]          (default: effective cavity detuning)
n_classes           semiclassical frequency classes M          (default 1)
n_spins_quantum     quantum-mode spin count N_q                (default 1)
fock_cutoff         photon levels F                            (default 10)
frame               lab | squeezed (quantum modes)             (default squeezed)
r                   single squeezing parameter                 (exclusive with r_values, eta)
r_values            list of squeezing parameters               (default 0; required for sweep)
eta                 drive strength [MHz], converted to r       (exclusive with r, r_values)
delta_values        widths for sweep mode [MHz]                (default: delta)
method              dense-expm | trotter2 | trotter2-truncated (default trotter2)
dt                  internal propagator step [us]              (default 1e-4)
svd_cutoff          relative SVD cutoff, truncated mode        (default 0)
max_rank            max kept singular values, truncated mode   (default unlimited)
krylov_tol          Krylov exponential residual tolerance      (default 1e-10)
initial_state       fock:N or super:N1,N2                      (default super:1,2)
output_dir          output directory                           (default .)
seed                RNG seed for sampling = random             (default 0)
sampling            quantile | random class positions          (default quantile)
peak_prominence     relative peak prominence threshold         (default 1e-3)
wigner_extent       phase-space half-width for wigner mode     (default 6)
wigner_resolution   grid points per axis for wigner mode       (default 101)
workers             parallel sweep workers, 0 = CPU count      (default 0)
save_cavity_states  true | false                               (default false)
note                free text copied into output headers
)";
}

}  // namespace hqs
