#include "hqs/run.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hqs/errors.hpp"
#include "hqs/propagate.hpp"

namespace hqs {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_short(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

std::ofstream open_output(const fs::path& path, const RunConfig& config,
                          const std::string& columns) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file " + path.string());
    char hash[20];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    out << "# hqsim " << kToolkitVersion << "\n";
    out << "# config_hash=" << hash << "\n";
    if (!config.note.empty()) out << "# note=" << config.note << "\n";
    out << "# columns: " << columns << "\n";
    return out;
}

SpinClasses make_classes(const SystemParams& params, int n_classes, const RunConfig& config) {
    if (config.sampling == "random")
        return discretize_gaussian_sampled(params, n_classes, config.seed);
    return discretize_gaussian(params, n_classes);
}

// Drops any peak that is exceeded by a later one. A decaying Rabi pattern
// often carries a slow beat; the non-increasing hull of the peak list is the
// quantity that actually envelopes the oscillation.
std::vector<std::pair<double, double>> envelope_hull(
    const std::vector<std::pair<double, double>>& peaks) {
    std::vector<std::pair<double, double>> keep;
    double best = -1.0;
    for (auto it = peaks.rbegin(); it != peaks.rend(); ++it)
        if (it->second > best) {
            keep.push_back(*it);
            best = it->second;
        }
    std::reverse(keep.begin(), keep.end());
    return keep;
}

DecayFit fit_series(const TimeSeries& series, double prominence) {
    auto peaks = envelope_hull(peak_envelope(series, prominence));
    try {
        return fit_decay_rate(peaks, kReferenceOmega0);
    } catch (const std::exception&) {
        // fewer than two usable peaks (overdamped collapse): fit the raw
        // series above a noise floor so the slope reflects the collapse and
        // not the numerical tail
        const double vmax = *std::max_element(series.values.begin(), series.values.end());
        const double floor = 1e-4 * vmax;
        std::vector<std::pair<double, double>> samples;
        for (std::size_t i = 0; i < series.times.size(); ++i)
            if (series.values[i] >= floor) samples.emplace_back(series.times[i], series.values[i]);
        return fit_decay_rate(samples, kReferenceOmega0);
    }
}

struct QuantumPoint {
    TimeSeries fidelity_series;
    Eigen::MatrixXcd final_cavity_state;
    std::vector<std::string> warnings;
};

QuantumPoint quantum_point(const RunConfig& config, double r) {
    SystemParams p = resolve_params(config, r, config.params.delta_width);
    p.n_spins = config.n_spins_quantum;
    const HilbertSpec spec{config.fock_cutoff, config.n_spins_quantum};

    SpinClasses classes;
    classes.total = 0;
    if (config.n_spins_quantum > 0)
        classes = make_classes(p, config.n_spins_quantum, config);

    const Liouvillian L = build_liouvillian(spec, p, classes, config.frame, r);
    const Eigen::VectorXcd psi0 = parse_initial_state(config.initial_state, config.fock_cutoff);
    const DensitySuperket rho0 = DensitySuperket::pure_cavity_product(psi0, spec);

    QuantumPoint out;
    out.fidelity_series.label = "fidelity";
    Eigen::MatrixXcd last;
    evolve_observe(
        L, rho0, config.t_end, config.dt_out, config.propagator,
        [&](double t, const DensitySuperket& rho) {
            last = reduce_to_cavity(rho);
            out.fidelity_series.times.push_back(t);
            out.fidelity_series.values.push_back(fidelity(last, psi0));
        },
        &out.warnings);
    out.final_cavity_state = std::move(last);
    return out;
}

}  // namespace

SystemParams resolve_params(const RunConfig& config, double r, double delta_width) {
    SystemParams p = config.params;
    p.eta = drive_for_r(r, p.delta_c);
    p.delta_width = delta_width;
    if (!config.mean_detuning_overridden)
        p.mean_spin_detuning = effective_detuning(p.delta_c, r);
    p.validate();
    return p;
}

SemiclassicalPoint semiclassical_point(const RunConfig& config, double r, double delta_width) {
    const SystemParams p = resolve_params(config, r, delta_width);
    const SpinClasses classes = make_classes(p, config.n_classes, config);
    const MeanFieldState init = initial_state_unit_photon(p, classes, r);

    SemiclassicalPoint out;
    out.trajectory = integrate(init, p, classes, config.t_end, config.dt_out);
    out.n_series = out.trajectory.photon_number(r);
    out.fit = fit_series(out.n_series, config.peak_prominence);
    return out;
}

RunOutputs run(const RunConfig& config) {
    RunOutputs result;
    fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    auto emit = [&](const fs::path& p) { result.files.push_back(p.string()); };

    switch (config.mode) {
        case RunMode::Semiclassical: {
            auto fit_out = open_output(dir / "decay_fit.csv", config, "r,delta,zeta,residual_std");
            emit(dir / "decay_fit.csv");
            for (double r : config.r_values) {
                const auto point = semiclassical_point(config, r, config.params.delta_width);
                for (const auto& w : point.trajectory.warnings) result.warnings.push_back(w);

                const std::string name = config.r_values.size() == 1
                                             ? "n_t.csv"
                                             : "n_t_r" + fmt_short(r) + ".csv";
                auto out = open_output(dir / name, config, "t,n,abs_a2,re_a,im_a");
                emit(dir / name);
                for (std::size_t i = 0; i < point.n_series.times.size(); ++i) {
                    const auto& s = point.trajectory.states[i];
                    out << fmt(point.n_series.times[i]) << "," << fmt(point.n_series.values[i])
                        << "," << fmt(std::norm(s.a)) << "," << fmt(s.a.real()) << ","
                        << fmt(s.a.imag()) << "\n";
                }
                fit_out << fmt(r) << "," << fmt(config.params.delta_width) << ","
                        << fmt(point.fit.zeta) << "," << fmt(point.fit.residual_std) << "\n";
            }
            break;
        }
        case RunMode::Quantum: {
            for (double r : config.r_values) {
                const auto point = quantum_point(config, r);
                for (const auto& w : point.warnings) result.warnings.push_back(w);

                const std::string name = config.r_values.size() == 1
                                             ? "fidelity.csv"
                                             : "fidelity_r" + fmt_short(r) + ".csv";
                auto out = open_output(dir / name, config, "t,F");
                emit(dir / name);
                for (std::size_t i = 0; i < point.fidelity_series.times.size(); ++i)
                    out << fmt(point.fidelity_series.times[i]) << ","
                        << fmt(point.fidelity_series.values[i]) << "\n";

                if (config.save_cavity_states) {
                    const std::string rname = "rho_c_final_r" + fmt_short(r) + ".csv";
                    auto rout = open_output(dir / rname, config, "n,m,re,im");
                    emit(dir / rname);
                    const auto& rc = point.final_cavity_state;
                    for (long n = 0; n < rc.rows(); ++n)
                        for (long m = 0; m < rc.cols(); ++m)
                            rout << n << "," << m << "," << fmt(rc(n, m).real()) << ","
                                 << fmt(rc(n, m).imag()) << "\n";
                }
            }
            break;
        }
        case RunMode::Wigner: {
            const double r = config.r_values.front();
            Eigen::MatrixXcd rho_c;
            if (config.t_end > 0) {
                const auto point = quantum_point(config, r);
                for (const auto& w : point.warnings) result.warnings.push_back(w);
                rho_c = point.final_cavity_state;
            } else {
                const Eigen::VectorXcd psi0 =
                    parse_initial_state(config.initial_state, config.fock_cutoff);
                rho_c = psi0 * psi0.adjoint();
            }
            const double e = config.wigner_extent;
            const auto grid = wigner(rho_c, {-e, e}, {-e, e}, config.wigner_resolution);
            auto out = open_output(dir / "wigner.csv", config, "p,q,W");
            emit(dir / "wigner.csv");
            for (long ip = 0; ip < grid.p_axis.size(); ++ip)
                for (long iq = 0; iq < grid.q_axis.size(); ++iq)
                    out << fmt(grid.p_axis[ip]) << "," << fmt(grid.q_axis[iq]) << ","
                        << fmt(grid.values(ip, iq)) << "\n";
            break;
        }
        case RunMode::Sweep: {
            struct Row {
                double delta, r, zeta, residual_std;
                int n_peaks;
            };
            std::vector<std::pair<double, double>> tasks;  // (delta, r), sorted
            for (double d : config.delta_values)
                for (double r : config.r_values) tasks.emplace_back(d, r);
            std::sort(tasks.begin(), tasks.end());

            std::vector<Row> rows(tasks.size());
            std::vector<std::string> errors;
            std::mutex err_mutex;
            std::atomic<std::size_t> next{0};
            const unsigned hw = std::thread::hardware_concurrency();
            const unsigned n_workers = std::min<std::size_t>(
                tasks.size(), config.workers > 0 ? config.workers : (hw ? hw : 1));

            auto worker = [&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) return;
                    try {
                        const auto [d, r] = tasks[i];
                        const auto point = semiclassical_point(config, r, d);
                        rows[i] = {d, r, point.fit.zeta, point.fit.residual_std,
                                   static_cast<int>(point.fit.peaks.size())};
                    } catch (const std::exception& e) {
                        std::lock_guard<std::mutex> lock(err_mutex);
                        errors.push_back(e.what());
                    }
                }
            };
            std::vector<std::thread> pool;
            for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
            if (!errors.empty()) throw IntegrationError("sweep point failed: " + errors.front(), 0.0);

            auto out = open_output(dir / "sweep.csv", config, "delta,r,zeta,residual_std,n_peaks");
            emit(dir / "sweep.csv");
            for (const auto& row : rows)
                out << fmt(row.delta) << "," << fmt(row.r) << "," << fmt(row.zeta) << ","
                    << fmt(row.residual_std) << "," << row.n_peaks << "\n";
            break;
        }
    }
    return result;
}

}  // namespace hqs
