#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hqs/config.hpp"
#include "hqs/errors.hpp"
#include "hqs/observables.hpp"
#include "hqs/propagate.hpp"
#include "hqs/run.hpp"
#include "hqs/semiclassical.hpp"

namespace py = pybind11;

namespace {

// n(t) for one semiclassical point, configured through the same key = value
// document the CLI accepts.
std::pair<std::vector<double>, std::vector<double>> py_semiclassical_photon_number(
    const std::string& config_text, double r) {
    const auto config = hqs::parse_config(config_text);
    const auto point = hqs::semiclassical_point(config, r, config.params.delta_width);
    return {point.n_series.times, point.n_series.values};
}

std::pair<std::vector<double>, std::vector<double>> py_decay_peaks(
    const std::vector<double>& times, const std::vector<double>& values, double prominence) {
    hqs::TimeSeries s;
    s.times = times;
    s.values = values;
    std::vector<double> pt, pv;
    for (const auto& [t, v] : hqs::peak_envelope(s, prominence)) {
        pt.push_back(t);
        pv.push_back(v);
    }
    return {pt, pv};
}

py::dict py_fit_decay_rate(const std::vector<double>& peak_times,
                           const std::vector<double>& peak_values, double omega0) {
    std::vector<std::pair<double, double>> peaks;
    for (std::size_t i = 0; i < peak_times.size(); ++i)
        peaks.emplace_back(peak_times[i], peak_values[i]);
    const auto fit = hqs::fit_decay_rate(peaks, omega0);
    py::dict out;
    out["zeta"] = fit.zeta;
    out["n0"] = fit.n0;
    out["residual_std"] = fit.residual_std;
    return out;
}

py::dict py_quantum_fidelity(const std::string& config_text, double r) {
    auto config = hqs::parse_config(config_text);
    config.r_values = {r};
    // reuse the run pipeline in-memory: evolve and record F(t)
    const auto point_cfg = config;
    hqs::SystemParams p = hqs::resolve_params(point_cfg, r, point_cfg.params.delta_width);
    p.n_spins = point_cfg.n_spins_quantum;
    const hqs::HilbertSpec spec{point_cfg.fock_cutoff, point_cfg.n_spins_quantum};
    hqs::SpinClasses classes;
    if (point_cfg.n_spins_quantum > 0)
        classes = hqs::discretize_gaussian(p, point_cfg.n_spins_quantum);
    const auto L = hqs::build_liouvillian(spec, p, classes, point_cfg.frame, r);
    const auto psi0 = hqs::parse_initial_state(point_cfg.initial_state, point_cfg.fock_cutoff);
    const auto rho0 = hqs::DensitySuperket::pure_cavity_product(psi0, spec);

    std::vector<double> times, fids;
    hqs::evolve_observe(L, rho0, point_cfg.t_end, point_cfg.dt_out, point_cfg.propagator,
                        [&](double t, const hqs::DensitySuperket& rho) {
                            times.push_back(t);
                            fids.push_back(hqs::fidelity(hqs::reduce_to_cavity(rho), psi0));
                        });
    py::dict out;
    out["t"] = times;
    out["fidelity"] = fids;
    return out;
}

py::dict py_wigner(py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>
                       rho_c,
                   double extent, int resolution) {
    const auto buf = rho_c.unchecked<2>();
    if (buf.shape(0) != buf.shape(1)) throw std::invalid_argument("rho_c must be square");
    Eigen::MatrixXcd rho(buf.shape(0), buf.shape(1));
    for (py::ssize_t i = 0; i < buf.shape(0); ++i)
        for (py::ssize_t j = 0; j < buf.shape(1); ++j) rho(i, j) = buf(i, j);

    const auto grid = hqs::wigner(rho, {-extent, extent}, {-extent, extent}, resolution);

    py::array_t<double> p(grid.p_axis.size()), q(grid.q_axis.size());
    std::copy_n(grid.p_axis.data(), grid.p_axis.size(), p.mutable_data());
    std::copy_n(grid.q_axis.data(), grid.q_axis.size(), q.mutable_data());
    py::array_t<double> w({grid.values.rows(), grid.values.cols()});
    auto wv = w.mutable_unchecked<2>();
    for (long i = 0; i < grid.values.rows(); ++i)
        for (long j = 0; j < grid.values.cols(); ++j) wv(i, j) = grid.values(i, j);

    py::dict out;
    out["p"] = std::move(p);
    out["q"] = std::move(q);
    out["W"] = std::move(w);
    out["cell_area"] = grid.cell_area;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "simulation toolkit for a parametrically driven spin-ensemble/cavity system";
    m.attr("__version__") = hqs::kToolkitVersion;

    py::register_exception<hqs::ConfigError>(m, "ConfigError");
    py::register_exception<hqs::IntegrationError>(m, "IntegrationError");
    py::register_exception<hqs::PropagationError>(m, "PropagationError");

    m.def("squeezing_parameter", &hqs::squeezing_parameter, py::arg("eta"), py::arg("delta_c"));
    m.def("drive_for_r", &hqs::drive_for_r, py::arg("r"), py::arg("delta_c"));
    m.def("effective_detuning", &hqs::effective_detuning, py::arg("delta_c"), py::arg("r"));
    m.def("transformed_coupling", &hqs::transformed_coupling, py::arg("g"), py::arg("r"));
    m.def("photon_number_squeezed", &hqs::photon_number_squeezed, py::arg("a"), py::arg("r"));

    m.def(
        "discretize_gaussian",
        [](double omega, double delta_width, double mean, long n_spins, int n_classes) {
            hqs::SystemParams p;
            p.delta_c = 1.0;  // irrelevant to the discretization
            p.omega_coll = omega;
            p.delta_width = delta_width;
            p.mean_spin_detuning = mean;
            p.n_spins = n_spins;
            std::vector<std::tuple<double, double, long>> out;
            for (const auto& c : hqs::discretize_gaussian(p, n_classes).classes)
                out.emplace_back(c.detuning, c.coupling, c.multiplicity);
            return out;
        },
        py::arg("omega"), py::arg("delta_width"), py::arg("mean"), py::arg("n_spins"),
        py::arg("n_classes"),
        "Midpoint-quantile discretization; returns (detuning, coupling, multiplicity) tuples.");

    m.def("semiclassical_photon_number", &py_semiclassical_photon_number,
          py::arg("config_text"), py::arg("r"),
          "Mean-field photon-number series (t, n) for one squeezing value.");
    m.def("quantum_fidelity", &py_quantum_fidelity, py::arg("config_text"), py::arg("r"),
          "Lindblad-propagated cavity-state fidelity series {t, fidelity}.");
    m.def("peak_envelope", &py_decay_peaks, py::arg("t"), py::arg("n"),
          py::arg("prominence") = 1e-3);
    m.def("fit_decay_rate", &py_fit_decay_rate, py::arg("peak_times"), py::arg("peak_values"),
          py::arg("omega0") = hqs::kReferenceOmega0);
    m.def("wigner", &py_wigner, py::arg("rho_c"), py::arg("extent") = 6.0,
          py::arg("resolution") = 101,
          "Wigner function of a cavity density matrix on a square (p, q) grid.");

    m.def("preset_names", &hqs::preset_names);
    m.def("preset_text", [](const std::string& name) { return hqs::serialize(hqs::preset(name)); },
          py::arg("name"));
    m.def("schema_text", &hqs::schema_text);
}
