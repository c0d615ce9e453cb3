#ifndef HQS_CONFIG_HPP
#define HQS_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hqs/model.hpp"
#include "hqs/operators.hpp"
#include "hqs/propagate.hpp"

namespace hqs {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum class RunMode { Semiclassical, Quantum, Wigner, Sweep };

/// Validated run description parsed from a flat key = value document.
struct RunConfig {
    RunMode mode = RunMode::Semiclassical;
    SystemParams params;  ///< eta is derived per run point from r
    int n_classes = 1;
    int n_spins_quantum = 1;
    int fock_cutoff = 10;
    Frame frame = Frame::Squeezed;
    std::vector<double> r_values;
    std::vector<double> delta_values;  ///< sweep mode only
    PropagatorConfig propagator;
    std::string initial_state = "super:1,2";
    double t_end = 0.0;
    double dt_out = 0.0;
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    std::string sampling = "quantile";  ///< quantile | random
    double peak_prominence = 1e-3;
    double wigner_extent = 6.0;
    int wigner_resolution = 101;
    int workers = 0;  ///< 0 = logical CPU count
    bool save_cavity_states = false;
    bool mean_detuning_overridden = false;
    std::string note;  ///< free-form, copied into output headers
};

/// Parses the documented key = value schema. Throws ConfigError with key
/// path and line number on unknown keys, missing required keys or invariant
/// violations.
RunConfig parse_config(const std::string& text);

/// Canonical serialization; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);

/// Named parameter sets: fig2a, fig2b, fig3-desk.
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Human-readable key schema (simulate presets --schema).
std::string schema_text();

/// FNV-1a hash of the canonical serialization, recorded in output headers.
std::uint64_t config_hash(const RunConfig& config);

/// Parses an initial cavity state spec ("fock:N" or "super:N1,N2") into a
/// normalized Fock-basis ket of length fock_cutoff.
Eigen::VectorXcd parse_initial_state(const std::string& spec, int fock_cutoff);

}  // namespace hqs

#endif
