#ifndef HQS_RUN_HPP
#define HQS_RUN_HPP

#include <string>
#include <vector>

#include "hqs/config.hpp"
#include "hqs/observables.hpp"

namespace hqs {

/// Reference frequency for the dimensionless decay rate zeta [MHz].
inline constexpr double kReferenceOmega0 = 10.0;

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RunOutputs {
    std::vector<std::string> files;
    std::vector<std::string> warnings;
};

/// Executes one run configuration, writing CSV outputs into
/// config.output_dir. Throws ConfigError / IntegrationError /
/// PropagationError / IoError on failure.
RunOutputs run(const RunConfig& config);

/// One semiclassical point: returns the squeezed-frame photon-number series
/// and its decay fit (falling back to the raw series when fewer than two
/// usable peaks exist).
struct SemiclassicalPoint {
    TimeSeries n_series;
    MeanFieldTrajectory trajectory;
    DecayFit fit;
};
SemiclassicalPoint semiclassical_point(const RunConfig& config, double r, double delta_width);

/// Effective parameters for one run point: eta from r, width from delta, and
/// the mean spin detuning pinned to the effective cavity detuning unless
/// overridden.
SystemParams resolve_params(const RunConfig& config, double r, double delta_width);

}  // namespace hqs

#endif
