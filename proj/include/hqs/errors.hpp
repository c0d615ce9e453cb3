#ifndef HQS_ERRORS_HPP
#define HQS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hqs {

/// Raised on malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when the ODE integrator cannot continue (e.g. step-size underflow).
/// Carries the last time that was reached successfully.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& msg, double last_good_time)
        : std::runtime_error(msg), last_good_time(last_good_time) {}
    double last_good_time;
};

/// Raised when superoperator propagation fails (Krylov non-convergence,
/// violated state invariant, ...). Carries the simulation time of failure.
class PropagationError : public std::runtime_error {
public:
    PropagationError(const std::string& msg, double time)
        : std::runtime_error(msg), time(time) {}
    double time;
};

}  // namespace hqs

#endif
