#ifndef HQS_MODEL_HPP
#define HQS_MODEL_HPP

#include <cstdint>
#include <vector>

namespace hqs {

/// Physical rates, detunings and drive settings defining one simulation
/// instance. All rates and detunings are angular frequencies in MHz, time is
/// in microseconds. Absolute lab frequencies are never stored; the
/// rotating-frame dynamics depends only on the detunings.
struct SystemParams {
    double delta_c = 0.0;       ///< cavity detuning Delta_c [MHz]
    double omega_coll = 0.0;    ///< collective coupling Omega = sqrt(N) g [MHz]
    double eta = 0.0;           ///< parametric two-photon drive strength [MHz]
    double kappa = 0.0;         ///< cavity loss rate [MHz]
    double gamma_h = 0.0;       ///< spin radiative decay rate [MHz]
    double gamma_p = 0.0;       ///< spin dephasing rate [MHz]
    double delta_width = 0.0;   ///< Gaussian inhomogeneity width delta [MHz]
    long n_spins = 1;           ///< physical spin count N
    double mean_spin_detuning = 0.0;  ///< center of the spin detuning distribution [MHz]

    /// Throws ConfigError if rates are negative, n_spins < 1 or |eta| >= delta_c.
    void validate() const;
};

/// One frequency class of the discretized inhomogeneous ensemble.
struct SpinClass {
    double detuning = 0.0;   ///< Delta_j [MHz]
    double coupling = 0.0;   ///< g_j [MHz]
    long multiplicity = 1;   ///< N_j
};

/// Discretized spin ensemble. Invariants: sum N_j == total and
/// sum N_j g_j^2 equals the collective coupling Omega^2 it was built from.
struct SpinClasses {
    std::vector<SpinClass> classes;
    long total = 0;

    std::size_t size() const { return classes.size(); }
};

/// Squeezed-frame quantities derived from (eta, delta_c).
struct SqueezedFrame {
    double r = 0.0;                   ///< squeezing parameter
    double delta_c_eff = 0.0;         ///< effective cavity detuning [MHz]
    double coupling_scale_plus = 1.0;   ///< e^r
    double coupling_scale_minus = 1.0;  ///< e^-r
};

/// r = atanh(eta/delta_c)/2. Requires delta_c > 0; throws std::domain_error
/// with "drive exceeds parametric instability threshold" when |eta| >= delta_c.
double squeezing_parameter(double eta, double delta_c);

/// Inverse of squeezing_parameter: eta = delta_c * tanh(2r).
double drive_for_r(double r, double delta_c);

/// Effective cavity detuning in the squeezed frame, delta_c / cosh(2r).
/// Equals sqrt(delta_c^2 - eta^2), the Bogoliubov eigenfrequency.
double effective_detuning(double delta_c, double r);

/// Transformed spin-cavity coupling g * e^r / 2. Requires g >= 0.
double transformed_coupling(double g, double r);

SqueezedFrame make_squeezed_frame(double eta, double delta_c);

/// Discretizes the Gaussian detuning distribution into n_classes classes at
/// midpoint-quantile positions (class j at the (j - 1/2)/M quantile), each
/// with multiplicity N/M (remainder assigned to the central classes) and
/// identical coupling g = Omega/sqrt(N).
SpinClasses discretize_gaussian(const SystemParams& params, int n_classes);

/// Seeded random-sampling alternative to the quantile rule, for robustness
/// checks. Class positions are drawn from the Gaussian.
SpinClasses discretize_gaussian_sampled(const SystemParams& params, int n_classes,
                                        std::uint64_t seed);

}  // namespace hqs

#endif
