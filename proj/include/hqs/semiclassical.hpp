#ifndef HQS_SEMICLASSICAL_HPP
#define HQS_SEMICLASSICAL_HPP

#include <complex>
#include <string>
#include <vector>

#include "hqs/model.hpp"

namespace hqs {

/// Mean-field expectation values: cavity amplitude <a>, per-class <sigma_j^->
/// and <sigma_j^z>. <sigma_j^+> is always conj(<sigma_j^->).
struct MeanFieldState {
    std::complex<double> a{0.0, 0.0};
    std::vector<std::complex<double>> sm;
    std::vector<double> sz;

    std::size_t n_classes() const { return sm.size(); }
};

/// Sampled real-valued observable.
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::string label;
};

/// Snapshots of the mean-field trajectory on the output grid.
struct MeanFieldTrajectory {
    std::vector<double> times;
    std::vector<MeanFieldState> states;
    std::vector<std::string> warnings;  ///< Bloch-bound monitor messages

    /// Squeezed-frame photon number n(t) for the given squeezing parameter.
    TimeSeries photon_number(double r) const;
};

/// Time derivative of the mean-field equations of motion:
///   d<a>/dt   = -(kappa + i Dc)<a> - i sum_j N_j g_j <s_j^-> + i eta <a>*
///   d<s_j^->/dt = -(gamma_h + 2 gamma_p + i D_j)<s_j^-> + i g_j <s_j^z><a>
///   d<s_j^z>/dt = -2 gamma_h (1 + <s_j^z>) + 2 i g_j (<s_j^-><a>* - <s_j^+><a>)
MeanFieldState rhs(const MeanFieldState& state, const SystemParams& params,
                   const SpinClasses& classes);

struct IntegratorOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
};

/// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) integration with
/// snapshots at multiples of dt_out. Deterministic for fixed inputs.
MeanFieldTrajectory integrate(const MeanFieldState& initial, const SystemParams& params,
                              const SpinClasses& classes, double t_end, double dt_out,
                              const IntegratorOptions& opts = {});

/// Squeezed-frame photon number cosh(2r)|a|^2 - sinh(2r) Re(a^2).
double photon_number_squeezed(std::complex<double> a, double r);

/// <a>(0) = e^r (real positive), all spins down. Satisfies n(0) = 1 exactly.
MeanFieldState initial_state_unit_photon(const SystemParams& params,
                                         const SpinClasses& classes, double r);

}  // namespace hqs

#endif
