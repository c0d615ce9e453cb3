#ifndef HQS_OBSERVABLES_HPP
#define HQS_OBSERVABLES_HPP

#include <utility>
#include <vector>

#include "hqs/operators.hpp"
#include "hqs/semiclassical.hpp"

namespace hqs {

/// Phase-space grid of the Wigner quasiprobability W(p, q).
struct WignerGrid {
    Eigen::VectorXd p_axis;
    Eigen::VectorXd q_axis;
    Eigen::MatrixXd values;  ///< values(ip, iq) = W(p_axis[ip], q_axis[iq])
    double cell_area = 0.0;

    double grid_sum() const { return values.sum() * cell_area; }
};

/// Exponential envelope fit n(t) = n0 * exp(-zeta * omega0 * t).
struct DecayFit {
    double zeta = 0.0;
    double n0 = 0.0;
    double residual_std = 0.0;  ///< linear-space std between peaks and fit
    std::vector<std::pair<double, double>> peaks;
};

/// Partial trace over all spin factors; Hermitian, unit trace.
Eigen::MatrixXcd reduce_to_cavity(const DensitySuperket& rho);

/// sqrt(<psi0| rho_c |psi0>) for a normalized pure cavity target.
double fidelity(const Eigen::MatrixXcd& rho_c, const Eigen::VectorXcd& psi0);

/// Wigner function on a uniform grid, evaluated through the Fock-basis
/// expansion with generalized Laguerre polynomials.
WignerGrid wigner(const Eigen::MatrixXcd& rho_c, std::pair<double, double> p_range,
                  std::pair<double, double> q_range, int resolution);

/// Strict local maxima with relative prominence >= rel_prominence (default
/// 1e-3); the global maximum is always included.
std::vector<std::pair<double, double>> peak_envelope(const TimeSeries& series,
                                                     double rel_prominence = 1e-3);

/// Least-squares fit of log(n) vs t through the given peaks; requires at
/// least two positive peak values.
DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& peaks, double omega0);

}  // namespace hqs

#endif
