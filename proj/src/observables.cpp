#include "hqs/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/laguerre.hpp>

namespace hqs {

using cd = std::complex<double>;

Eigen::MatrixXcd reduce_to_cavity(const DensitySuperket& rho) {
    const long f = rho.basis.fock_cutoff;
    const long s = rho.basis.spin_dim();
    const long dim = rho.basis.dim();
    Eigen::MatrixXcd rc = Eigen::MatrixXcd::Zero(f, f);
    for (long ss = 0; ss < s; ++ss)
        for (long n = 0; n < f; ++n)
            for (long m = 0; m < f; ++m)
                rc(n, m) += rho.v[(ss * f + n) * dim + (ss * f + m)];
    return rc;
}

double fidelity(const Eigen::MatrixXcd& rho_c, const Eigen::VectorXcd& psi0) {
    if (std::abs(psi0.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("target state is not normalized");
    double overlap = std::real(psi0.dot(rho_c * psi0));
    if (overlap < 0.0) overlap = 0.0;  // clamp round-off
    return std::sqrt(std::min(overlap, 1.0));
}

WignerGrid wigner(const Eigen::MatrixXcd& rho_c, std::pair<double, double> p_range,
                  std::pair<double, double> q_range, int resolution) {
    if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
    const int f = static_cast<int>(rho_c.rows());

    WignerGrid grid;
    grid.p_axis = Eigen::VectorXd::LinSpaced(resolution, p_range.first, p_range.second);
    grid.q_axis = Eigen::VectorXd::LinSpaced(resolution, q_range.first, q_range.second);
    const double dp = grid.p_axis[1] - grid.p_axis[0];
    const double dq = grid.q_axis[1] - grid.q_axis[0];
    grid.cell_area = dp * dq;
    grid.values.resize(resolution, resolution);

    // sqrt(n!/m!) for m >= n
    Eigen::MatrixXd fact_ratio = Eigen::MatrixXd::Zero(f, f);
    for (int n = 0; n < f; ++n) {
        double r = 1.0;
        fact_ratio(n, n) = 1.0;
        for (int m = n + 1; m < f; ++m) {
            r /= m;
            fact_ratio(n, m) = std::sqrt(r);
        }
    }

    const double inv_pi = 1.0 / M_PI;
    for (int ip = 0; ip < resolution; ++ip) {
        for (int iq = 0; iq < resolution; ++iq) {
            const cd alpha(grid.p_axis[ip] / std::sqrt(2.0), grid.q_axis[iq] / std::sqrt(2.0));
            const double a2 = 4.0 * std::norm(alpha);
            const double pref = std::exp(-2.0 * std::norm(alpha));
            double w = 0.0;
            for (int n = 0; n < f; ++n) {
                const double sign = (n % 2 == 0) ? 1.0 : -1.0;
                w += sign * std::real(rho_c(n, n)) * boost::math::laguerre(n, a2);
                cd pw(1.0, 0.0);
                for (int m = n + 1; m < f; ++m) {
                    pw *= 2.0 * alpha;
                    const double lag = boost::math::laguerre(static_cast<unsigned>(n),
                                                             static_cast<unsigned>(m - n), a2);
                    w += 2.0 * sign * fact_ratio(n, m) * lag * std::real(rho_c(n, m) * pw);
                }
            }
            grid.values(ip, iq) = inv_pi * pref * w;
        }
    }
    return grid;
}

std::vector<std::pair<double, double>> peak_envelope(const TimeSeries& series,
                                                     double rel_prominence) {
    const auto& t = series.times;
    const auto& v = series.values;
    if (v.size() < 3) throw std::invalid_argument("series too short for peak detection");

    const double vmax = *std::max_element(v.begin(), v.end());
    const std::size_t imax =
        std::distance(v.begin(), std::max_element(v.begin(), v.end()));  // first max

    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (!(v[i] > v[i - 1] && v[i] > v[i + 1])) continue;
        // prominence: drop to the highest base before higher terrain on each side
        double left_base = v[i], right_base = v[i];
        for (std::size_t k = i; k-- > 0;) {
            left_base = std::min(left_base, v[k]);
            if (v[k] > v[i]) break;
        }
        for (std::size_t k = i + 1; k < v.size(); ++k) {
            right_base = std::min(right_base, v[k]);
            if (v[k] > v[i]) break;
        }
        const double prominence = v[i] - std::max(left_base, right_base);
        if (prominence >= rel_prominence * vmax) idx.push_back(i);
    }
    if (std::find(idx.begin(), idx.end(), imax) == idx.end()) idx.push_back(imax);
    std::sort(idx.begin(), idx.end());

    std::vector<std::pair<double, double>> peaks;
    peaks.reserve(idx.size());
    for (auto i : idx) peaks.emplace_back(t[i], v[i]);
    return peaks;
}

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& peaks, double omega0) {
    std::vector<std::pair<double, double>> pos;
    for (const auto& p : peaks)
        if (p.second > 0.0) pos.push_back(p);
    if (pos.size() < 2)
        throw std::runtime_error("decay fit requires at least two positive peaks");
    if (omega0 <= 0) throw std::invalid_argument("omega0 must be positive");

    double st = 0, sl = 0, stt = 0, stl = 0;
    for (const auto& [t, n] : pos) {
        const double l = std::log(n);
        st += t;
        sl += l;
        stt += t * t;
        stl += t * l;
    }
    const double k = static_cast<double>(pos.size());
    const double denom = k * stt - st * st;
    const double slope = denom == 0.0 ? 0.0 : (k * stl - st * sl) / denom;
    const double intercept = (sl - slope * st) / k;

    DecayFit fit;
    fit.zeta = -slope / omega0;
    fit.n0 = std::exp(intercept);
    fit.peaks = pos;
    double ss = 0;
    for (const auto& [t, n] : pos) {
        const double r = n - fit.n0 * std::exp(slope * t);
        ss += r * r;
    }
    fit.residual_std = std::sqrt(ss / k);
    return fit;
}

}  // namespace hqs
