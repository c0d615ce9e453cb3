#include "hqs/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "hqs/errors.hpp"

namespace hqs {

void SystemParams::validate() const {
    if (kappa < 0 || gamma_h < 0 || gamma_p < 0 || delta_width < 0)
        throw ConfigError("rates kappa, gamma_h, gamma_p and width delta must be non-negative");
    if (n_spins < 1) throw ConfigError("n_spins must be >= 1");
    if (delta_c <= 0) throw ConfigError("delta_c must be positive");
    if (std::abs(eta) >= delta_c)
        throw ConfigError("drive exceeds parametric instability threshold (|eta| >= delta_c)");
}

double squeezing_parameter(double eta, double delta_c) {
    if (delta_c <= 0) throw std::invalid_argument("delta_c must be positive");
    if (std::abs(eta) >= delta_c)
        throw std::domain_error("drive exceeds parametric instability threshold");
    return 0.5 * std::atanh(eta / delta_c);
}

double drive_for_r(double r, double delta_c) {
    if (delta_c <= 0) throw std::invalid_argument("delta_c must be positive");
    return delta_c * std::tanh(2.0 * r);
}

double effective_detuning(double delta_c, double r) {
    return delta_c / std::cosh(2.0 * r);
}

double transformed_coupling(double g, double r) {
    if (g < 0) throw std::invalid_argument("coupling must be non-negative");
    return 0.5 * g * std::exp(r);
}

SqueezedFrame make_squeezed_frame(double eta, double delta_c) {
    SqueezedFrame f;
    f.r = squeezing_parameter(eta, delta_c);
    f.delta_c_eff = effective_detuning(delta_c, f.r);
    f.coupling_scale_plus = std::exp(f.r);
    f.coupling_scale_minus = std::exp(-f.r);
    return f;
}

namespace {

// Splits N into M multiplicities of floor(N/M) each, handing the remainder
// to the classes closest to the center of the list.
std::vector<long> central_multiplicities(long n, int m) {
    std::vector<long> mult(m, n / m);
    long rem = n % m;
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    const double mid = 0.5 * (m - 1);
    std::stable_sort(order.begin(), order.end(), [mid](int a, int b) {
        return std::abs(a - mid) < std::abs(b - mid);
    });
    for (long i = 0; i < rem; ++i) mult[order[i]] += 1;
    return mult;
}

SpinClasses assemble(const SystemParams& p, std::vector<double> positions) {
    const int m = static_cast<int>(positions.size());
    const double g = p.omega_coll / std::sqrt(static_cast<double>(p.n_spins));
    const auto mult = central_multiplicities(p.n_spins, m);
    SpinClasses out;
    out.total = p.n_spins;
    out.classes.reserve(m);
    for (int j = 0; j < m; ++j)
        out.classes.push_back({positions[j], g, mult[j]});
    return out;
}

}  // namespace

SpinClasses discretize_gaussian(const SystemParams& params, int n_classes) {
    if (n_classes < 1) throw std::invalid_argument("n_classes must be >= 1");
    if (n_classes > params.n_spins)
        throw std::invalid_argument("n_classes must not exceed n_spins");

    std::vector<double> pos(n_classes, params.mean_spin_detuning);
    if (params.delta_width > 0 && n_classes > 1) {
        boost::math::normal_distribution<double> dist(params.mean_spin_detuning,
                                                      params.delta_width);
        for (int j = 0; j < n_classes; ++j) {
            const double q = (j + 0.5) / n_classes;
            pos[j] = boost::math::quantile(dist, q);
        }
    }
    return assemble(params, std::move(pos));
}

SpinClasses discretize_gaussian_sampled(const SystemParams& params, int n_classes,
                                        std::uint64_t seed) {
    if (n_classes < 1) throw std::invalid_argument("n_classes must be >= 1");
    if (n_classes > params.n_spins)
        throw std::invalid_argument("n_classes must not exceed n_spins");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(params.mean_spin_detuning, params.delta_width);
    std::vector<double> pos(n_classes);
    for (auto& x : pos) x = params.delta_width > 0 ? dist(rng) : params.mean_spin_detuning;
    std::sort(pos.begin(), pos.end());
    return assemble(params, std::move(pos));
}

}  // namespace hqs
