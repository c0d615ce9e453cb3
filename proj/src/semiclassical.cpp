#include "hqs/semiclassical.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "hqs/errors.hpp"

namespace hqs {

using cd = std::complex<double>;
namespace odeint = boost::numeric::odeint;

MeanFieldState rhs(const MeanFieldState& state, const SystemParams& params,
                   const SpinClasses& classes) {
    const std::size_t m = classes.size();
    if (state.sm.size() != m || state.sz.size() != m)
        throw std::invalid_argument("state dimensions do not match spin classes");

    const cd I(0.0, 1.0);
    MeanFieldState d;
    d.sm.resize(m);
    d.sz.resize(m);

    cd drive(0.0, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const auto& c = classes.classes[j];
        drive += static_cast<double>(c.multiplicity) * c.coupling * state.sm[j];
        d.sm[j] = -(params.gamma_h + 2.0 * params.gamma_p + I * c.detuning) * state.sm[j] +
                  I * c.coupling * state.sz[j] * state.a;
        // 2i g (sm a* - conj(sm) a) is real: -4 g Im(sm a*)
        d.sz[j] = -2.0 * params.gamma_h * (1.0 + state.sz[j]) -
                  4.0 * c.coupling * std::imag(state.sm[j] * std::conj(state.a));
    }
    d.a = -(params.kappa + I * params.delta_c) * state.a - I * drive +
          I * params.eta * std::conj(state.a);
    return d;
}

double photon_number_squeezed(std::complex<double> a, double r) {
    return std::cosh(2.0 * r) * std::norm(a) - std::sinh(2.0 * r) * std::real(a * a);
}

MeanFieldState initial_state_unit_photon(const SystemParams&, const SpinClasses& classes,
                                         double r) {
    MeanFieldState s;
    s.a = std::exp(r);
    s.sm.assign(classes.size(), cd(0.0, 0.0));
    s.sz.assign(classes.size(), -1.0);
    return s;
}

TimeSeries MeanFieldTrajectory::photon_number(double r) const {
    TimeSeries out;
    out.label = "n_squeezed";
    out.times = times;
    out.values.reserve(states.size());
    for (const auto& s : states) out.values.push_back(photon_number_squeezed(s.a, r));
    return out;
}

namespace {

using OdeState = std::vector<cd>;

OdeState pack(const MeanFieldState& s) {
    OdeState v(1 + 2 * s.n_classes());
    v[0] = s.a;
    for (std::size_t j = 0; j < s.n_classes(); ++j) {
        v[1 + j] = s.sm[j];
        v[1 + s.n_classes() + j] = cd(s.sz[j], 0.0);
    }
    return v;
}

MeanFieldState unpack(const OdeState& v, std::size_t m) {
    MeanFieldState s;
    s.a = v[0];
    s.sm.assign(v.begin() + 1, v.begin() + 1 + m);
    s.sz.resize(m);
    for (std::size_t j = 0; j < m; ++j) s.sz[j] = std::real(v[1 + m + j]);
    return s;
}

}  // namespace

MeanFieldTrajectory integrate(const MeanFieldState& initial, const SystemParams& params,
                              const SpinClasses& classes, double t_end, double dt_out,
                              const IntegratorOptions& opts) {
    if (t_end <= 0 || dt_out <= 0)
        throw std::invalid_argument("t_end and dt_out must be positive");
    const std::size_t m = classes.size();
    if (initial.sm.size() != m || initial.sz.size() != m)
        throw std::invalid_argument("state dimensions do not match spin classes");

    const long n_out = static_cast<long>(std::floor(t_end / dt_out * (1.0 + 1e-12)));
    std::vector<double> grid(n_out + 1);
    for (long k = 0; k <= n_out; ++k) grid[k] = k * dt_out;

    auto system = [&](const OdeState& x, OdeState& dxdt, double /*t*/) {
        const MeanFieldState d = rhs(unpack(x, m), params, classes);
        dxdt = pack(d);
    };

    MeanFieldTrajectory traj;
    auto observer = [&](const OdeState& x, double t) {
        MeanFieldState s = unpack(x, m);
        for (std::size_t j = 0; j < m; ++j) {
            if (std::abs(s.sm[j]) > 1.0 + 1e-6 || s.sz[j] > 1.0 + 1e-6 ||
                s.sz[j] < -1.0 - 1e-6) {
                traj.warnings.push_back("Bloch-sphere bound exceeded for class " +
                                        std::to_string(j) + " at t=" + std::to_string(t));
                break;
            }
        }
        traj.times.push_back(t);
        traj.states.push_back(std::move(s));
    };

    OdeState x0 = pack(initial);
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<OdeState>>(
        opts.abs_tol, opts.rel_tol);
    try {
        odeint::integrate_times(stepper, system, x0, grid.begin(), grid.end(),
                                dt_out / 16.0, observer);
    } catch (const std::exception& e) {
        const double last = traj.times.empty() ? 0.0 : traj.times.back();
        throw IntegrationError(std::string("adaptive step-size failure: ") + e.what(), last);
    }
    return traj;
}

}  // namespace hqs
