#include <cmath>
#include <complex>

#include <doctest.h>

#include "hqs/semiclassical.hpp"

using namespace hqs;
using cd = std::complex<double>;

namespace {

SpinClasses single_class(double detuning, double coupling, long n) {
    SpinClasses c;
    c.classes.push_back({detuning, coupling, n});
    c.total = n;
    return c;
}

}  // namespace

TEST_CASE("weak-excitation limit reproduces <a>(t) = e^{-i Dc t} cos(Omega t)") {
    // For N >> 1 excitations the spins stay polarized and the mean-field
    // equations linearize exactly.
    SystemParams p;
    p.delta_c = 50.0;
    p.omega_coll = 2.0;
    p.n_spins = 10000000000L;
    p.mean_spin_detuning = 50.0;  // resonant
    const double g = 2.0 / std::sqrt(double(p.n_spins));
    const auto classes = single_class(50.0, g, p.n_spins);

    MeanFieldState init;
    init.a = 1.0;
    init.sm.assign(1, 0.0);
    init.sz.assign(1, -1.0);

    const auto traj = integrate(init, p, classes, 2.0, 0.05);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const cd expected = std::exp(cd(0.0, -50.0 * t)) * std::cos(2.0 * t);
        CHECK(std::abs(traj.states[i].a - expected) < 1e-6);
    }
}

TEST_CASE("decoupled cavity decays as e^{-(kappa + i Dc) t}") {
    SystemParams p;
    p.delta_c = 30.0;
    p.omega_coll = 0.0;
    p.kappa = 0.8;
    p.n_spins = 1;
    const auto classes = single_class(30.0, 0.0, 1);

    MeanFieldState init;
    init.a = 1.0;
    init.sm.assign(1, 0.0);
    init.sz.assign(1, -1.0);

    const auto traj = integrate(init, p, classes, 1.5, 0.1);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const cd expected = std::exp(-cd(0.8, 30.0) * traj.times[i]);
        CHECK(std::abs(traj.states[i].a - expected) < 1e-7);
    }
}

TEST_CASE("mean-field energy is conserved without losses or drive") {
    SystemParams p;
    p.delta_c = 40.0;
    p.omega_coll = 8.0;
    p.n_spins = 100;
    SpinClasses classes;
    classes.classes.push_back({35.0, 0.8, 40});
    classes.classes.push_back({45.0, 0.8, 60});
    classes.total = 100;

    MeanFieldState init;
    init.a = 1.0;
    init.sm.assign(2, 0.0);
    init.sz.assign(2, -1.0);

    auto energy = [&](const MeanFieldState& s) {
        double e = 40.0 * std::norm(s.a);
        for (std::size_t j = 0; j < 2; ++j) {
            const auto& c = classes.classes[j];
            e += double(c.multiplicity) *
                 (0.5 * c.detuning * s.sz[j] + 2.0 * c.coupling * std::real(s.sm[j] * std::conj(s.a)));
        }
        return e;
    };

    const auto traj = integrate(init, p, classes, 1.0, 0.05);
    const double e0 = energy(traj.states.front());
    for (const auto& s : traj.states) CHECK(std::abs(energy(s) - e0) < 1e-6 * std::abs(e0));
}

TEST_CASE("equations of motion are equivariant under conjugation with flipped detunings") {
    // (a, s-, sz) -> (a*, -s-*, sz) together with (Delta -> -Delta,
    // eta -> -eta) maps solutions to solutions.
    SystemParams p;
    p.delta_c = 23.0;
    p.omega_coll = 5.0;
    p.eta = 11.0;
    p.kappa = 0.4;
    p.gamma_h = 0.2;
    p.gamma_p = 0.1;
    p.n_spins = 10;
    SpinClasses classes;
    classes.classes.push_back({17.0, 1.2, 4});
    classes.classes.push_back({-9.0, 1.2, 6});
    classes.total = 10;

    SystemParams pf = p;
    pf.delta_c = -p.delta_c;
    pf.eta = -p.eta;
    SpinClasses cf = classes;
    for (auto& c : cf.classes) c.detuning = -c.detuning;

    MeanFieldState s;
    s.a = cd(0.3, -0.7);
    s.sm = {cd(0.11, 0.05), cd(-0.2, 0.4)};
    s.sz = {-0.9, -0.3};

    MeanFieldState st;
    st.a = std::conj(s.a);
    st.sm = {-std::conj(s.sm[0]), -std::conj(s.sm[1])};
    st.sz = s.sz;

    const auto d = rhs(s, p, classes);
    const auto dt = rhs(st, pf, cf);
    CHECK(std::abs(dt.a - std::conj(d.a)) < 1e-12);
    for (int j = 0; j < 2; ++j) {
        CHECK(std::abs(dt.sm[j] - (-std::conj(d.sm[j]))) < 1e-12);
        CHECK(std::abs(dt.sz[j] - d.sz[j]) < 1e-12);
    }
}

TEST_CASE("output grid refinement does not change shared samples") {
    SystemParams p;
    p.delta_c = 60.0;
    p.omega_coll = 6.0;
    p.eta = 20.0;
    p.n_spins = 50;
    p.mean_spin_detuning = 55.0;
    const auto classes = single_class(55.0, 6.0 / std::sqrt(50.0), 50);
    const auto init = initial_state_unit_photon(p, classes, 0.3);

    const auto coarse = integrate(init, p, classes, 1.0, 0.1);
    const auto fine = integrate(init, p, classes, 1.0, 0.05);
    for (std::size_t i = 0; i < coarse.times.size(); ++i) {
        CHECK(std::abs(coarse.states[i].a - fine.states[2 * i].a) < 1e-9);
    }
}

TEST_CASE("trajectory matches an independently integrated reference") {
    // Reference values computed with a separate adaptive integrator
    // (rtol 1e-12) on the same equations.
    SystemParams p;
    p.delta_c = 50.0;
    p.eta = 20.0;
    p.kappa = 0.3;
    p.gamma_h = 0.1;
    p.gamma_p = 0.05;
    p.omega_coll = 4.0;
    p.n_spins = 100;
    SpinClasses classes;
    classes.classes.push_back({45.0, 0.4, 25});
    classes.classes.push_back({50.0, 0.4, 50});
    classes.classes.push_back({55.0, 0.4, 25});
    classes.total = 100;
    const double r = 0.21182446509680092;  // atanh(20/50)/2

    const auto init = initial_state_unit_photon(p, classes, r);
    const auto traj = integrate(init, p, classes, 0.25, 0.05);
    const auto n = traj.photon_number(r);

    REQUIRE(traj.times.size() == 6);
    const auto& s1 = traj.states[2];  // t = 0.1
    CHECK(std::abs(s1.a - cd(-0.156905113183986, 0.713105363667347)) < 1e-8);
    CHECK(n.values[2] == doctest::Approx(0.79289305912989).epsilon(1e-8));
    CHECK(s1.sz[0] == doctest::Approx(-0.996929348886585).epsilon(1e-8));
    const auto& s2 = traj.states[5];  // t = 0.25
    CHECK(std::abs(s2.a - cd(0.153741401956053, 0.431016657251421)) < 1e-8);
    CHECK(n.values[5] == doctest::Approx(0.299250216277502).epsilon(1e-8));
    CHECK(s2.sz[0] == doctest::Approx(-0.986559201221153).epsilon(1e-8));
}

TEST_CASE("unit-photon initial state gives n(0) = 1 exactly") {
    SystemParams p;
    p.delta_c = 100.0;
    p.omega_coll = 1.0;
    p.n_spins = 10;
    const auto classes = single_class(50.0, 0.1, 10);
    for (double r : {0.0, 1.0, 2.0, 2.4}) {
        const auto s = initial_state_unit_photon(p, classes, r);
        // cosh(2r) e^{2r} - sinh(2r) e^{2r} cancels to 1 up to ~e^{4r} ulps
        CHECK(std::abs(photon_number_squeezed(s.a, r) - 1.0) < 1e-11);
        for (double sz : s.sz) CHECK(sz == -1.0);
    }
}
