#include <cmath>
#include <numeric>

#include <doctest.h>

#include "hqs/errors.hpp"
#include "hqs/model.hpp"

using namespace hqs;

TEST_CASE("squeezing parameter matches atanh formula and round-trips") {
    const double delta_c = 70000.0;
    for (double eta : {0.0, 100.0, 35000.0, 69000.0}) {
        const double r = squeezing_parameter(eta, delta_c);
        CHECK(r == doctest::Approx(0.5 * std::atanh(eta / delta_c)).epsilon(1e-14));
        CHECK(drive_for_r(r, delta_c) == doctest::Approx(eta).epsilon(1e-12));
    }
    for (double r : {0.0, 0.3, 1.0, 2.0, 2.4}) {
        CHECK(squeezing_parameter(drive_for_r(r, delta_c), delta_c) ==
              doctest::Approx(r).epsilon(1e-12));
    }
}

TEST_CASE("squeezing parameter rejects drive at or beyond the instability threshold") {
    CHECK_THROWS_AS(squeezing_parameter(70000.0, 70000.0), std::domain_error);
    CHECK_THROWS_AS(squeezing_parameter(70001.0, 70000.0), std::domain_error);
    CHECK_THROWS_AS(squeezing_parameter(-70000.0, 70000.0), std::domain_error);
}

TEST_CASE("effective detuning equals both closed forms (Bogoliubov identity)") {
    const double delta_c = 70000.0;
    for (double r : {0.0, 0.5, 1.0, 2.0, 2.4}) {
        const double eta = drive_for_r(r, delta_c);
        const double expected = std::sqrt(delta_c * delta_c - eta * eta);
        CHECK(effective_detuning(delta_c, r) ==
              doctest::Approx(delta_c / std::cosh(2 * r)).epsilon(1e-14));
        CHECK(effective_detuning(delta_c, r) == doctest::Approx(expected).epsilon(1e-10));
        // sech^2 + tanh^2 = 1 underlies the equivalence
        const double s = 1.0 / std::cosh(2 * r), t = std::tanh(2 * r);
        CHECK(s * s + t * t == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("transformed coupling is g e^r / 2") {
    CHECK(transformed_coupling(0.4, 0.0) == doctest::Approx(0.2));
    CHECK(transformed_coupling(0.4, 2.0) == doctest::Approx(0.2 * std::exp(2.0)).epsilon(1e-14));
    CHECK_THROWS(transformed_coupling(-0.1, 1.0));
}

TEST_CASE("gaussian discretization sits at midpoint quantiles") {
    SystemParams p;
    p.delta_c = 1.0;
    p.omega_coll = 40.0;
    p.delta_width = 10.0;
    p.mean_spin_detuning = 7.0;
    p.n_spins = 100;
    const auto classes = discretize_gaussian(p, 4);
    REQUIRE(classes.size() == 4);
    // quantiles (j+1/2)/4 of N(7, 10), computed with an independent
    // statistics library
    const double expected[4] = {-4.50349380376008, 3.81360636035625, 10.1863936396438,
                                18.5034938037601};
    for (int j = 0; j < 4; ++j) {
        CHECK(classes.classes[j].detuning == doctest::Approx(expected[j]).epsilon(1e-10));
        CHECK(classes.classes[j].coupling == doctest::Approx(40.0 / 10.0).epsilon(1e-14));
        CHECK(classes.classes[j].multiplicity == 25);
    }
    CHECK(classes.total == 100);
}

TEST_CASE("discretization invariants hold with remainder spins") {
    SystemParams p;
    p.delta_c = 1.0;
    p.omega_coll = 40.0;
    p.delta_width = 60.0;
    p.n_spins = 10007;  // not divisible by the class count
    for (int m : {1, 3, 7, 200}) {
        const auto classes = discretize_gaussian(p, m);
        long total = 0;
        double omega_sq = 0.0;
        for (const auto& c : classes.classes) {
            CHECK(c.multiplicity >= 1);
            total += c.multiplicity;
            omega_sq += double(c.multiplicity) * c.coupling * c.coupling;
        }
        CHECK(total == 10007);
        CHECK(classes.total == 10007);
        CHECK(omega_sq == doctest::Approx(40.0 * 40.0).epsilon(1e-12));
    }
}

TEST_CASE("empirical width of the discretized ensemble approaches delta") {
    SystemParams p;
    p.delta_c = 1.0;
    p.omega_coll = 40.0;
    p.delta_width = 60.0;
    p.mean_spin_detuning = 100.0;
    p.n_spins = 10000;
    const auto classes = discretize_gaussian(p, 200);
    double mean = 0.0;
    for (const auto& c : classes.classes) mean += double(c.multiplicity) * c.detuning;
    mean /= classes.total;
    double var = 0.0;
    for (const auto& c : classes.classes)
        var += double(c.multiplicity) * (c.detuning - mean) * (c.detuning - mean);
    var /= classes.total;
    CHECK(mean == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(std::sqrt(var) == doctest::Approx(60.0).epsilon(0.02));
}

TEST_CASE("sampled discretization is seeded and reproducible") {
    SystemParams p;
    p.delta_c = 1.0;
    p.omega_coll = 40.0;
    p.delta_width = 60.0;
    p.n_spins = 1000;
    const auto a = discretize_gaussian_sampled(p, 50, 1234);
    const auto b = discretize_gaussian_sampled(p, 50, 1234);
    const auto c = discretize_gaussian_sampled(p, 50, 99);
    REQUIRE(a.size() == 50);
    CHECK(a.classes[10].detuning == b.classes[10].detuning);
    CHECK(a.classes[10].detuning != c.classes[10].detuning);
    CHECK(a.total == 1000);
}

TEST_CASE("parameter validation") {
    SystemParams p;
    p.delta_c = 100.0;
    p.omega_coll = 10.0;
    CHECK_NOTHROW(p.validate());
    SystemParams bad = p;
    bad.kappa = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.n_spins = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.eta = 100.0;  // at the instability threshold
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
