#include <cmath>
#include <complex>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "hqs/errors.hpp"
#include "hqs/propagate.hpp"

using namespace hqs;
using cd = std::complex<double>;

namespace {

SpinClasses uniform_classes(double detuning, double coupling, long n) {
    SpinClasses c;
    c.classes.push_back({detuning, coupling, n});
    c.total = n;
    return c;
}

Liouvillian dissipative_liouvillian(const HilbertSpec& spec, Frame frame) {
    SystemParams p;
    p.delta_c = 6.0;
    p.eta = 2.0;
    p.kappa = 0.8;
    p.gamma_h = 0.3;
    p.gamma_p = 0.15;
    SpinClasses classes;
    double d = 5.0;
    for (int k = 0; k < spec.n_spins; ++k, d += 1.5) classes.classes.push_back({d, 0.5, 1});
    classes.total = spec.n_spins;
    return build_liouvillian(spec, p, classes, frame, 0.3);
}

DensitySuperket superposition_state(const HilbertSpec& spec) {
    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(spec.fock_cutoff);
    ket(1) = 1.0;
    if (spec.fock_cutoff > 2) ket(2) = 1.0;
    return DensitySuperket::pure_cavity_product(ket, spec);
}

double trace_distance(const DensitySuperket& a, const DensitySuperket& b) {
    Eigen::MatrixXcd d = a.unvec() - b.unvec();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

TEST_CASE("lossless resonant exchange gives photon population cos^2(gt)") {
    const HilbertSpec spec{2, 1};
    SystemParams p;
    p.delta_c = 20.0;
    const double g = 0.9;
    const auto L = build_liouvillian(spec, p, uniform_classes(20.0, g, 1), Frame::Lab, 0.0);

    Eigen::VectorXcd ket(2);
    ket << 0.0, 1.0;
    const auto rho0 = DensitySuperket::pure_cavity_product(ket, spec);

    PropagatorConfig cfg;
    cfg.method = PropagationMethod::DenseExpm;
    int checked = 0;
    evolve_observe(L, rho0, 2.0, 0.1, cfg, [&](double t, const DensitySuperket& rho) {
        const auto m = rho.unvec();
        double pop = 0.0;  // photon number expectation
        pop += m(1, 1).real();  // |down,1>
        pop += m(3, 3).real();  // |up,1>
        const double expected = std::cos(g * t) * std::cos(g * t);
        CHECK(std::abs(pop - expected) < 1e-6);
        ++checked;
    });
    CHECK(checked == 21);
}

TEST_CASE("single-term strang step equals the exact exponential") {
    const HilbertSpec spec{4, 0};
    SystemParams p;
    p.delta_c = 6.0;
    p.eta = 2.0;
    p.kappa = 0.8;
    const auto L = build_liouvillian(spec, p, SpinClasses{}, Frame::Lab, 0.0);
    REQUIRE(L.terms.size() == 1);

    const auto rho0 = superposition_state(spec);
    const auto stepped = strang_step(L, rho0, 0.05);
    const auto exact = expm_apply(L, rho0, 0.05);
    CHECK((stepped.v - exact.v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("strang splitting converges at second order") {
    const HilbertSpec spec{3, 2};
    const auto L = dissipative_liouvillian(spec, Frame::Lab);
    const auto rho0 = superposition_state(spec);
    const double t_end = 0.4;

    const auto reference = expm_apply(L, rho0, t_end);
    auto global_error = [&](double dt) {
        DensitySuperket rho = rho0;
        const int steps = static_cast<int>(std::round(t_end / dt));
        TrotterWorkspace ws(L, dt);
        for (int i = 0; i < steps; ++i) ws.apply(rho.v);
        return (rho.v - reference.v).cwiseAbs().maxCoeff();
    };

    const double e1 = global_error(0.02);
    const double e2 = global_error(0.01);
    const double e3 = global_error(0.005);
    const double slope12 = std::log2(e1 / e2);
    const double slope23 = std::log2(e2 / e3);
    CHECK(slope12 == doctest::Approx(2.0).epsilon(0.15));
    CHECK(slope23 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("strang sweep is exact for commuting terms") {
    // no coupling, no shared cavity dynamics: the spin terms commute
    const HilbertSpec spec{2, 2};
    SystemParams p;
    p.delta_c = 0.0;
    p.gamma_h = 0.4;
    SpinClasses classes;
    classes.classes.push_back({3.0, 0.0, 1});
    classes.classes.push_back({5.0, 0.0, 1});
    classes.total = 2;
    Liouvillian L;
    // delta_c = 0 violates validate(), so assemble directly from the builder
    // with a tiny positive detuning replaced by zero coupling share
    p.delta_c = 1e-30;
    L = build_liouvillian(spec, p, classes, Frame::Lab, 0.0);

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(8, 8);
    rho(6, 6) = 0.5;   // |up,up,0>
    rho(0, 0) = 0.5;
    rho(6, 0) = 0.3;
    rho(0, 6) = 0.3;
    const auto rho0 = DensitySuperket::from_density(rho, spec);

    const auto stepped = strang_step(L, rho0, 0.7);
    const auto exact = expm_apply(L, rho0, 0.7);
    CHECK((stepped.v - exact.v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("krylov application matches the dense exponential") {
    // 200-dimensional random contraction-like generator
    std::srand(42);
    Eigen::MatrixXcd dense_a = Eigen::MatrixXcd::Random(200, 200);
    dense_a = (dense_a - 2.5 * Eigen::MatrixXcd::Identity(200, 200)).eval();
    const SparseC A = dense_a.sparseView();
    const Eigen::VectorXcd v = Eigen::VectorXcd::Random(200);

    const Eigen::VectorXcd got = krylov_expm_multiply(A, v, 0.5, 1e-12);
    const Eigen::VectorXcd expected = (0.5 * dense_a).exp() * v;
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-8 * expected.norm());
}

TEST_CASE("expm_apply uses the same semantics above the dense-size guard") {
    const HilbertSpec big{5, 4};  // dim 80 > 64 forces the Krylov path
    const HilbertSpec small{5, 2};
    const auto L_small = dissipative_liouvillian(small, Frame::Lab);
    const auto rho0 = superposition_state(small);
    // cross-check on the small space: krylov directly vs dense path
    const auto dense_result = expm_apply(L_small, rho0, 0.2);
    const Eigen::VectorXcd krylov_result = krylov_expm_multiply(L_small.full, rho0.v, 0.2, 1e-12);
    CHECK((dense_result.v - krylov_result).cwiseAbs().maxCoeff() < 1e-9);

    const auto L_big = dissipative_liouvillian(big, Frame::Lab);
    const auto rho_big = superposition_state(big);
    const auto out = expm_apply(L_big, rho_big, 0.05);
    CHECK(out.trace() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("truncation is exact for product states and renormalizes the trace") {
    const HilbertSpec spec{3, 2};
    const auto rho0 = superposition_state(spec);
    const auto kept = truncate(rho0, 1e-12, 1);
    CHECK((kept.v - rho0.v).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(kept.trace() == doctest::Approx(1.0).epsilon(1e-12));

    // entangle slightly via evolution, then verify rank-limited truncation
    // keeps trace one and stays close for a weakly entangled state
    const auto L = dissipative_liouvillian(spec, Frame::Lab);
    const auto evolved = expm_apply(L, rho0, 0.02);
    const auto trunc = truncate(evolved, 0.0, 4);
    CHECK(trunc.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((trunc.v - evolved.v).cwiseAbs().maxCoeff() < 1e-2);
}

TEST_CASE("evolution enforces trace and hermiticity invariants at snapshots") {
    const HilbertSpec spec{3, 2};
    const auto L = dissipative_liouvillian(spec, Frame::Squeezed);
    const auto rho0 = superposition_state(spec);
    PropagatorConfig cfg;
    cfg.method = PropagationMethod::Trotter2;
    cfg.dt = 1e-3;
    std::vector<std::string> warnings;
    evolve_observe(L, rho0, 0.2, 0.05, cfg, [&](double, const DensitySuperket& rho) {
        CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(rho.hermiticity_defect() < 1e-9);
    }, &warnings);
}

TEST_CASE("propagator configuration is validated") {
    PropagatorConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.dt = 1e-4;
    cfg.svd_cutoff = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.svd_cutoff = 0.0;
    cfg.max_rank = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
