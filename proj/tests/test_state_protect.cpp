#include <cmath>
#include <complex>

#include <doctest.h>

#include "ddkit/order_fit.hpp"
#include "ddkit/state_protect.hpp"

using namespace ddkit;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

TEST_SUITE_BEGIN("stateprotect");

TEST_CASE("projector reflection") {
    VectorXcd e1 = VectorXcd::Zero(2);
    e1(0) = 1.0;
    MatrixXcd p = projector_pulse(e1);
    CHECK(std::abs(p(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(p(1, 1) + 1.0) < 1e-15);
    CHECK(std::abs(p(0, 1)) < 1e-15);

    ProtectedSystem sys = random_protected_system(5, 42);
    MatrixXcd pulse = projector_pulse(sys.psi);
    CHECK((pulse * pulse - MatrixXcd::Identity(5, 5)).norm() < 1e-12);
    CHECK((pulse - pulse.adjoint()).norm() < 1e-13);
    CHECK((pulse * sys.psi - sys.psi).norm() < 1e-12);

    VectorXcd perp = VectorXcd::Random(5);
    perp -= sys.psi * (sys.psi.adjoint() * perp);
    perp /= perp.norm();
    CHECK((pulse * perp + perp).norm() < 1e-12);

    VectorXcd unnormalized = 2.0 * e1;
    CHECK_THROWS_AS(projector_pulse(unnormalized), std::invalid_argument);
}

TEST_CASE("commuting systems are protected exactly") {
    MatrixXcd h = MatrixXcd::Zero(3, 3);
    h.diagonal() << 0.3, -0.8, 1.1;
    VectorXcd psi = VectorXcd::Zero(3);
    psi(1) = 1.0;
    ProtectedSystem sys{h, psi};
    MatrixXcd u = protected_propagator(sys, 3, 1.4);
    ProtectionMetrics m = protection_error(sys, u);
    CHECK(m.commutator_error < 1e-12);
    CHECK(m.leakage < 1e-12);
}

TEST_CASE("trivial operators commute") {
    ProtectedSystem sys = random_protected_system(4, 9);
    CHECK(protection_error(sys, MatrixXcd::Identity(4, 4)).commutator_error == 0.0);
    MatrixXcd pulse = projector_pulse(sys.psi);
    CHECK(protection_error(sys, pulse).commutator_error < 1e-12);
}

TEST_CASE("commutator norm is bounded") {
    ProtectedSystem sys = random_protected_system(6, 3);
    MatrixXcd u = protected_propagator(sys, 2, 0.7);
    double bound = 2.0 * std::sqrt(6.0);
    CHECK(protection_error(sys, u).commutator_error <= bound);
    CHECK((u * u.adjoint() - MatrixXcd::Identity(6, 6)).norm() < 1e-10);
}

TEST_CASE("free evolution leaks quadratically") {
    ProtectedSystem sys = random_protected_system(5, 31);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sys.hamiltonian);
    std::vector<std::pair<double, double>> pairs;
    for (double t : make_time_grid(0.5, 10, std::sqrt(2.0))) {
        Eigen::VectorXcd phases(5);
        for (Eigen::Index k = 0; k < 5; ++k)
            phases(k) = std::polar(1.0, -t * es.eigenvalues()(k));
        MatrixXcd u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
        pairs.emplace_back(t, protection_error(sys, u).leakage);
    }
    OrderFitResult fit = fit_order(pairs, 1e-12, 1e-1);
    REQUIRE(fit.valid);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("protection order for a generic system") {
    ProtectedSystem sys = random_protected_system(6, 12);
    std::vector<std::pair<double, double>> pairs;
    for (double t : make_time_grid(0.8, 12, std::sqrt(2.0)))
        pairs.emplace_back(t, protection_error(sys, protected_propagator(sys, 3, t))
                                  .commutator_error);
    OrderFitResult fit = fit_order(pairs, 1e-11, 1e-1);
    REQUIRE(fit.valid);
    CHECK(fit.slope >= 4.0 - 0.3);
}

TEST_CASE("pulse expectation is preserved to twice the protection order") {
    for (int n : {1, 2}) {
        ProtectedSystem sys = random_protected_system(4, 88 + n);
        Eigen::MatrixXcd pulse = projector_pulse(sys.psi);
        std::vector<std::pair<double, double>> pairs;
        for (double t : make_time_grid(1.1, 12, std::sqrt(2.0))) {
            Eigen::MatrixXcd u = protected_propagator(sys, n, t);
            std::complex<double> expectation =
                sys.psi.adjoint() * u.adjoint() * pulse * u * sys.psi;
            pairs.emplace_back(t, std::abs(expectation - 1.0));
        }
        OrderFitResult fit = fit_order(pairs, 1e-12, 1e-1);
        REQUIRE(fit.valid);
        CHECK(fit.slope >= 2.0 * (n + 1) - 0.5);
    }
}

TEST_CASE("the trailing reflection is invisible to the commutator metric") {
    // ||P(PB) - (PB)P||_F = ||P (PB - BP)||_F = ||PB - BP||_F, so dropping
    // the trailing pulse cannot change the error or its fitted order.
    ProtectedSystem sys = random_protected_system(4, 77);
    for (double t : {0.2, 0.5, 0.9}) {
        double with_pulse =
            protection_error(sys, protected_propagator(sys, 3, t, true)).commutator_error;
        double without =
            protection_error(sys, protected_propagator(sys, 3, t, false)).commutator_error;
        CHECK(with_pulse == doctest::Approx(without).epsilon(1e-12));
    }
}

TEST_SUITE_END();
