#include <cmath>
#include <complex>

#include <doctest.h>

#include "ddkit/finite_bath.hpp"
#include "ddkit/order_fit.hpp"
#include "ddkit/sequence.hpp"

using namespace ddkit;
using Eigen::MatrixXcd;
using std::complex;

TEST_SUITE_BEGIN("finitebath");

TEST_CASE("random instances hit the requested norms and are reproducible") {
    QubitBathHamiltonian h = random_hamiltonian(2, 1.0, 0.5, 7);
    validate_hamiltonian(h);
    auto [alpha, beta] = hamiltonian_norms(h);
    CHECK(alpha == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(beta == doctest::Approx(0.5).epsilon(1e-12));

    QubitBathHamiltonian again = random_hamiltonian(2, 1.0, 0.5, 7);
    CHECK((h.C - again.C).norm() == 0.0);
    CHECK((h.X - again.X).norm() == 0.0);
    CHECK((h.Z - again.Z).norm() == 0.0);

    QubitBathHamiltonian other = random_hamiltonian(2, 1.0, 0.5, 8);
    CHECK((h.C - other.C).norm() > 1e-3);

    QubitBathHamiltonian bare = random_hamiltonian(3, 1.0, 0.0, 3);
    CHECK(bare.X.norm() == 0.0);
    CHECK(bare.Y.norm() == 0.0);
    CHECK(bare.Z.norm() == 0.0);

    QubitBathHamiltonian pure = random_hamiltonian(4, 2.0, 0.3, 11, true);
    CHECK(pure.X.norm() == 0.0);
    CHECK(pure.Y.norm() == 0.0);
    auto [a2, b2] = hamiltonian_norms(pure);
    CHECK(a2 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(b2 == doctest::Approx(0.3).epsilon(1e-12));

    CHECK_THROWS_AS(random_hamiltonian(0, 1.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_hamiltonian(2, -1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("norm helper on explicit matrices") {
    QubitBathHamiltonian h;
    h.dim = 2;
    h.C = MatrixXcd::Zero(2, 2);
    h.C << 1.0, 0.0, 0.0, -1.0;
    h.X = MatrixXcd::Zero(2, 2);
    h.Y = MatrixXcd::Zero(2, 2);
    h.Z = MatrixXcd::Zero(2, 2);
    auto [alpha, beta] = hamiltonian_norms(h);
    CHECK(alpha == doctest::Approx(1.0));
    CHECK(beta == 0.0);
}

TEST_CASE("free propagator") {
    QubitBathHamiltonian h = random_hamiltonian(3, 0.8, 0.4, 23);
    MatrixXcd u0 = free_propagator(h, 0.0);
    CHECK((u0 - MatrixXcd::Identity(6, 6)).norm() < 1e-14);

    MatrixXcd u1 = free_propagator(h, 0.4);
    MatrixXcd u2 = free_propagator(h, 0.7);
    MatrixXcd u3 = free_propagator(h, 1.1);
    CHECK((u1 * u2 - u3).norm() < 1e-10);
    CHECK((u1 * u1.adjoint() - MatrixXcd::Identity(6, 6)).norm() < 1e-10);

    // scalar bath, pure sigma_z coupling: off-diagonal phase e^{-2 i z t}
    QubitBathHamiltonian scalar;
    scalar.dim = 1;
    scalar.C = MatrixXcd::Zero(1, 1);
    scalar.X = MatrixXcd::Zero(1, 1);
    scalar.Y = MatrixXcd::Zero(1, 1);
    scalar.Z = MatrixXcd::Constant(1, 1, 0.37);
    MatrixXcd u = free_propagator(scalar, 1.3);
    complex<double> coherence_phase = u(0, 0) * std::conj(u(1, 1));
    CHECK(std::abs(coherence_phase - std::polar(1.0, -2.0 * 0.37 * 1.3)) < 1e-13);
}

TEST_CASE("sequence propagator basics") {
    QubitBathHamiltonian h = random_hamiltonian(2, 0.9, 0.5, 5);
    PulseSequence empty = generate_free(0.8);
    SequencePropagator sp = sequence_propagator(h, empty);
    CHECK((sp.unitary - free_propagator(h, 0.8)).norm() < 1e-12);
    CHECK(sp.parity == Pauli::I);

    PulseSequence udd3 = generate_udd(3, 0.8);
    SequencePropagator su = sequence_propagator(h, udd3);
    CHECK((su.unitary * su.unitary.adjoint() - MatrixXcd::Identity(4, 4)).norm() < 1e-10);
    CHECK(su.parity == Pauli::X);
}

TEST_CASE("scalar commuting echo cancels exactly") {
    QubitBathHamiltonian h;
    h.dim = 1;
    h.C = MatrixXcd::Constant(1, 1, 0.83);
    h.X = MatrixXcd::Zero(1, 1);
    h.Y = MatrixXcd::Zero(1, 1);
    h.Z = MatrixXcd::Constant(1, 1, 0.41);
    CHECK(dephasing_error(h, generate_udd(1, 1.7)) == 0.0);
}

TEST_CASE("conditioned route equals the full-propagator bookkeeping") {
    QubitBathHamiltonian h = random_hamiltonian(3, 0.7, 0.4, 31, true);
    for (int n : {1, 2, 3}) {
        PulseSequence seq = generate_udd(n, 0.9);
        double conditioned = dephasing_error(h, seq);
        PauliDecomposition dec = pauli_decompose(decoupled_propagator(h, seq));
        CHECK(conditioned == doctest::Approx(2.0 * dec.a_z.norm()).epsilon(1e-10));
        CHECK(dec.a_x.norm() < 1e-12);
        CHECK(dec.a_y.norm() < 1e-12);
    }
    CHECK_THROWS_AS(dephasing_error(random_hamiltonian(2, 1.0, 0.5, 3), generate_udd(1, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("qubit-component decomposition") {
    PauliDecomposition id = pauli_decompose(MatrixXcd::Identity(6, 6));
    CHECK((id.a_i - MatrixXcd::Identity(3, 3)).norm() < 1e-15);
    CHECK(id.a_x.norm() + id.a_y.norm() + id.a_z.norm() < 1e-15);

    QubitBathHamiltonian h = random_hamiltonian(3, 1.0, 0.6, 17);
    MatrixXcd m = h.C;   // reuse a random Hermitian block
    MatrixXcd u = MatrixXcd::Zero(6, 6);
    u.topRightCorner(3, 3) = m;
    u.bottomLeftCorner(3, 3) = m;
    PauliDecomposition sx = pauli_decompose(u);
    CHECK((sx.a_x - m).norm() < 1e-14);
    CHECK(sx.a_i.norm() + sx.a_y.norm() + sx.a_z.norm() < 1e-14);

    MatrixXcd random_u = free_propagator(h, 0.9);
    PauliDecomposition dec = pauli_decompose(random_u);
    CHECK((dec.reconstruct() - random_u).norm() < 1e-12);
}

TEST_CASE("effective generator recovers the Hamiltonian") {
    QubitBathHamiltonian h = random_hamiltonian(2, 0.6, 0.3, 13);
    double total_time = 0.9;
    PauliDecomposition gen = effective_generator(free_propagator(h, total_time), total_time);
    CHECK((gen.a_i - h.C).norm() < 1e-9);
    CHECK((gen.a_x - h.X).norm() < 1e-9);
    CHECK((gen.a_y - h.Y).norm() < 1e-9);
    CHECK((gen.a_z - h.Z).norm() < 1e-9);
    MatrixXcd h_eff = gen.reconstruct();
    CHECK((h_eff - h_eff.adjoint()).norm() < 1e-9);
}

TEST_CASE("branch-cut proximity is reported") {
    QubitBathHamiltonian h;
    h.dim = 1;
    h.C = MatrixXcd::Constant(1, 1, std::acos(-1.0));   // eigenphases at +-pi for t = 1
    h.X = MatrixXcd::Zero(1, 1);
    h.Y = MatrixXcd::Zero(1, 1);
    h.Z = MatrixXcd::Zero(1, 1);
    CHECK_THROWS_AS(effective_generator(free_propagator(h, 1.0), 1.0), std::runtime_error);
}

TEST_CASE("short-time limit is the averaged Hamiltonian") {
    QubitBathHamiltonian h = random_hamiltonian(2, 0.8, 0.4, 41);
    // single pulse at T/3: mean modulation sign = -1/3
    const double total_time = 1e-4;
    std::vector<Pulse> raw = {{total_time / 3.0, Pauli::X}};
    PulseSequence seq(total_time, raw, "asym");
    double mean_sign = lambda_moment(seq, 1);
    CHECK(mean_sign == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));

    PauliDecomposition gen = effective_generator(decoupled_propagator(h, seq), total_time);
    CHECK((gen.a_i - h.C).norm() < 1e-3);
    CHECK((gen.a_x - h.X).norm() < 1e-3);
    CHECK((gen.a_y - mean_sign * h.Y).norm() < 1e-3);
    CHECK((gen.a_z - mean_sign * h.Z).norm() < 1e-3);
}

TEST_CASE("dephasing suppression order for a minimal sequence") {
    QubitBathHamiltonian h = random_hamiltonian(2, 1.0, 0.5, 97, true);
    std::vector<std::pair<double, double>> pairs;
    for (double total : make_time_grid(1.2, 12, std::sqrt(2.0)))
        pairs.emplace_back(total, dephasing_error(h, generate_udd(3, total)));
    OrderFitResult fit = fit_order(pairs, 1e-11, 1e-2);
    REQUIRE(fit.valid);
    CHECK(fit.slope == doctest::Approx(4.0).epsilon(0.3 / 4.0));
    CHECK(fit.r_squared > 0.99);
}

namespace {

MatrixXcd qubit_kron(const Eigen::Matrix2cd& q, Eigen::Index d) {
    MatrixXcd out(2 * d, 2 * d);
    out.topLeftCorner(d, d) = q(0, 0) * MatrixXcd::Identity(d, d);
    out.topRightCorner(d, d) = q(0, 1) * MatrixXcd::Identity(d, d);
    out.bottomLeftCorner(d, d) = q(1, 0) * MatrixXcd::Identity(d, d);
    out.bottomRightCorner(d, d) = q(1, 1) * MatrixXcd::Identity(d, d);
    return out;
}

// physical propagator of an inner z-axis minimal sequence over [0, t]
MatrixXcd inner_z_block(const QubitBathHamiltonian& h, int n, double t) {
    return sequence_propagator(h, generate_udd(n, t, Pauli::Z)).unitary;
}

}  // namespace

TEST_CASE("nested sequences reproduce the literal nested propagator") {
    // outer minimal-sequence skeleton with every interval driven by the
    // inner z-axis block, multiplied out operator by operator
    QubitBathHamiltonian h = random_hamiltonian(3, 0.7, 0.35, 2718);
    const Eigen::Matrix2cd sx = pauli_matrix(Pauli::X);
    for (int m = 1; m <= 3; ++m) {
        for (int n = 1; n <= 2; ++n) {
            const double total = 0.9;
            std::vector<double> outer;
            outer.push_back(0.0);
            for (double x : udd_fractions(m)) outer.push_back(total * x);
            outer.push_back(total);
            MatrixXcd u = MatrixXcd::Identity(6, 6);
            for (std::size_t k = 0; k + 1 < outer.size(); ++k) {
                if (k > 0) u = qubit_kron(sx, 3) * u;
                u = inner_z_block(h, n, outer[k + 1] - outer[k]) * u;
            }
            MatrixXcd via_sequence =
                sequence_propagator(h, generate_qdd(m, n, total)).unitary;
            CHECK((u - via_sequence).norm() < 1e-11);
        }
    }
}

TEST_CASE("block concatenation reproduces the literal recursion") {
    // U^(m) = X U^(m-1) X U^(m-1); the flattened sequence keeps only the
    // interior pulses, so the products may differ by a trailing X
    QubitBathHamiltonian h = random_hamiltonian(2, 0.6, 0.3, 1414);
    const MatrixXcd sx = qubit_kron(pauli_matrix(Pauli::X), 2);
    for (int n = 1; n <= 2; ++n) {
        const double tau_inner = 0.4;
        MatrixXcd recursion = inner_z_block(h, n, tau_inner);
        for (int m = 1; m <= 3; ++m) {
            recursion = sx * recursion * sx * recursion;
            MatrixXcd flat =
                sequence_propagator(h, generate_cudd(n, m, tau_inner)).unitary;
            MatrixXcd boundary = (m % 2 == 1) ? sx : MatrixXcd::Identity(4, 4);
            CHECK((recursion - boundary * flat).norm() < 1e-11);
        }
    }
}

TEST_CASE("block repetition at fixed total time divides the error by four") {
    QubitBathHamiltonian h = random_hamiltonian(4, 1.0, 0.5, 321, true);
    double prev = dephasing_error(h, generate_cpmg(1, 1.0));
    for (int blocks : {2, 4, 8, 16}) {
        double err = dephasing_error(h, generate_cpmg(blocks, 1.0));
        CHECK(err < prev);
        CHECK(prev / err == doctest::Approx(4.0).epsilon(0.25));
        prev = err;
    }
}

TEST_CASE("efficiency shape checks at fixed total time") {
    QubitBathHamiltonian h = random_hamiltonian(4, 1.0, 0.5, 321, true);
    const double hnorm = 1.5;   // alpha + beta

    // minimal sequences: e_N N! / (||H|| T)^N stays bounded as N grows
    const double total = 0.5;
    double fact = 2.0;
    double first_ratio = dephasing_error(h, generate_udd(2, total)) * fact /
                         std::pow(hnorm * total, 2);
    for (int n = 3; n <= 6; ++n) {
        fact *= n;
        double ratio = dephasing_error(h, generate_udd(n, total)) * fact /
                       std::pow(hnorm * total, n);
        CHECK(ratio > 0.0);
        CHECK(ratio <= 2.0 * first_ratio);
    }

    // concatenation: error at fixed T drops at least as fast as
    // (||H|| T)^n / 2^(n^2/2)
    double prev = 1e9;
    for (int level = 1; level <= 5; ++level) {
        double err = dephasing_error(
            h, generate_cdd_dephasing(level, 1.0 / std::ldexp(1.0, level)));
        double model = std::pow(hnorm, level) / std::pow(2.0, 0.5 * level * level);
        CHECK(err < prev);
        CHECK(err <= model);
        prev = err;
    }
}

TEST_CASE("error metrics are parity-insensitive and unitary-consistent") {
    QubitBathHamiltonian h = random_hamiltonian(3, 0.5, 0.25, 59);
    PulseSequence seq = generate_qdd(2, 2, 0.6);
    MatrixXcd u_dec = decoupled_propagator(h, seq);
    CHECK((u_dec * u_dec.adjoint() - MatrixXcd::Identity(6, 6)).norm() < 1e-10);
    ErrorMetrics m = sequence_error_metrics(h, seq);
    CHECK(m.dephasing_error >= 0.0);
    CHECK(m.relaxation_error >= 0.0);
    CHECK(m.generator_dephasing >= 0.0);
    CHECK(m.generator_relaxation >= 0.0);
}

TEST_SUITE_END();
