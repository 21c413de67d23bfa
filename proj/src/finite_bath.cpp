#include "ddkit/finite_bath.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "ddkit/rng.hpp"

namespace ddkit {

namespace {

using Eigen::MatrixXcd;
using std::complex;

MatrixXcd kron2(const Eigen::Matrix2cd& q, const MatrixXcd& b) {
    MatrixXcd out(2 * b.rows(), 2 * b.cols());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = q(i, j) * b;
    return out;
}

MatrixXcd random_hermitian(Eigen::Index dim, Rng& rng) {
    MatrixXcd g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            g(i, j) = complex<double>(rng.gaussian(), rng.gaussian());
    return 0.5 * (g + g.adjoint().eval());
}

double spectral_norm(const MatrixXcd& h) {
    if (h.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

MatrixXcd rescaled(MatrixXcd h, double target) {
    if (target == 0.0) return MatrixXcd::Zero(h.rows(), h.cols());
    double norm = spectral_norm(h);
    if (norm == 0.0) throw std::runtime_error("random_hamiltonian: degenerate draw");
    return h * (target / norm);
}

// exp(-i t H) for Hermitian H
MatrixXcd hermitian_exp(const MatrixXcd& h, double t) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_exp: eigendecomposition failed");
    Eigen::VectorXcd phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k)
        phases(k) = std::polar(1.0, -t * es.eigenvalues()(k));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// cached eigendecomposition so sequence propagators reuse one solve
struct HermitianPropagator {
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd values;

    explicit HermitianPropagator(const MatrixXcd& h) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("sequence_propagator: eigendecomposition failed");
        vectors = es.eigenvectors();
        values = es.eigenvalues();
    }

    MatrixXcd at(double t) const {
        Eigen::VectorXcd phases(values.size());
        for (Eigen::Index k = 0; k < values.size(); ++k)
            phases(k) = std::polar(1.0, -t * values(k));
        return vectors * phases.asDiagonal() * vectors.adjoint();
    }
};

}  // namespace

MatrixXcd QubitBathHamiltonian::total() const {
    MatrixXcd h = kron2(pauli_matrix(Pauli::I), C);
    h += kron2(pauli_matrix(Pauli::X), X);
    h += kron2(pauli_matrix(Pauli::Y), Y);
    h += kron2(pauli_matrix(Pauli::Z), Z);
    return h;
}

bool QubitBathHamiltonian::pure_dephasing() const {
    return X.isZero(0.0) && Y.isZero(0.0);
}

void validate_hamiltonian(const QubitBathHamiltonian& h, double tol) {
    if (h.dim < 1) throw std::invalid_argument("QubitBathHamiltonian: dim must be >= 1");
    for (const MatrixXcd* m : {&h.C, &h.X, &h.Y, &h.Z}) {
        if (m->rows() != h.dim || m->cols() != h.dim)
            throw std::invalid_argument("QubitBathHamiltonian: block size mismatch");
        if ((*m - m->adjoint()).norm() > tol * std::max(1.0, m->norm()))
            throw std::invalid_argument("QubitBathHamiltonian: block not Hermitian");
    }
}

QubitBathHamiltonian random_hamiltonian(Eigen::Index dim, double alpha, double beta,
                                        std::uint64_t seed, bool pure_dephasing) {
    if (dim < 1) throw std::invalid_argument("random_hamiltonian: dim must be >= 1");
    if (alpha < 0.0 || beta < 0.0)
        throw std::invalid_argument("random_hamiltonian: norms must be non-negative");
    Rng rng(seed);
    QubitBathHamiltonian h;
    h.dim = dim;
    h.C = rescaled(random_hermitian(dim, rng), alpha);
    h.X = rescaled(random_hermitian(dim, rng), beta);
    h.Y = rescaled(random_hermitian(dim, rng), beta);
    h.Z = rescaled(random_hermitian(dim, rng), beta);
    if (pure_dephasing) {
        h.X.setZero();
        h.Y.setZero();
    }
    return h;
}

std::pair<double, double> hamiltonian_norms(const QubitBathHamiltonian& h) {
    double beta = std::max({spectral_norm(h.X), spectral_norm(h.Y), spectral_norm(h.Z)});
    return {spectral_norm(h.C), beta};
}

MatrixXcd free_propagator(const QubitBathHamiltonian& h, double t) {
    return hermitian_exp(h.total(), t);
}

SequencePropagator sequence_propagator(const QubitBathHamiltonian& h, const PulseSequence& seq) {
    HermitianPropagator prop(h.total());
    const Eigen::Index d = h.dim;
    MatrixXcd u = MatrixXcd::Identity(2 * d, 2 * d);
    double prev = 0.0;
    for (const Pulse& p : seq.pulses()) {
        u = prop.at(p.time - prev) * u;
        u = kron2(pauli_matrix(p.axis), MatrixXcd::Identity(d, d)) * u;
        prev = p.time;
    }
    u = prop.at(seq.total_time() - prev) * u;
    return {std::move(u), seq.parity()};
}

Eigen::MatrixXcd decoupled_propagator(const QubitBathHamiltonian& h, const PulseSequence& seq) {
    SequencePropagator sp = sequence_propagator(h, seq);
    // exact pulse product (phase retained) so the principal log stays
    // anchored near the identity for short sequences
    Eigen::Matrix2cd parity = Eigen::Matrix2cd::Identity();
    for (const Pulse& p : seq.pulses()) parity = pauli_matrix(p.axis) * parity;
    return kron2(parity.adjoint(), MatrixXcd::Identity(h.dim, h.dim)) * sp.unitary;
}

PauliDecomposition pauli_decompose(const Eigen::MatrixXcd& u) {
    if (u.rows() != u.cols() || u.rows() % 2 != 0)
        throw std::invalid_argument("pauli_decompose: even square matrix required");
    const Eigen::Index d = u.rows() / 2;
    const MatrixXcd& u00 = u.topLeftCorner(d, d);
    const MatrixXcd& u01 = u.topRightCorner(d, d);
    const MatrixXcd& u10 = u.bottomLeftCorner(d, d);
    const MatrixXcd& u11 = u.bottomRightCorner(d, d);
    PauliDecomposition dec;
    dec.a_i = 0.5 * (u00 + u11);
    dec.a_z = 0.5 * (u00 - u11);
    dec.a_x = 0.5 * (u01 + u10);
    dec.a_y = complex<double>(0.0, 0.5) * (u01 - u10);
    return dec;
}

Eigen::MatrixXcd PauliDecomposition::reconstruct() const {
    MatrixXcd u = kron2(pauli_matrix(Pauli::I), a_i);
    u += kron2(pauli_matrix(Pauli::X), a_x);
    u += kron2(pauli_matrix(Pauli::Y), a_y);
    u += kron2(pauli_matrix(Pauli::Z), a_z);
    return u;
}

double dephasing_error(const QubitBathHamiltonian& h, const PulseSequence& seq) {
    if (!h.pure_dephasing())
        throw std::invalid_argument("dephasing_error: requires X = Y = 0");
    HermitianPropagator up(h.C + h.Z);   // sigma_z -> +1
    HermitianPropagator dn(h.C - h.Z);   // sigma_z -> -1
    const Eigen::Index d = h.dim;
    MatrixXcd u_plus = MatrixXcd::Identity(d, d);
    MatrixXcd u_minus = MatrixXcd::Identity(d, d);
    double prev = 0.0;
    bool flipped = false;
    auto step = [&](double dt) {
        const HermitianPropagator& a = flipped ? dn : up;
        const HermitianPropagator& b = flipped ? up : dn;
        u_plus = a.at(dt) * u_plus;
        u_minus = b.at(dt) * u_minus;
    };
    for (const Pulse& p : seq.pulses()) {
        step(p.time - prev);
        flipped = !flipped;
        prev = p.time;
    }
    step(seq.total_time() - prev);
    return (u_plus - u_minus).norm();
}

PauliDecomposition effective_generator(const Eigen::MatrixXcd& u, double total_time) {
    if (!(total_time > 0.0))
        throw std::invalid_argument("effective_generator: total_time must be positive");
    Eigen::ComplexSchur<MatrixXcd> schur(u);
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("effective_generator: Schur decomposition failed");
    const Eigen::Index n = u.rows();
    Eigen::VectorXcd log_eigs(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        complex<double> lambda = schur.matrixT()(k, k);
        double phase = std::arg(lambda);
        if (std::numbers::pi - std::fabs(phase) < 1e-6)
            throw std::runtime_error(
                "effective_generator: eigenphase too close to the principal branch cut");
        log_eigs(k) = std::log(lambda);
    }
    // U is unitary (normal), so T is diagonal up to rounding
    MatrixXcd h_eff = complex<double>(0.0, 1.0 / total_time) * schur.matrixU() *
                      log_eigs.asDiagonal() * schur.matrixU().adjoint();
    return pauli_decompose(h_eff);
}

ErrorMetrics sequence_error_metrics(const QubitBathHamiltonian& h, const PulseSequence& seq) {
    const MatrixXcd u_dec = decoupled_propagator(h, seq);
    PauliDecomposition dec = pauli_decompose(u_dec);
    ErrorMetrics m;
    m.dephasing_error = 2.0 * dec.a_z.norm();
    m.relaxation_error = dec.a_x.norm() + dec.a_y.norm();
    const double T = seq.total_time();
    PauliDecomposition gen = effective_generator(u_dec, T);
    m.generator_dephasing = T * gen.a_z.norm();
    m.generator_relaxation = T * (gen.a_x.norm() + gen.a_y.norm());
    return m;
}

}  // namespace ddkit
