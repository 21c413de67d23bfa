#include "ddkit/state_protect.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "ddkit/rng.hpp"
#include "ddkit/sequence.hpp"

namespace ddkit {

void validate_protected_system(const ProtectedSystem& sys, double tol) {
    const auto& h = sys.hamiltonian;
    if (h.rows() != h.cols() || h.rows() < 2)
        throw std::invalid_argument("ProtectedSystem: Hamiltonian must be square, dim >= 2");
    if (sys.psi.size() != h.rows())
        throw std::invalid_argument("ProtectedSystem: state dimension mismatch");
    if ((h - h.adjoint()).norm() > tol * std::max(1.0, h.norm()))
        throw std::invalid_argument("ProtectedSystem: Hamiltonian not Hermitian");
    if (std::fabs(sys.psi.norm() - 1.0) > tol)
        throw std::invalid_argument("ProtectedSystem: state must be normalized");
}

ProtectedSystem random_protected_system(Eigen::Index dim, std::uint64_t seed, double norm) {
    if (dim < 2) throw std::invalid_argument("random_protected_system: dim must be >= 2");
    if (!(norm > 0.0)) throw std::invalid_argument("random_protected_system: norm must be > 0");
    Rng rng(seed);
    Eigen::MatrixXcd g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            g(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
    Eigen::MatrixXcd h = 0.5 * (g + g.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    h *= norm / es.eigenvalues().cwiseAbs().maxCoeff();

    Eigen::VectorXcd psi(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        psi(i) = std::complex<double>(rng.gaussian(), rng.gaussian());
    psi /= psi.norm();
    return {std::move(h), std::move(psi)};
}

Eigen::MatrixXcd projector_pulse(const Eigen::VectorXcd& psi) {
    if (std::fabs(psi.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("projector_pulse: state must be normalized");
    const Eigen::Index d = psi.size();
    return 2.0 * (psi * psi.adjoint()) - Eigen::MatrixXcd::Identity(d, d);
}

Eigen::MatrixXcd protected_propagator(const ProtectedSystem& sys, int n_pulses,
                                      double total_time, bool final_pulse) {
    if (n_pulses < 1) throw std::invalid_argument("protected_propagator: order must be >= 1");
    if (!(total_time > 0.0))
        throw std::invalid_argument("protected_propagator: total_time must be positive");
    validate_protected_system(sys);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sys.hamiltonian);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("protected_propagator: eigendecomposition failed");
    auto segment = [&](double dt) {
        Eigen::VectorXcd phases(es.eigenvalues().size());
        for (Eigen::Index k = 0; k < phases.size(); ++k)
            phases(k) = std::polar(1.0, -dt * es.eigenvalues()(k));
        return (es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint()).eval();
    };

    const Eigen::MatrixXcd pulse = projector_pulse(sys.psi);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(sys.psi.size(), sys.psi.size());
    double prev = 0.0;
    for (double x : udd_fractions(n_pulses)) {
        double t = total_time * x;
        u = pulse * segment(t - prev) * u;
        prev = t;
    }
    u = segment(total_time - prev) * u;
    if (final_pulse && n_pulses % 2 == 1) u = pulse * u;
    return u;
}

ProtectionMetrics protection_error(const ProtectedSystem& sys, const Eigen::MatrixXcd& u) {
    validate_protected_system(sys);
    const Eigen::MatrixXcd pulse = projector_pulse(sys.psi);
    ProtectionMetrics m;
    m.commutator_error = (pulse * u - u * pulse).norm();
    std::complex<double> survival = sys.psi.adjoint() * u * sys.psi;
    m.leakage = std::max(0.0, 1.0 - std::norm(survival));
    return m;
}

}  // namespace ddkit
