#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "ddkit/sequence.hpp"

namespace ddkit {

// H = I (x) C + sx (x) X + sy (x) Y + sz (x) Z with d-dimensional Hermitian
// bath blocks; the qubit factor comes first in all Kronecker products.
struct QubitBathHamiltonian {
    Eigen::Index dim = 0;
    Eigen::MatrixXcd C, X, Y, Z;

    Eigen::MatrixXcd total() const;
    bool pure_dephasing() const;
};

void validate_hamiltonian(const QubitBathHamiltonian& h, double tol = 1e-12);

// GUE-style Hermitian blocks rescaled so that ||C||_2 = alpha and each
// coupling block has spectral norm beta; fully determined by the seed.
QubitBathHamiltonian random_hamiltonian(Eigen::Index dim, double alpha, double beta,
                                        std::uint64_t seed, bool pure_dephasing = false);

// (alpha, beta) = (||C||_2, max coupling spectral norm)
std::pair<double, double> hamiltonian_norms(const QubitBathHamiltonian& h);

// exp(-i t H_total) through the Hermitian eigendecomposition
Eigen::MatrixXcd free_propagator(const QubitBathHamiltonian& h, double t);

struct SequencePropagator {
    Eigen::MatrixXcd unitary;   // interior pulses and free segments only
    Pauli parity;
};

SequencePropagator sequence_propagator(const QubitBathHamiltonian& h, const PulseSequence& seq);

// Parity-corrected propagator P^dagger U_physical, the object all error
// metrics are defined on (P is the exact product of the pulse unitaries,
// phase included).
Eigen::MatrixXcd decoupled_propagator(const QubitBathHamiltonian& h, const PulseSequence& seq);

// U = I (x) a_i + sx (x) a_x + sy (x) a_y + sz (x) a_z
struct PauliDecomposition {
    Eigen::MatrixXcd a_i, a_x, a_y, a_z;
    Eigen::MatrixXcd reconstruct() const;
};

PauliDecomposition pauli_decompose(const Eigen::MatrixXcd& u);

// ||U^(+) - U^(-)||_F from the two sigma_z-conditioned d-dimensional
// propagators; requires X = Y = 0.
double dephasing_error(const QubitBathHamiltonian& h, const PulseSequence& seq);

// H_eff = (i/T) log U (principal branch via Schur); throws when an
// eigenphase sits within 1e-6 of the +-pi branch cut.
PauliDecomposition effective_generator(const Eigen::MatrixXcd& u, double total_time);

// Sweep-ready scalar channels for one (H, sequence) pair. The generator
// channels are reported as dimensionless residual actions T * ||.||_F so
// a fully suppressed channel of order N scales as T^{N+1}.
struct ErrorMetrics {
    double dephasing_error = 0.0;       // 2 ||a_z(U_dec)||_F
    double relaxation_error = 0.0;      // ||a_x||_F + ||a_y||_F of U_dec
    double generator_dephasing = 0.0;   // T ||Z_eff||_F
    double generator_relaxation = 0.0;  // T (||X_eff||_F + ||Y_eff||_F)
};

ErrorMetrics sequence_error_metrics(const QubitBathHamiltonian& h, const PulseSequence& seq);

}  // namespace ddkit
