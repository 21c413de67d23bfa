#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace ddkit {

// Multi-level system with a distinguished state to protect. The projector
// reflection P = 2|psi><psi| - I splits H into a commuting and an
// anti-commuting part; pulsing P at the minimal-sequence times suppresses
// the anti-commuting part order by order.
struct ProtectedSystem {
    Eigen::MatrixXcd hamiltonian;
    Eigen::VectorXcd psi;
};

void validate_protected_system(const ProtectedSystem& sys, double tol = 1e-12);

ProtectedSystem random_protected_system(Eigen::Index dim, std::uint64_t seed,
                                        double norm = 1.0);

// P = 2|psi><psi| - I; Hermitian, unitary, involutive
Eigen::MatrixXcd projector_pulse(const Eigen::VectorXcd& psi);

// Free segments exp(-i H dt) interleaved with P at the order-n minimal
// times; a trailing P is appended for odd n (skippable for the regression
// that shows the order collapses without it).
Eigen::MatrixXcd protected_propagator(const ProtectedSystem& sys, int n_pulses,
                                      double total_time, bool final_pulse = true);

struct ProtectionMetrics {
    double commutator_error = 0.0;   // ||P U - U P||_F
    double leakage = 0.0;            // 1 - |<psi|U|psi>|^2
};

ProtectionMetrics protection_error(const ProtectedSystem& sys, const Eigen::MatrixXcd& u);

}  // namespace ddkit
