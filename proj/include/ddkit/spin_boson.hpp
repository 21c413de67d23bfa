#pragma once

#include <complex>
#include <vector>

#include "ddkit/sequence.hpp"

namespace ddkit {

// Exponent convention of the coherent-state overlap used throughout this
// engine: |<P_+|P_->| = exp(-factor * |P_+ - P_-|^2). The textbook overlap
// magnitude carries 1/2 in the exponent; this engine uses factor 1. Order
// fits are insensitive to the choice, it rescales log-deficits by a
// constant.
inline constexpr double kOverlapExponentFactor = 1.0;

struct BosonMode {
    double omega;   // > 0
    double kappa;   // real coupling
};

void validate_modes(const std::vector<BosonMode>& modes);

// Bifurcated coherent amplitudes P_{l,+-}(t) for every mode on a time grid.
struct CoherentTrajectoryPair {
    std::vector<double> times;
    // [mode][time index]
    std::vector<std::vector<std::complex<double>>> p_plus;
    std::vector<std::vector<std::complex<double>>> p_minus;
};

struct CoherenceTrace {
    std::vector<double> times;
    std::vector<double> coherence;   // L(t) in [0, 1]
};

// Exact piecewise rotation of the two conditioned amplitudes. Each qubit
// flip exchanges the two pathways; between pulses the amplitudes rotate
// clockwise about -+ kappa/(2 omega). The grid must contain every pulse
// time; recorded values at a pulse time are the pre-flip ones.
CoherentTrajectoryPair evolve_pair(const std::vector<BosonMode>& modes,
                                   const PulseSequence& seq,
                                   const std::vector<std::complex<double>>& initial,
                                   const std::vector<double>& grid);

// Closed form of the final pathway gap,
// Delta_{N+1} = i (-1)^{N+1} e^{-i w T} kappa f(w),
// independent of the initial amplitude.
std::complex<double> delta_final(const BosonMode& mode, const PulseSequence& seq);

// L(t) = prod_l exp(-factor |P_{l,+} - P_{l,-}|^2); independent of the
// initial coherent amplitudes, so they default to vacuum.
CoherenceTrace coherence(const std::vector<BosonMode>& modes, const PulseSequence& seq,
                         const std::vector<double>& grid,
                         const std::vector<std::complex<double>>& initial = {});

// Grid helper: n_steps uniform steps over [0, T] with the pulse times of
// `seq` spliced in exactly.
std::vector<double> coherence_grid(const PulseSequence& seq, int n_steps);

// Reduced 2x2 density matrix of a qubit prepared in c_+|0> + c_-|1> after
// dephasing to coherence L with accumulated phase `phase`.
Eigen::Matrix2cd qubit_density_matrix(std::complex<double> c_plus,
                                      std::complex<double> c_minus, double coherence,
                                      double phase);

}  // namespace ddkit
