#pragma once

#include <cstdint>
#include <vector>

#include "ddkit/sequence.hpp"

namespace ddkit {

// One-sided power spectral density with the convention
//   C(tau) = (1/pi) int_0^inf S(w) cos(w tau) dw,
// so the dephasing exponent is chi = (2/pi) int_0^inf S(w) |f(w)|^2 dw.
class NoiseSpectrum {
  public:
    enum class Kind { OhmicSharp, InverseQuarticSoft, Tabulated };

    // S(w) = A w for w <= cutoff, 0 beyond
    static NoiseSpectrum ohmic_sharp(double amplitude, double cutoff);
    // S(w) = A / w^4 for w >= omega_min, constant A / omega_min^4 below
    static NoiseSpectrum inverse_quartic_soft(double amplitude, double omega_min);
    // piecewise-linear table, zero outside the tabulated range
    static NoiseSpectrum tabulated(std::vector<double> omega, std::vector<double> values);

    Kind kind() const { return kind_; }
    double amplitude() const { return amplitude_; }
    double operator()(double omega) const;

    // frequency beyond which the remaining power is negligible; used as
    // the synthesis cutoff and the quadrature horizon
    double max_frequency() const;

  private:
    NoiseSpectrum() = default;
    Kind kind_ = Kind::OhmicSharp;
    double amplitude_ = 0.0;
    double cutoff_ = 0.0;      // ohmic cutoff / soft regularizer, per kind
    std::vector<double> tab_omega_, tab_values_;
};

struct NoiseTrajectory {
    std::vector<double> times;
    std::vector<double> values;
    std::uint64_t seed = 0;
};

// Random-phase harmonic synthesis on a midpoint frequency grid:
//   Z(t) = sum_k sqrt(2 S(w_k) dw / pi) cos(w_k t + phi_k).
// The grid is uniform with step <= dt plus any `extra_times` spliced in
// (pulse instants, so the phase quadrature can split segments exactly).
NoiseTrajectory sample_trajectory(const NoiseSpectrum& spectrum, double total_time, double dt,
                                  std::uint64_t seed,
                                  const std::vector<double>& extra_times = {},
                                  int n_modes = 512);

// phi = 2 int_0^T F(t) Z(t) dt by trapezoids, split exactly at the flips;
// every pulse time must be present in the trajectory grid.
double accumulated_phase(const NoiseTrajectory& traj, const PulseSequence& seq);

struct McCoherence {
    double coherence = 1.0;    // |<e^{-i phi}>|
    double std_error = 0.0;    // jackknife
    int realizations = 0;
};

// Monte Carlo noise average with per-realization seeds derived from
// (seed, index), so comparisons across sequences share random numbers.
McCoherence mc_coherence(const NoiseSpectrum& spectrum, const PulseSequence& seq,
                         int n_realizations, std::uint64_t seed, int n_modes = 512);

// chi = (2/pi) int S(w) |f(w)|^2 dw by adaptive quadrature (1e-8 relative)
double coherence_exponent(const NoiseSpectrum& spectrum, const PulseSequence& seq);

// exp(-chi), the Gaussian-noise analytic coherence
double analytic_coherence(const NoiseSpectrum& spectrum, const PulseSequence& seq);

}  // namespace ddkit
