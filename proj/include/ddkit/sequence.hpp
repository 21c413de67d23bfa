#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ddkit/pauli.hpp"

namespace ddkit {

struct Pulse {
    double time;
    Pauli axis;
};

// An ordered list of instantaneous pi pulses on [0, T].
//
// Only interior pulses (0 < t < T) are stored. Construction canonicalizes:
// same-time pulses are multiplied out in the Pauli group modulo phase,
// identity results are dropped, and operators landing exactly at t = 0 or
// t = T are folded away (they only shift the parity, see parity()).
class PulseSequence {
  public:
    PulseSequence(double total_time, std::vector<Pulse> pulses, std::string label);

    double total_time() const { return total_time_; }
    const std::vector<Pulse>& pulses() const { return pulses_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return pulses_.size(); }

    // Accumulated Pauli of all stored pulses, modulo phase. This is the
    // operator P such that P * U_physical is the decoupled propagator the
    // error metrics are defined on.
    Pauli parity() const { return parity_; }

    // Pulse times with the conventional endpoints prepended/appended:
    // t_0 = 0, t_{N+1} = T.
    std::vector<double> segment_boundaries() const;

    // The common axis if all pulses share one (empty sequence counts too).
    std::optional<Pauli> single_axis() const;

    void require_single_axis(const char* who) const;

  private:
    double total_time_;
    std::vector<Pulse> pulses_;
    std::string label_;
    Pauli parity_ = Pauli::I;
};

// --- sequence families -------------------------------------------------

// Pulse-time fractions t_j / T of the N-pulse minimal sequence,
// sin^2(j pi / (2(N+1))). Evaluated in extended precision and symmetrized
// so that x_j + x_{N+1-j} == 1 holds bitwise.
std::vector<double> udd_fractions(int n_pulses);

PulseSequence generate_free(double total_time);
PulseSequence generate_udd(int n_pulses, double total_time, Pauli axis = Pauli::X);
PulseSequence generate_cpmg(int n_blocks, double total_time);
// Dephasing-only concatenation, 2 sub-blocks per level, X pulses.
PulseSequence generate_cdd_dephasing(int level, double tau);
// Four-segment concatenation suppressing every coupling channel.
PulseSequence generate_cdd_general(int level, double tau);
// Inner Z-axis UDD blocks concatenated with X pulses.
PulseSequence generate_cudd(int n_inner, int level, double tau_inner);
// Outer X-axis UDD of order m_outer, each interval filled with an inner
// Z-axis UDD of order n_inner.
PulseSequence generate_qdd(int m_outer, int n_inner, double total_time);

// --- decoupling diagnostics --------------------------------------------

// Lambda_p = sum_j (-1)^j [(t_{j+1}/T)^p - (t_j/T)^p], the signed moment
// whose vanishing for p = 1..N defines an Nth-order sequence.
double lambda_moment(const PulseSequence& seq, int p);
std::vector<double> lambda_moments(const PulseSequence& seq, int max_p);

// Piecewise-constant sign F(t) = (-1)^j for t in [t_j, t_{j+1}), F(0) = +1.
class ModulationFunction {
  public:
    explicit ModulationFunction(const PulseSequence& seq);
    double operator()(double t) const;
    double total_time() const { return total_time_; }
    const std::vector<double>& flip_times() const { return flips_; }

  private:
    double total_time_;
    std::vector<double> flips_;
};

ModulationFunction modulation(const PulseSequence& seq);

// f(w) = (1/(iw)) sum_j (-1)^j (e^{iw t_{j+1}} - e^{iw t_j}), the Fourier
// transform of the modulation function; the w -> 0 limit is T * Lambda_1.
std::complex<double> filter_function(const PulseSequence& seq, double omega);

// Lambda_1..Lambda_max_n extracted both from the moment formula and from
// the Taylor coefficients of f at w = 0; throws if the two routes disagree
// beyond 1e-9 (relative to max(1, |Lambda_p|)).
std::vector<double> filter_taylor_check(const PulseSequence& seq, int max_n);

}  // namespace ddkit
