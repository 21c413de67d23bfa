#pragma once

#include <vector>

#include "ddkit/sequence.hpp"

namespace ddkit {

// One linear piece of a theta-domain function on [a, b]; jumps are
// represented by adjacent pieces with mismatched endpoint values.
struct ThetaPiece {
    double a, b;
    double fa, fb;
};

using ThetaPiecewise = std::vector<ThetaPiece>;

// Smooth-pulse modulation pair (f+, f-) of a given order, built from a
// user-supplied free segment of f+ on [0, pi/(2N+2)] and extended to
// [0, pi] by the three sign/reflection symmetries of the construction:
// period 2pi/(N+1), anti-symmetry about j pi/(N+1), symmetry about
// (j+1/2) pi/(N+1). f- = sqrt(1 - f+^2) with the sign tied to the
// anti-symmetry so it stays continuous and vanishes at theta = 0.
class GeneralizedModulation {
  public:
    // free_segment: samples of f+ on a uniform inclusive grid over
    // [0, pi/(2N+2)], values in [-1, 1], both endpoints +1 (the jumps at
    // the segment boundaries are supplied by the symmetry extension).
    GeneralizedModulation(int order, std::vector<double> free_segment, int grid_size = 4096);

    int order() const { return order_; }
    int grid_size() const { return static_cast<int>(theta_.size()); }

    const std::vector<double>& theta_grid() const { return theta_; }
    const std::vector<double>& f_plus_samples() const { return fp_; }
    const std::vector<double>& f_minus_samples() const { return fm_; }

    // Pointwise evaluation via exact symmetry reduction into the free
    // segment; right-continuous at the jump points.
    double f_plus(double theta) const;
    double f_minus(double theta) const;

    // Exact piecewise-linear representations on [0, pi] used for the
    // harmonic analysis. The unfolding applies the symmetries to the
    // master pieces, so the symmetry-selection rules hold to rounding.
    ThetaPiecewise plus_pieces() const;
    ThetaPiecewise minus_pieces() const;

  private:
    double reduce(double theta, double& sign) const;
    double free_value(double u) const;

    int order_;
    std::vector<double> free_;    // f+ samples on the quarter period
    std::vector<double> theta_, fp_, fm_;
};

// Square-wave theta representation of an ordinary single-axis sequence
// under the substitution t = T sin^2(theta/2).
ThetaPiecewise theta_square_wave(const PulseSequence& seq);

// Sine-series coefficients c_m (m = 1..max_m) of a piecewise-linear
// function on [0, pi], c_m = (2/pi) int f(theta) sin(m theta) dtheta,
// evaluated in closed form per piece.
std::vector<double> sine_series(const ThetaPiecewise& pieces, int max_m);

struct HarmonicsReport {
    bool pass = false;
    int base = 0;                       // N + 1
    double tolerance = 0.0;             // relative threshold applied
    std::vector<double> coefficients;   // c_1 .. c_max
    double max_allowed_abs = 0.0;
    double max_forbidden_abs = 0.0;
    int worst_forbidden_m = 0;
};

// Passes iff every coefficient whose index is not an odd multiple of
// (N+1) is below `tolerance` relative to the largest coefficient.
HarmonicsReport odd_harmonics_check(const GeneralizedModulation& mod,
                                    int max_harmonic_multiple = 6,
                                    double tolerance = 1e-6);
HarmonicsReport odd_harmonics_check(const PulseSequence& seq,
                                    int max_harmonic_multiple = 6,
                                    double tolerance = 1e-6);

}  // namespace ddkit
