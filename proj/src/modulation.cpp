#include "ddkit/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ddkit {

namespace {

constexpr double kPi = std::numbers::pi;

// exact integral of (alpha + beta*theta) * sin(m*theta) over [a, b]
double linear_sine_integral(double a, double b, double fa, double fb, int m) {
    if (b <= a) return 0.0;
    double beta = (fb - fa) / (b - a);
    double alpha = fa - beta * a;
    double md = static_cast<double>(m);
    auto antiderivative = [&](double x) {
        // int (alpha + beta x) sin(m x) dx
        //   = -(alpha + beta x) cos(m x)/m + beta sin(m x)/m^2
        return -(alpha + beta * x) * std::cos(md * x) / md +
               beta * std::sin(md * x) / (md * md);
    };
    return antiderivative(b) - antiderivative(a);
}

}  // namespace

GeneralizedModulation::GeneralizedModulation(int order, std::vector<double> free_segment,
                                             int grid_size)
    : order_(order), free_(std::move(free_segment)) {
    if (order_ < 1) throw std::invalid_argument("GeneralizedModulation: order must be >= 1");
    if (free_.size() < 2)
        throw std::invalid_argument("GeneralizedModulation: free segment needs >= 2 samples");
    if (grid_size < 16)
        throw std::invalid_argument("GeneralizedModulation: grid_size too small");
    for (double v : free_)
        if (!(std::fabs(v) <= 1.0))
            throw std::invalid_argument("GeneralizedModulation: |f+| must not exceed 1");
    if (std::fabs(free_.front() - 1.0) > 1e-12 || std::fabs(free_.back() - 1.0) > 1e-12)
        throw std::invalid_argument(
            "GeneralizedModulation: free segment must start and end at +1");

    theta_.resize(static_cast<std::size_t>(grid_size));
    fp_.resize(theta_.size());
    fm_.resize(theta_.size());
    for (std::size_t i = 0; i < theta_.size(); ++i) {
        // midpoint grid; jump points never coincide with samples
        theta_[i] = kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(grid_size);
        fp_[i] = f_plus(theta_[i]);
        fm_[i] = f_minus(theta_[i]);
    }
}

double GeneralizedModulation::free_value(double u) const {
    const double quarter = kPi / (2.0 * (order_ + 1));
    double x = u / quarter * static_cast<double>(free_.size() - 1);
    if (x <= 0.0) return free_.front();
    auto last = static_cast<double>(free_.size() - 1);
    if (x >= last) return free_.back();
    std::size_t i = static_cast<std::size_t>(x);
    double frac = x - static_cast<double>(i);
    return free_[i] * (1.0 - frac) + free_[i + 1] * frac;
}

double GeneralizedModulation::reduce(double theta, double& sign) const {
    const double half = kPi / (order_ + 1);      // half period, anti-symmetry spacing
    const double period = 2.0 * half;
    double u = std::fmod(theta, period);
    if (u < 0.0) u += period;
    sign = 1.0;
    if (u >= half) {                             // anti-symmetry about theta = half
        u = period - u;
        sign = -sign;
    }
    if (u > half / 2.0) u = half - u;            // symmetry about the quarter point
    return u;
}

double GeneralizedModulation::f_plus(double theta) const {
    double sign;
    double u = reduce(theta, sign);
    return sign * free_value(u);
}

double GeneralizedModulation::f_minus(double theta) const {
    double sign;
    double u = reduce(theta, sign);
    double g = free_value(u);
    return sign * std::sqrt(std::max(0.0, 1.0 - g * g));
}

namespace {

// Unfold master pieces on [0, P/4] through the symmetry group onto [0, pi].
// Cell j = [j*half, (j+1)*half] carries sign (-1)^j; within a cell the
// first quarter maps u directly and the second one mirrors it.
ThetaPiecewise unfold(const std::vector<double>& u_nodes, const std::vector<double>& v_nodes,
                      int order) {
    const double half = kPi / (order + 1);
    ThetaPiecewise out;
    for (int j = 0; j <= order; ++j) {
        double a = static_cast<double>(j) * half;
        double s = (j % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t i = 0; i + 1 < u_nodes.size(); ++i)
            out.push_back({a + u_nodes[i], a + u_nodes[i + 1], s * v_nodes[i], s * v_nodes[i + 1]});
        for (std::size_t i = u_nodes.size() - 1; i > 0; --i)
            out.push_back({a + half - u_nodes[i], a + half - u_nodes[i - 1], s * v_nodes[i],
                           s * v_nodes[i - 1]});
    }
    return out;
}

}  // namespace

ThetaPiecewise GeneralizedModulation::plus_pieces() const {
    const double quarter = kPi / (2.0 * (order_ + 1));
    std::vector<double> u(free_.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = quarter * static_cast<double>(i) / static_cast<double>(free_.size() - 1);
    return unfold(u, free_, order_);
}

ThetaPiecewise GeneralizedModulation::minus_pieces() const {
    // refine so the sqrt curvature is captured by the linear interpolant
    const double quarter = kPi / (2.0 * (order_ + 1));
    const std::size_t refine = std::max<std::size_t>(1, 512 / (free_.size() - 1));
    std::vector<double> u, v;
    const std::size_t pieces = free_.size() - 1;
    for (std::size_t i = 0; i < pieces; ++i) {
        for (std::size_t r = 0; r < refine; ++r) {
            double frac = (static_cast<double>(i) +
                           static_cast<double>(r) / static_cast<double>(refine)) /
                          static_cast<double>(pieces);
            double uu = quarter * frac;
            double g = free_value(uu);
            u.push_back(uu);
            v.push_back(std::sqrt(std::max(0.0, 1.0 - g * g)));
        }
    }
    u.push_back(quarter);
    double g_end = free_.back();
    v.push_back(std::sqrt(std::max(0.0, 1.0 - g_end * g_end)));
    return unfold(u, v, order_);
}

ThetaPiecewise theta_square_wave(const PulseSequence& seq) {
    seq.require_single_axis("theta_square_wave");
    const double T = seq.total_time();
    std::vector<double> jumps;
    jumps.push_back(0.0);
    for (const Pulse& p : seq.pulses())
        jumps.push_back(2.0 * std::asin(std::sqrt(p.time / T)));
    jumps.push_back(kPi);
    ThetaPiecewise out;
    for (std::size_t j = 0; j + 1 < jumps.size(); ++j) {
        double v = (j % 2 == 0) ? 1.0 : -1.0;
        out.push_back({jumps[j], jumps[j + 1], v, v});
    }
    return out;
}

std::vector<double> sine_series(const ThetaPiecewise& pieces, int max_m) {
    if (max_m < 1) throw std::invalid_argument("sine_series: max_m must be >= 1");
    std::vector<double> c(static_cast<std::size_t>(max_m), 0.0);
    for (int m = 1; m <= max_m; ++m) {
        double acc = 0.0;
        for (const ThetaPiece& p : pieces)
            acc += linear_sine_integral(p.a, p.b, p.fa, p.fb, m);
        c[static_cast<std::size_t>(m - 1)] = 2.0 / kPi * acc;
    }
    return c;
}

namespace {

HarmonicsReport check_harmonics(const ThetaPiecewise& pieces, int base, int max_multiple,
                                double tolerance) {
    if (max_multiple < 1)
        throw std::invalid_argument("odd_harmonics_check: need max_harmonic_multiple >= 1");
    HarmonicsReport rep;
    rep.base = base;
    rep.tolerance = tolerance;
    rep.coefficients = sine_series(pieces, max_multiple * base);
    double scale = 0.0;
    for (double v : rep.coefficients) scale = std::max(scale, std::fabs(v));
    for (int m = 1; m <= max_multiple * base; ++m) {
        double mag = std::fabs(rep.coefficients[static_cast<std::size_t>(m - 1)]);
        bool allowed = (m % base == 0) && ((m / base) % 2 == 1);
        if (allowed) {
            rep.max_allowed_abs = std::max(rep.max_allowed_abs, mag);
        } else if (mag > rep.max_forbidden_abs) {
            rep.max_forbidden_abs = mag;
            rep.worst_forbidden_m = m;
        }
    }
    rep.pass = rep.max_forbidden_abs <= tolerance * scale;
    return rep;
}

}  // namespace

HarmonicsReport odd_harmonics_check(const GeneralizedModulation& mod, int max_harmonic_multiple,
                                    double tolerance) {
    int base = mod.order() + 1;
    if (mod.grid_size() < 8 * max_harmonic_multiple * base)
        throw std::invalid_argument(
            "odd_harmonics_check: theta grid too coarse for requested harmonic range");
    HarmonicsReport plus = check_harmonics(mod.plus_pieces(), base, max_harmonic_multiple,
                                           tolerance);
    HarmonicsReport minus = check_harmonics(mod.minus_pieces(), base, max_harmonic_multiple,
                                            tolerance);
    // report f+ (the component carrying the pulse jumps); pass requires both
    plus.pass = plus.pass && minus.pass;
    plus.max_forbidden_abs = std::max(plus.max_forbidden_abs, minus.max_forbidden_abs);
    return plus;
}

HarmonicsReport odd_harmonics_check(const PulseSequence& seq, int max_harmonic_multiple,
                                    double tolerance) {
    int base = static_cast<int>(seq.size()) + 1;
    return check_harmonics(theta_square_wave(seq), base, max_harmonic_multiple, tolerance);
}

}  // namespace ddkit
