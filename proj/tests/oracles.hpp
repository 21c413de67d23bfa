// Test-only reference constructions kept independent of the library
// implementations they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "ddkit/pauli.hpp"

namespace oracles {

// Literal operator-string event: an instantaneous 2x2 unitary at a time.
struct Event {
    double time;
    Eigen::Matrix2cd op;
};

using EventList = std::vector<Event>;

inline EventList shifted(const EventList& events, double offset) {
    EventList out = events;
    for (Event& e : out) e.time += offset;
    return out;
}

inline void append(EventList& dst, const EventList& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

// U_n = X U_{n-1} X U_{n-1}, flattened in evolution order over 2^n * tau.
inline EventList cdd_dephasing_events(int level, double tau) {
    if (level == 0) return {};
    double half = std::ldexp(tau, level - 1);
    EventList inner = cdd_dephasing_events(level - 1, tau);
    EventList out = inner;
    out.push_back({half, ddkit::pauli_matrix(ddkit::Pauli::X)});
    append(out, shifted(inner, half));
    out.push_back({2.0 * half, ddkit::pauli_matrix(ddkit::Pauli::X)});
    return out;
}

// U_n = U_{n-1} [X U X][Y U Y][Z U Z] over 4^n * tau; the z block runs
// first in time, the bare block last.
inline EventList cdd_general_events(int level, double tau) {
    if (level == 0) return {};
    double quarter = std::ldexp(tau, 2 * (level - 1));
    EventList inner = cdd_general_events(level - 1, tau);
    EventList out;
    out.push_back({0.0, ddkit::pauli_matrix(ddkit::Pauli::Z)});
    append(out, inner);
    out.push_back({quarter, ddkit::pauli_matrix(ddkit::Pauli::Z)});
    out.push_back({quarter, ddkit::pauli_matrix(ddkit::Pauli::Y)});
    append(out, shifted(inner, quarter));
    out.push_back({2.0 * quarter, ddkit::pauli_matrix(ddkit::Pauli::Y)});
    out.push_back({2.0 * quarter, ddkit::pauli_matrix(ddkit::Pauli::X)});
    append(out, shifted(inner, 2.0 * quarter));
    out.push_back({3.0 * quarter, ddkit::pauli_matrix(ddkit::Pauli::X)});
    append(out, shifted(inner, 3.0 * quarter));
    return out;
}

// merge same-time events by matrix multiplication (later factor on the left)
inline std::map<double, Eigen::Matrix2cd> merged_events(const EventList& events) {
    EventList sorted = events;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Event& a, const Event& b) { return a.time < b.time; });
    std::map<double, Eigen::Matrix2cd> out;
    for (const Event& e : sorted) {
        auto it = out.find(e.time);
        if (it == out.end())
            out[e.time] = e.op;
        else
            it->second = e.op * it->second;
    }
    return out;
}

// A == phase * B for some unimodular phase
inline bool proportional_mod_phase(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b,
                                   double tol = 1e-12) {
    Eigen::Index r = 0, c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    if (std::abs(b(r, c)) < tol) return a.cwiseAbs().maxCoeff() < tol;
    std::complex<double> ratio = a(r, c) / b(r, c);
    if (std::fabs(std::abs(ratio) - 1.0) > tol) return false;
    return (a - ratio * b).cwiseAbs().maxCoeff() <= tol * 4.0;
}

inline bool is_identity_mod_phase(const Eigen::Matrix2cd& a, double tol = 1e-12) {
    return proportional_mod_phase(a, Eigen::Matrix2cd::Identity(), tol);
}

// composite Simpson quadrature for smooth reference integrals
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace oracles
