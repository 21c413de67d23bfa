#include "ddkit/spin_boson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddkit {

namespace {

void check_grid(const PulseSequence& seq, const std::vector<double>& grid) {
    if (grid.size() < 2 || grid.front() != 0.0)
        throw std::invalid_argument("evolve_pair: grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("evolve_pair: grid must be strictly increasing");
    if (grid.back() > seq.total_time() * (1.0 + 1e-12))
        throw std::invalid_argument("evolve_pair: grid extends past total_time");
    const double tol = 1e-12 * seq.total_time();
    for (const Pulse& p : seq.pulses()) {
        auto it = std::lower_bound(grid.begin(), grid.end(), p.time - tol);
        if (it == grid.end() || std::fabs(*it - p.time) > tol)
            throw std::invalid_argument("evolve_pair: grid is missing a pulse time");
    }
}

}  // namespace

void validate_modes(const std::vector<BosonMode>& modes) {
    for (const BosonMode& m : modes)
        if (!(m.omega > 0.0))
            throw std::invalid_argument("BosonMode: omega must be positive");
}

CoherentTrajectoryPair evolve_pair(const std::vector<BosonMode>& modes,
                                   const PulseSequence& seq,
                                   const std::vector<std::complex<double>>& initial,
                                   const std::vector<double>& grid) {
    validate_modes(modes);
    seq.require_single_axis("evolve_pair");
    check_grid(seq, grid);
    if (!initial.empty() && initial.size() != modes.size())
        throw std::invalid_argument("evolve_pair: one initial amplitude per mode required");

    CoherentTrajectoryPair out;
    out.times = grid;
    out.p_plus.resize(modes.size());
    out.p_minus.resize(modes.size());

    const double tol = 1e-12 * seq.total_time();
    for (std::size_t l = 0; l < modes.size(); ++l) {
        const double omega = modes[l].omega;
        const std::complex<double> center_plus(-modes[l].kappa / (2.0 * omega), 0.0);
        const std::complex<double> center_minus = -center_plus;
        std::complex<double> pp = initial.empty() ? 0.0 : initial[l];
        std::complex<double> pm = pp;

        auto& row_p = out.p_plus[l];
        auto& row_m = out.p_minus[l];
        row_p.reserve(grid.size());
        row_m.reserve(grid.size());

        std::size_t next_pulse = 0;
        const auto& pulses = seq.pulses();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (i > 0) {
                std::complex<double> rot = std::polar(1.0, -omega * (grid[i] - grid[i - 1]));
                pp = (pp - center_plus) * rot + center_plus;
                pm = (pm - center_minus) * rot + center_minus;
            }
            row_p.push_back(pp);
            row_m.push_back(pm);
            // a flip at this instant exchanges the pathways for what follows
            if (next_pulse < pulses.size() &&
                std::fabs(pulses[next_pulse].time - grid[i]) <= tol) {
                std::swap(pp, pm);
                ++next_pulse;
            }
        }
    }
    return out;
}

std::complex<double> delta_final(const BosonMode& mode, const PulseSequence& seq) {
    validate_modes({mode});
    seq.require_single_axis("delta_final");
    const double T = seq.total_time();
    const std::size_t n = seq.size();
    std::complex<double> f = filter_function(seq, mode.omega);
    std::complex<double> i_unit(0.0, 1.0);
    double sign = (n % 2 == 0) ? -1.0 : 1.0;   // (-1)^{N+1}
    return i_unit * sign * std::polar(1.0, -mode.omega * T) * mode.kappa * f;
}

CoherenceTrace coherence(const std::vector<BosonMode>& modes, const PulseSequence& seq,
                         const std::vector<double>& grid,
                         const std::vector<std::complex<double>>& initial) {
    CoherentTrajectoryPair traj = evolve_pair(modes, seq, initial, grid);
    CoherenceTrace trace;
    trace.times = traj.times;
    trace.coherence.resize(traj.times.size(), 1.0);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        double exponent = 0.0;
        for (std::size_t l = 0; l < modes.size(); ++l)
            exponent += std::norm(traj.p_plus[l][i] - traj.p_minus[l][i]);
        trace.coherence[i] = std::exp(-kOverlapExponentFactor * exponent);
    }
    return trace;
}

std::vector<double> coherence_grid(const PulseSequence& seq, int n_steps) {
    if (n_steps < 1) throw std::invalid_argument("coherence_grid: n_steps must be >= 1");
    const double T = seq.total_time();
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n_steps) + seq.size() + 1);
    for (int i = 0; i <= n_steps; ++i)
        grid.push_back(T * static_cast<double>(i) / static_cast<double>(n_steps));
    for (const Pulse& p : seq.pulses()) grid.push_back(p.time);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [T](double a, double b) { return std::fabs(a - b) <= 1e-15 * T; }),
               grid.end());
    return grid;
}

Eigen::Matrix2cd qubit_density_matrix(std::complex<double> c_plus, std::complex<double> c_minus,
                                      double coherence, double phase) {
    double norm = std::norm(c_plus) + std::norm(c_minus);
    if (std::fabs(norm - 1.0) > 1e-9)
        throw std::invalid_argument("qubit_density_matrix: amplitudes must be normalized");
    if (coherence < 0.0 || coherence > 1.0)
        throw std::invalid_argument("qubit_density_matrix: coherence must lie in [0, 1]");
    std::complex<double> off =
        c_plus * std::conj(c_minus) * coherence * std::polar(1.0, -phase);
    Eigen::Matrix2cd rho;
    rho << std::norm(c_plus), off, std::conj(off), std::norm(c_minus);
    return rho;
}

}  // namespace ddkit
