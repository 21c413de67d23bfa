#include "ddkit/classical_noise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "ddkit/rng.hpp"

namespace ddkit {

namespace {

constexpr double kPi = std::numbers::pi;

// adaptive Simpson with absolute-scale escape for near-zero integrals
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

NoiseSpectrum NoiseSpectrum::ohmic_sharp(double amplitude, double cutoff) {
    if (amplitude < 0.0) throw std::invalid_argument("NoiseSpectrum: amplitude must be >= 0");
    if (!(cutoff > 0.0)) throw std::invalid_argument("NoiseSpectrum: cutoff must be positive");
    NoiseSpectrum s;
    s.kind_ = Kind::OhmicSharp;
    s.amplitude_ = amplitude;
    s.cutoff_ = cutoff;
    return s;
}

NoiseSpectrum NoiseSpectrum::inverse_quartic_soft(double amplitude, double omega_min) {
    if (amplitude < 0.0) throw std::invalid_argument("NoiseSpectrum: amplitude must be >= 0");
    if (!(omega_min > 0.0))
        throw std::invalid_argument(
            "NoiseSpectrum: soft cutoff needs omega_min > 0 (1/w^4 is not integrable at 0)");
    NoiseSpectrum s;
    s.kind_ = Kind::InverseQuarticSoft;
    s.amplitude_ = amplitude;
    s.cutoff_ = omega_min;
    return s;
}

NoiseSpectrum NoiseSpectrum::tabulated(std::vector<double> omega, std::vector<double> values) {
    if (omega.size() != values.size() || omega.size() < 2)
        throw std::invalid_argument("NoiseSpectrum: table needs >= 2 matched rows");
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (i > 0 && !(omega[i] > omega[i - 1]))
            throw std::invalid_argument("NoiseSpectrum: table frequencies must increase");
        if (!(omega[i] >= 0.0) || values[i] < 0.0)
            throw std::invalid_argument("NoiseSpectrum: table entries must be non-negative");
    }
    NoiseSpectrum s;
    s.kind_ = Kind::Tabulated;
    s.amplitude_ = *std::max_element(values.begin(), values.end());
    s.tab_omega_ = std::move(omega);
    s.tab_values_ = std::move(values);
    return s;
}

double NoiseSpectrum::operator()(double omega) const {
    if (omega < 0.0) return 0.0;
    switch (kind_) {
        case Kind::OhmicSharp:
            return omega <= cutoff_ ? amplitude_ * omega : 0.0;
        case Kind::InverseQuarticSoft: {
            double w = std::max(omega, cutoff_);
            return amplitude_ / (w * w * w * w);
        }
        case Kind::Tabulated: {
            if (omega < tab_omega_.front() || omega > tab_omega_.back()) return 0.0;
            auto it = std::upper_bound(tab_omega_.begin(), tab_omega_.end(), omega);
            std::size_t i = static_cast<std::size_t>(it - tab_omega_.begin());
            if (i == 0) return tab_values_.front();
            if (i == tab_omega_.size()) return tab_values_.back();
            double frac = (omega - tab_omega_[i - 1]) / (tab_omega_[i] - tab_omega_[i - 1]);
            return tab_values_[i - 1] * (1.0 - frac) + tab_values_[i] * frac;
        }
    }
    return 0.0;
}

double NoiseSpectrum::max_frequency() const {
    switch (kind_) {
        case Kind::OhmicSharp: return cutoff_;
        case Kind::InverseQuarticSoft: return 50.0 * cutoff_;  // tail power < 1e-5 of total
        case Kind::Tabulated: return tab_omega_.back();
    }
    return 0.0;
}

NoiseTrajectory sample_trajectory(const NoiseSpectrum& spectrum, double total_time, double dt,
                                  std::uint64_t seed, const std::vector<double>& extra_times,
                                  int n_modes) {
    if (!(total_time > 0.0))
        throw std::invalid_argument("sample_trajectory: total_time must be positive");
    if (n_modes < 1) throw std::invalid_argument("sample_trajectory: n_modes must be >= 1");
    const double w_max = spectrum.max_frequency();
    if (!(dt > 0.0) || dt > kPi / (4.0 * w_max))
        throw std::invalid_argument(
            "sample_trajectory: dt must be positive and resolve the spectral cutoff "
            "(dt <= pi / (4 w_max))");

    NoiseTrajectory traj;
    traj.seed = seed;
    const int n_steps = std::max(1, static_cast<int>(std::ceil(total_time / dt)));
    traj.times.reserve(static_cast<std::size_t>(n_steps) + extra_times.size() + 1);
    for (int i = 0; i <= n_steps; ++i)
        traj.times.push_back(total_time * static_cast<double>(i) /
                             static_cast<double>(n_steps));
    for (double t : extra_times) {
        if (t < 0.0 || t > total_time)
            throw std::invalid_argument("sample_trajectory: extra time outside [0, T]");
        traj.times.push_back(t);
    }
    std::sort(traj.times.begin(), traj.times.end());
    traj.times.erase(std::unique(traj.times.begin(), traj.times.end(),
                                 [&](double a, double b) {
                                     return std::fabs(a - b) <= 1e-15 * total_time;
                                 }),
                     traj.times.end());

    // midpoint frequency grid and random phases
    const double dw = w_max / n_modes;
    std::vector<double> amp(static_cast<std::size_t>(n_modes));
    std::vector<double> phase(static_cast<std::size_t>(n_modes));
    std::vector<double> omega(static_cast<std::size_t>(n_modes));
    Rng rng(seed);
    for (int k = 0; k < n_modes; ++k) {
        omega[static_cast<std::size_t>(k)] = (k + 0.5) * dw;
        amp[static_cast<std::size_t>(k)] =
            std::sqrt(2.0 * spectrum(omega[static_cast<std::size_t>(k)]) * dw / kPi);
        phase[static_cast<std::size_t>(k)] = rng.uniform(0.0, 2.0 * kPi);
    }

    // sum of cosines; per-mode rotation recurrence over the uniform part,
    // direct evaluation when the step changes (spliced pulse instants)
    traj.values.assign(traj.times.size(), 0.0);
    const double uniform_step = total_time / n_steps;
    for (int k = 0; k < n_modes; ++k) {
        const std::size_t sk = static_cast<std::size_t>(k);
        if (amp[sk] == 0.0) continue;
        const double w = omega[sk];
        const double cu = std::cos(w * uniform_step), su = std::sin(w * uniform_step);
        double c = std::cos(phase[sk]), s = std::sin(phase[sk]);
        traj.values[0] += amp[sk] * c;
        for (std::size_t i = 1; i < traj.times.size(); ++i) {
            double step = traj.times[i] - traj.times[i - 1];
            if (std::fabs(step - uniform_step) <= 1e-12 * uniform_step) {
                double cn = c * cu - s * su;
                s = s * cu + c * su;
                c = cn;
            } else {
                double cs = std::cos(w * step), ss = std::sin(w * step);
                double cn = c * cs - s * ss;
                s = s * cs + c * ss;
                c = cn;
            }
            traj.values[i] += amp[sk] * c;
        }
    }
    return traj;
}

double accumulated_phase(const NoiseTrajectory& traj, const PulseSequence& seq) {
    const double T = seq.total_time();
    if (traj.times.size() < 2 || traj.times.front() > 1e-12 * T ||
        traj.times.back() < T * (1.0 - 1e-12))
        throw std::invalid_argument("accumulated_phase: trajectory does not cover [0, T]");
    const double tol = 1e-12 * T;
    for (const Pulse& p : seq.pulses()) {
        auto it = std::lower_bound(traj.times.begin(), traj.times.end(), p.time - tol);
        if (it == traj.times.end() || std::fabs(*it - p.time) > tol)
            throw std::invalid_argument("accumulated_phase: trajectory grid misses a pulse time");
    }
    ModulationFunction f = modulation(seq);
    double phi = 0.0;
    for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
        if (traj.times[i] >= T) break;
        double mid = 0.5 * (traj.times[i] + traj.times[i + 1]);
        phi += f(mid) * 0.5 * (traj.values[i] + traj.values[i + 1]) *
               (traj.times[i + 1] - traj.times[i]);
    }
    return 2.0 * phi;
}

McCoherence mc_coherence(const NoiseSpectrum& spectrum, const PulseSequence& seq,
                         int n_realizations, std::uint64_t seed, int n_modes) {
    if (n_realizations < 100)
        throw std::invalid_argument("mc_coherence: need at least 100 realizations");
    const double T = seq.total_time();
    const double w_max = spectrum.max_frequency();
    // step small enough that the trapezoid bias is far below the MC error
    const double dt = std::min(0.1 / w_max, T / 32.0);
    std::vector<double> pulse_times;
    for (const Pulse& p : seq.pulses()) pulse_times.push_back(p.time);

    std::vector<std::complex<double>> samples(static_cast<std::size_t>(n_realizations));
    for (int r = 0; r < n_realizations; ++r) {
        NoiseTrajectory traj = sample_trajectory(spectrum, T, dt,
                                                 derive_seed(seed, static_cast<std::uint64_t>(r)),
                                                 pulse_times, n_modes);
        double phi = accumulated_phase(traj, seq);
        samples[static_cast<std::size_t>(r)] = std::polar(1.0, -phi);
    }

    std::complex<double> sum = 0.0;
    for (const auto& v : samples) sum += v;
    const double n = static_cast<double>(n_realizations);
    McCoherence out;
    out.realizations = n_realizations;
    out.coherence = std::abs(sum / n);

    // jackknife over leave-one-out magnitudes
    double jk_mean = 0.0;
    std::vector<double> jk(static_cast<std::size_t>(n_realizations));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        jk[i] = std::abs((sum - samples[i]) / (n - 1.0));
        jk_mean += jk[i];
    }
    jk_mean /= n;
    double var = 0.0;
    for (double v : jk) var += (v - jk_mean) * (v - jk_mean);
    out.std_error = std::sqrt((n - 1.0) / n * var);
    return out;
}

double coherence_exponent(const NoiseSpectrum& spectrum, const PulseSequence& seq) {
    seq.require_single_axis("coherence_exponent");
    auto integrand = [&](double w) { return spectrum(w) * std::norm(filter_function(seq, w)); };
    const double w_max = spectrum.max_frequency();
    // scale-setting pass: crude midpoint estimate over the support
    double scale = 0.0;
    for (int i = 0; i < 64; ++i) scale += integrand((i + 0.5) * w_max / 64.0);
    scale *= w_max / 64.0;
    // split at the filter oscillation scale so the adaptive pass converges;
    // the per-chunk tolerance carries the chunk count so the total stays
    // at 1e-8 relative
    const double T = seq.total_time();
    double chunk = std::min(w_max, 2.0 * kPi / T);
    double n_chunks = std::ceil(w_max / chunk);
    double tol = 1e-8 * std::max(scale, 1e-300) / n_chunks;
    double total = 0.0;
    for (double a = 0.0; a < w_max; a += chunk)
        total += integrate(integrand, a, std::min(a + chunk, w_max), tol);
    return 2.0 / kPi * total;
}

double analytic_coherence(const NoiseSpectrum& spectrum, const PulseSequence& seq) {
    return std::exp(-coherence_exponent(spectrum, seq));
}

}  // namespace ddkit
