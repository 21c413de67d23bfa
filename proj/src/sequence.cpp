#include "ddkit/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace ddkit {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Raw operator event on an integer tick grid. Integer times make same-time
// detection exact when recursions are flattened.
struct TickOp {
    std::int64_t tick;
    Pauli axis;
};

std::vector<Pulse> ticks_to_pulses(std::vector<TickOp> ops, double tau) {
    std::sort(ops.begin(), ops.end(),
              [](const TickOp& a, const TickOp& b) { return a.tick < b.tick; });
    std::vector<Pulse> out;
    std::size_t i = 0;
    while (i < ops.size()) {
        std::int64_t t = ops[i].tick;
        Pauli p = Pauli::I;
        for (; i < ops.size() && ops[i].tick == t; ++i) p = p * ops[i].axis;
        if (p != Pauli::I) out.push_back({static_cast<double>(t) * tau, p});
    }
    return out;
}

// Dephasing concatenation U_n = X U_{n-1} X U_{n-1} flattened onto ticks of
// size tau; level n spans 2^n ticks. Boundary operators at tick 0 / 2^n are
// kept here and folded out by PulseSequence canonicalization.
std::vector<TickOp> cdd2_ticks(int level) {
    if (level == 0) return {};
    std::vector<TickOp> inner = cdd2_ticks(level - 1);
    std::int64_t half = std::int64_t{1} << (level - 1);
    std::vector<TickOp> out = inner;
    out.push_back({half, Pauli::X});
    for (const TickOp& op : inner) out.push_back({op.tick + half, op.axis});
    out.push_back({2 * half, Pauli::X});
    return out;
}

// General concatenation U_n = U_{n-1} [X U X][Y U Y][Z U Z]; level n spans
// 4^n ticks, the z-conjugated block evolving first.
std::vector<TickOp> cdd4_ticks(int level) {
    if (level == 0) return {};
    std::vector<TickOp> inner = cdd4_ticks(level - 1);
    std::int64_t quarter = std::int64_t{1} << (2 * (level - 1));
    std::vector<TickOp> out;
    auto emit_block = [&](std::int64_t offset) {
        for (const TickOp& op : inner) out.push_back({op.tick + offset, op.axis});
    };
    out.push_back({0, Pauli::Z});
    emit_block(0);
    out.push_back({quarter, Pauli::Z});
    out.push_back({quarter, Pauli::Y});
    emit_block(quarter);
    out.push_back({2 * quarter, Pauli::Y});
    out.push_back({2 * quarter, Pauli::X});
    emit_block(2 * quarter);
    out.push_back({3 * quarter, Pauli::X});
    emit_block(3 * quarter);
    return out;
}

}  // namespace

PulseSequence::PulseSequence(double total_time, std::vector<Pulse> pulses, std::string label)
    : total_time_(total_time), label_(std::move(label)) {
    require(std::isfinite(total_time) && total_time > 0.0,
            "PulseSequence: total_time must be positive");
    std::stable_sort(pulses.begin(), pulses.end(),
                     [](const Pulse& a, const Pulse& b) { return a.time < b.time; });
    std::size_t i = 0;
    while (i < pulses.size()) {
        double t = pulses[i].time;
        require(std::isfinite(t) && t >= 0.0 && t <= total_time,
                "PulseSequence: pulse time outside [0, T]");
        Pauli p = Pauli::I;
        for (; i < pulses.size() && pulses[i].time == t; ++i) p = p * pulses[i].axis;
        if (p == Pauli::I) continue;
        // Operators landing exactly on a boundary are artifacts of flattening
        // recursive constructions; they conjugate the decoupled-frame
        // propagator without changing any error metric, so they are dropped.
        if (t > 0.0 && t < total_time) {
            pulses_.push_back({t, p});
            parity_ = parity_ * p;
        }
    }
}

std::vector<double> PulseSequence::segment_boundaries() const {
    std::vector<double> t;
    t.reserve(pulses_.size() + 2);
    t.push_back(0.0);
    for (const Pulse& p : pulses_) t.push_back(p.time);
    t.push_back(total_time_);
    return t;
}

std::optional<Pauli> PulseSequence::single_axis() const {
    std::optional<Pauli> axis;
    for (const Pulse& p : pulses_) {
        if (!axis) {
            axis = p.axis;
        } else if (*axis != p.axis) {
            return std::nullopt;
        }
    }
    return axis ? axis : std::optional<Pauli>(Pauli::I);
}

void PulseSequence::require_single_axis(const char* who) const {
    if (!single_axis())
        throw std::invalid_argument(std::string(who) + ": sequence must be single-axis");
}

std::vector<double> udd_fractions(int n_pulses) {
    require(n_pulses >= 0, "udd_fractions: order must be non-negative");
    std::vector<double> x(static_cast<std::size_t>(n_pulses));
    const long double pi_l = 3.141592653589793238462643383279502884L;
    for (int j = 1; 2 * j <= n_pulses + 1; ++j) {
        long double s = sinl(static_cast<long double>(j) * pi_l /
                             (2.0L * static_cast<long double>(n_pulses + 1)));
        x[static_cast<std::size_t>(j - 1)] = static_cast<double>(s * s);
    }
    // mirror the upper half so that x_j + x_{N+1-j} == 1 exactly
    for (int j = n_pulses; 2 * j > n_pulses + 1; --j)
        x[static_cast<std::size_t>(j - 1)] = 1.0 - x[static_cast<std::size_t>(n_pulses - j)];
    return x;
}

PulseSequence generate_free(double total_time) {
    return PulseSequence(total_time, {}, "free");
}

PulseSequence generate_udd(int n_pulses, double total_time, Pauli axis) {
    require(n_pulses >= 1, "generate_udd: order must be >= 1");
    require(total_time > 0.0, "generate_udd: total_time must be positive");
    require(axis != Pauli::I, "generate_udd: axis must be X, Y or Z");
    std::vector<Pulse> pulses;
    for (double x : udd_fractions(n_pulses)) pulses.push_back({total_time * x, axis});
    return PulseSequence(total_time, std::move(pulses), "udd:" + std::to_string(n_pulses));
}

PulseSequence generate_cpmg(int n_blocks, double total_time) {
    require(n_blocks >= 1, "generate_cpmg: n_blocks must be >= 1");
    require(total_time > 0.0, "generate_cpmg: total_time must be positive");
    double tau = total_time / (4.0 * n_blocks);
    std::vector<Pulse> pulses;
    for (int k = 0; k < n_blocks; ++k) {
        pulses.push_back({(4.0 * k + 1.0) * tau, Pauli::X});
        pulses.push_back({(4.0 * k + 3.0) * tau, Pauli::X});
    }
    return PulseSequence(total_time, std::move(pulses), "cpmg:" + std::to_string(n_blocks));
}

PulseSequence generate_cdd_dephasing(int level, double tau) {
    require(level >= 0, "generate_cdd_dephasing: level must be >= 0");
    require(level <= 30, "generate_cdd_dephasing: level too large");
    require(tau > 0.0, "generate_cdd_dephasing: tau must be positive");
    double total = std::ldexp(tau, level);  // 2^level * tau
    return PulseSequence(total, ticks_to_pulses(cdd2_ticks(level), tau),
                         "cdd:" + std::to_string(level));
}

PulseSequence generate_cdd_general(int level, double tau) {
    require(level >= 0, "generate_cdd_general: level must be >= 0");
    require(level <= 15, "generate_cdd_general: level too large");
    require(tau > 0.0, "generate_cdd_general: tau must be positive");
    double total = std::ldexp(tau, 2 * level);  // 4^level * tau
    return PulseSequence(total, ticks_to_pulses(cdd4_ticks(level), tau),
                         "cdd4:" + std::to_string(level));
}

PulseSequence generate_cudd(int n_inner, int level, double tau_inner) {
    require(n_inner >= 1, "generate_cudd: inner order must be >= 1");
    require(level >= 0, "generate_cudd: concatenation level must be >= 0");
    require(level <= 24, "generate_cudd: concatenation level too large");
    require(tau_inner > 0.0, "generate_cudd: block time must be positive");
    std::int64_t blocks = std::int64_t{1} << level;
    std::vector<Pulse> pulses;
    std::vector<double> fracs = udd_fractions(n_inner);
    for (std::int64_t b = 0; b < blocks; ++b) {
        double start = static_cast<double>(b) * tau_inner;
        for (double x : fracs) pulses.push_back({start + tau_inner * x, Pauli::Z});
    }
    for (const TickOp& op : cdd2_ticks(level))
        pulses.push_back({static_cast<double>(op.tick) * tau_inner, op.axis});
    double total = static_cast<double>(blocks) * tau_inner;
    return PulseSequence(total, std::move(pulses),
                         "cudd:" + std::to_string(n_inner) + ":" + std::to_string(level));
}

PulseSequence generate_qdd(int m_outer, int n_inner, double total_time) {
    require(m_outer >= 1, "generate_qdd: outer order must be >= 1");
    require(n_inner >= 0, "generate_qdd: inner order must be >= 0");
    require(total_time > 0.0, "generate_qdd: total_time must be positive");
    std::vector<double> outer = udd_fractions(m_outer);
    std::vector<double> inner = udd_fractions(n_inner);
    std::vector<Pulse> pulses;
    for (double x : outer) pulses.push_back({total_time * x, Pauli::X});
    std::vector<double> bounds;
    bounds.push_back(0.0);
    for (double x : outer) bounds.push_back(total_time * x);
    bounds.push_back(total_time);
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        double a = bounds[k], len = bounds[k + 1] - bounds[k];
        for (double x : inner) pulses.push_back({a + len * x, Pauli::Z});
    }
    return PulseSequence(total_time, std::move(pulses),
                         "qdd:" + std::to_string(m_outer) + ":" + std::to_string(n_inner));
}

double lambda_moment(const PulseSequence& seq, int p) {
    require(p >= 1, "lambda_moment: p must be >= 1");
    seq.require_single_axis("lambda_moment");
    const std::vector<double> t = seq.segment_boundaries();
    const long double invT = 1.0L / static_cast<long double>(seq.total_time());
    // Neumaier-compensated alternating sum; the terms are O(1) and cancel
    // to ~0 for high-order sequences.
    long double sum = 0.0L, comp = 0.0L;
    auto add = [&](long double v) {
        long double s = sum + v;
        comp += (fabsl(sum) >= fabsl(v)) ? (sum - s) + v : (v - s) + sum;
        sum = s;
    };
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
        long double hi = powl(static_cast<long double>(t[j + 1]) * invT, p);
        long double lo = powl(static_cast<long double>(t[j]) * invT, p);
        long double term = hi - lo;
        add((j % 2 == 0) ? term : -term);
    }
    return static_cast<double>(sum + comp);
}

std::vector<double> lambda_moments(const PulseSequence& seq, int max_p) {
    require(max_p >= 1, "lambda_moments: max_p must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(max_p));
    for (int p = 1; p <= max_p; ++p) out.push_back(lambda_moment(seq, p));
    return out;
}

ModulationFunction::ModulationFunction(const PulseSequence& seq)
    : total_time_(seq.total_time()) {
    seq.require_single_axis("modulation");
    for (const Pulse& p : seq.pulses()) flips_.push_back(p.time);
}

double ModulationFunction::operator()(double t) const {
    auto it = std::upper_bound(flips_.begin(), flips_.end(), t);
    std::size_t flips = static_cast<std::size_t>(it - flips_.begin());
    return (flips % 2 == 0) ? 1.0 : -1.0;
}

ModulationFunction modulation(const PulseSequence& seq) { return ModulationFunction(seq); }

std::complex<double> filter_function(const PulseSequence& seq, double omega) {
    seq.require_single_axis("filter_function");
    const std::vector<double> t = seq.segment_boundaries();
    if (omega == 0.0) {
        double sum = 0.0;
        for (std::size_t j = 0; j + 1 < t.size(); ++j)
            sum += ((j % 2 == 0) ? 1.0 : -1.0) * (t[j + 1] - t[j]);
        return {sum, 0.0};
    }
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
        std::complex<double> diff =
            std::polar(1.0, omega * t[j + 1]) - std::polar(1.0, omega * t[j]);
        acc += ((j % 2 == 0) ? 1.0 : -1.0) * diff;
    }
    return acc / std::complex<double>(0.0, omega);
}

std::vector<double> filter_taylor_check(const PulseSequence& seq, int max_n) {
    require(max_n >= 1, "filter_taylor_check: max_n must be >= 1");
    seq.require_single_axis("filter_taylor_check");
    const double T = seq.total_time();
    std::vector<double> direct = lambda_moments(seq, max_n);

    // f(w) = sum_{p>=1} Lambda_p T^p (iw)^{p-1} / p!  is entire, so the
    // coefficient of w^{p-1} follows from a Cauchy circle integral. The
    // radius grows with the order (r T = p) to keep the factorial
    // amplification of rounding noise at bay.
    const std::vector<double> t = seq.segment_boundaries();
    auto eval_f = [&t](std::complex<double> w) {
        const std::complex<double> iw = std::complex<double>(0.0, 1.0) * w;
        std::complex<double> f = 0.0;
        for (std::size_t j = 0; j + 1 < t.size(); ++j)
            f += ((j % 2 == 0) ? 1.0 : -1.0) * (std::exp(iw * t[j + 1]) - std::exp(iw * t[j]));
        return f / iw;
    };
    std::vector<double> taylor(static_cast<std::size_t>(max_n));
    for (int p = 1; p <= max_n; ++p) {
        int k = p - 1;                        // power of w being extracted
        double r = std::max(1, k) / T;        // circle radius
        int m_points = 4 * max_n + 32;
        std::complex<double> acc = 0.0;
        for (int m = 0; m < m_points; ++m) {
            double theta = 2.0 * std::numbers::pi * m / m_points;
            acc += eval_f(std::polar(r, theta)) * std::polar(1.0, -k * theta);
        }
        std::complex<double> a_k = acc / (static_cast<double>(m_points) * std::pow(r, k));
        // Lambda_p = a_{p-1} * p! / (T^p i^{p-1})
        std::complex<double> i_pow = std::polar(1.0, -std::numbers::pi / 2.0 * k);
        double fact = 1.0;
        for (int q = 2; q <= p; ++q) fact *= q;
        taylor[static_cast<std::size_t>(k)] = (a_k * i_pow * fact / std::pow(T, p)).real();
    }

    for (int p = 1; p <= max_n; ++p) {
        double a = direct[static_cast<std::size_t>(p - 1)];
        double b = taylor[static_cast<std::size_t>(p - 1)];
        double scale = std::max(1.0, std::fabs(a));
        if (std::fabs(a - b) > 1e-9 * scale)
            throw std::runtime_error(
                "filter_taylor_check: moment/Taylor disagreement at p=" + std::to_string(p) +
                " (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
    return direct;
}

}  // namespace ddkit
