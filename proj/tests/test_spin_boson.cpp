#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "ddkit/order_fit.hpp"
#include "ddkit/rng.hpp"
#include "ddkit/spin_boson.hpp"

using namespace ddkit;
using std::complex;

namespace {

constexpr double kPi = std::numbers::pi;

PulseSequence random_sequence(Rng& rng, double total_time) {
    int n = static_cast<int>(rng.next_u64() % 5);
    std::vector<double> times;
    for (int i = 0; i < n; ++i) times.push_back(rng.uniform(0.02, 0.98) * total_time);
    std::sort(times.begin(), times.end());
    std::vector<Pulse> pulses;
    for (double t : times) pulses.push_back({t, Pauli::X});
    return PulseSequence(total_time, std::move(pulses), "random");
}

complex<double> trajectory_gap(const std::vector<BosonMode>& modes, const PulseSequence& seq,
                               complex<double> p0) {
    std::vector<complex<double>> init(modes.size(), p0);
    CoherentTrajectoryPair traj =
        evolve_pair(modes, seq, init, coherence_grid(seq, 16));
    return traj.p_plus[0].back() - traj.p_minus[0].back();
}

}  // namespace

TEST_SUITE_BEGIN("spinboson");

TEST_CASE("free rotation from the vacuum") {
    std::vector<BosonMode> modes = {{1.0, 1.0}};
    PulseSequence seq = generate_free(2.0 * kPi);
    CoherentTrajectoryPair traj = evolve_pair(modes, seq, {}, coherence_grid(seq, 64));
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        complex<double> expected = -0.5 * (1.0 - std::polar(1.0, -traj.times[i]));
        CHECK(std::abs(traj.p_plus[0][i] - expected) < 1e-13);
        CHECK(std::abs(traj.p_minus[0][i] + expected) < 1e-13);
    }
    // initial condition
    CHECK(traj.p_plus[0][0] == complex<double>(0.0, 0.0));
    CHECK(traj.p_minus[0][0] == complex<double>(0.0, 0.0));
}

TEST_CASE("grid validation") {
    std::vector<BosonMode> modes = {{1.0, 0.5}};
    PulseSequence seq = generate_udd(1, 1.0);
    std::vector<double> grid = {0.0, 0.3, 1.0};   // misses the pulse at 0.5
    CHECK_THROWS_AS(evolve_pair(modes, seq, {}, grid), std::invalid_argument);
    std::vector<BosonMode> zero_mode = {{0.0, 1.0}};
    CHECK_THROWS_AS(evolve_pair(zero_mode, seq, {}, coherence_grid(seq, 8)),
                    std::invalid_argument);
}

TEST_CASE("closed-form gap for free evolution") {
    BosonMode mode{1.0, 1.0};
    complex<double> delta = delta_final(mode, generate_free(kPi));
    CHECK(std::abs(delta - complex<double>(-2.0, 0.0)) < 1e-14);
}

TEST_CASE("closed form equals the trajectory difference") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        BosonMode mode{rng.uniform(0.2, 4.0), rng.uniform(-1.5, 1.5)};
        PulseSequence seq = random_sequence(rng, rng.uniform(0.5, 3.0));
        complex<double> p0(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        complex<double> via_traj = trajectory_gap({mode}, seq, p0);
        complex<double> closed = delta_final(mode, seq);
        double scale = std::max(std::abs(closed), 1e-30);
        CHECK(std::abs(via_traj - closed) / scale < 1e-11);
    }
}

TEST_CASE("gap is independent of the initial amplitude") {
    Rng rng(7);
    BosonMode mode{1.3, 0.8};
    PulseSequence seq = generate_udd(3, 1.7);
    complex<double> reference = trajectory_gap({mode}, seq, 0.0);
    for (int trial = 0; trial < 10; ++trial) {
        complex<double> p0(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        CHECK(std::abs(trajectory_gap({mode}, seq, p0) - reference) < 1e-12);
    }
}

TEST_CASE("series expansion of the gap at small w T") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + static_cast<int>(rng.next_u64() % 4);
        double total = rng.uniform(0.02, 0.1);
        BosonMode mode{rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0)};
        REQUIRE(mode.omega * total <= 0.1);
        PulseSequence seq = generate_udd(n, total);
        complex<double> series = 0.0;
        complex<double> iwt(0.0, mode.omega * total);
        complex<double> power = 1.0;
        double factorial = 1.0;
        for (int k = 1; k <= 12; ++k) {
            power *= iwt;
            factorial *= k;
            series += power / factorial * lambda_moment(seq, k);
        }
        double sign = (n % 2 == 0) ? -1.0 : 1.0;
        series *= sign * std::polar(1.0, -mode.omega * total) * mode.kappa / mode.omega;
        complex<double> exact = delta_final(mode, seq);
        // both routes carry ~eps-size cancellation noise on the kappa/omega scale
        double floor = 1e-14 * mode.kappa / mode.omega;
        CHECK(std::abs(series - exact) <= 1e-10 * std::abs(exact) + floor);
    }
}

TEST_CASE("echo revival and overlap values") {
    std::vector<BosonMode> modes = {{1.0, 1.0}};
    PulseSequence seq = generate_free(kPi);
    CoherenceTrace trace = coherence(modes, seq, coherence_grid(seq, 32));
    CHECK(trace.coherence.front() == 1.0);
    CHECK(trace.coherence.back() == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));

    PulseSequence revival = generate_free(2.0 * kPi);
    CoherenceTrace full = coherence(modes, revival, coherence_grid(revival, 32));
    CHECK(full.coherence.back() == doctest::Approx(1.0).epsilon(1e-12));

    for (double v : full.coherence) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("echo gap magnitude matches the filter function") {
    BosonMode mode{2.0 * kPi, 0.7};   // w T = 2 pi k at T = 1
    PulseSequence seq = generate_udd(1, 1.0);
    complex<double> gap = trajectory_gap({mode}, seq, complex<double>(0.3, -0.2));
    double expected = std::abs(mode.kappa * filter_function(seq, mode.omega));
    CHECK(std::abs(gap) == doctest::Approx(expected).epsilon(1e-11));
}

TEST_CASE("coherence deficit drops with the square of the sequence order") {
    std::vector<BosonMode> modes = {{1.0, 0.7}, {1.7, -0.4}, {0.6, 0.3}};
    for (int n : {1, 2}) {
        std::vector<std::pair<double, double>> pairs;
        for (double total : make_time_grid(0.9, 12, std::sqrt(2.0))) {
            PulseSequence seq = generate_udd(n, total);
            CoherenceTrace trace = coherence(modes, seq, coherence_grid(seq, 8));
            pairs.emplace_back(total, 1.0 - trace.coherence.back());
        }
        OrderFitResult fit = fit_order(pairs, 1e-13, 1e-2);
        REQUIRE(fit.valid);
        CHECK(fit.slope == doctest::Approx(2.0 * (n + 1)).epsilon(0.3 / (2.0 * (n + 1))));
    }
}

TEST_CASE("dephased density matrix") {
    Eigen::Matrix2cd pure = qubit_density_matrix(std::sqrt(0.5), std::sqrt(0.5), 1.0, 0.0);
    CHECK(std::abs(pure(0, 1) - complex<double>(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(pure.trace() - 1.0) < 1e-15);

    Eigen::Matrix2cd dead = qubit_density_matrix(std::sqrt(0.5), std::sqrt(0.5), 0.0, 1.3);
    CHECK(std::abs(dead(0, 1)) == 0.0);

    Eigen::Matrix2cd partial =
        qubit_density_matrix(std::sqrt(0.5), std::sqrt(0.5), std::exp(-4.0), 0.0);
    CHECK(std::abs(partial(1, 0)) == doctest::Approx(0.5 * std::exp(-4.0)));
    CHECK((partial - partial.adjoint()).norm() < 1e-15);

    CHECK_THROWS_AS(qubit_density_matrix(1.0, 0.5, 1.0, 0.0), std::invalid_argument);
}

TEST_SUITE_END();
