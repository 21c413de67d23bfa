#include <cmath>
#include <numbers>

#include <doctest.h>

#include "ddkit/modulation.hpp"
#include "ddkit/sequence.hpp"

using namespace ddkit;

namespace {

constexpr double kPi = std::numbers::pi;

// smooth admissible free segment: +1 at both ends, dips in the middle
std::vector<double> smooth_segment(int samples) {
    std::vector<double> v(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        double x = static_cast<double>(i) / (samples - 1);   // in [0, 1]
        v[static_cast<std::size_t>(i)] = 1.0 - 0.8 * std::sin(kPi * x) * std::sin(kPi * x);
    }
    return v;
}

}  // namespace

TEST_SUITE_BEGIN("modulation");

TEST_CASE("degenerate segment reproduces the square wave") {
    GeneralizedModulation mod(3, {1.0, 1.0}, 1024);
    ModulationFunction square = modulation(generate_udd(3, 1.0));
    for (double theta : {0.1, 0.5, 1.1, 1.9, 2.6, 3.0}) {
        double t = std::sin(theta / 2.0) * std::sin(theta / 2.0);
        CHECK(mod.f_plus(theta) == doctest::Approx(square(t)));
        CHECK(std::fabs(mod.f_minus(theta)) < 1e-15);
    }
}

TEST_CASE("normalization holds at every grid sample") {
    GeneralizedModulation mod(4, smooth_segment(33), 2048);
    double worst = 0.0;
    for (int i = 0; i < mod.grid_size(); ++i) {
        double fp = mod.f_plus_samples()[static_cast<std::size_t>(i)];
        double fm = mod.f_minus_samples()[static_cast<std::size_t>(i)];
        worst = std::max(worst, std::fabs(fp * fp + fm * fm - 1.0));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("symmetries hold at grid points") {
    const int order = 5;
    GeneralizedModulation mod(order, smooth_segment(17), 1024);
    const double period = 2.0 * kPi / (order + 1);
    for (int i = 0; i < mod.grid_size(); i += 7) {
        double theta = mod.theta_grid()[static_cast<std::size_t>(i)];
        double shifted = theta + period;
        for (auto f : {&GeneralizedModulation::f_plus, &GeneralizedModulation::f_minus}) {
            if (shifted < kPi)
                CHECK(std::fabs((mod.*f)(theta) - (mod.*f)(shifted)) < 1e-12);
            // anti-symmetry about the nearest half-period node
            double node = std::round(theta / (period / 2.0)) * (period / 2.0);
            double mirrored = 2.0 * node - theta;
            if (mirrored > 0.0 && mirrored < kPi && std::fabs(mirrored - theta) > 1e-9)
                CHECK(std::fabs((mod.*f)(mirrored) + (mod.*f)(theta)) < 1e-12);
            // symmetry about the quarter point of the containing half period
            double cell = std::floor(theta / (period / 2.0));
            double axis = (cell + 0.5) * (period / 2.0);
            double reflected = 2.0 * axis - theta;
            if (reflected > 0.0 && reflected < kPi)
                CHECK(std::fabs((mod.*f)(reflected) - (mod.*f)(theta)) < 1e-12);
        }
    }
}

TEST_CASE("continuity of the companion component") {
    GeneralizedModulation mod(3, smooth_segment(25), 512);
    CHECK(std::fabs(mod.f_minus(1e-9)) < 1e-4);
    const double node = kPi / 4.0;   // an anti-symmetry point for N = 3
    CHECK(mod.f_minus(node + 1e-9) == doctest::Approx(mod.f_minus(node - 1e-9)).epsilon(1e-4));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(GeneralizedModulation(2, {1.0, 1.2}, 512), std::invalid_argument);
    CHECK_THROWS_AS(GeneralizedModulation(2, {0.5, 1.0}, 512), std::invalid_argument);
    CHECK_THROWS_AS(GeneralizedModulation(2, {1.0, 0.99}, 512), std::invalid_argument);
    CHECK_THROWS_AS(GeneralizedModulation(0, {1.0, 1.0}, 512), std::invalid_argument);
    CHECK_THROWS_AS(GeneralizedModulation(2, {1.0}, 512), std::invalid_argument);
}

TEST_CASE("square-wave sine series matches 4/(k pi) on the allowed lines") {
    for (int n : {1, 3, 4, 6}) {
        HarmonicsReport rep = odd_harmonics_check(generate_udd(n, 1.0), 6);
        CHECK(rep.pass);
        int base = n + 1;
        for (int k : {1, 3, 5}) {
            double c = rep.coefficients[static_cast<std::size_t>(k * base - 1)];
            CHECK(c == doctest::Approx(4.0 / (k * kPi)).epsilon(1e-6));
        }
    }
}

TEST_CASE("equally spaced pulses leak into forbidden harmonics") {
    std::vector<Pulse> pdd = {{1.0 / 3.0, Pauli::X}, {2.0 / 3.0, Pauli::X}};
    HarmonicsReport rep = odd_harmonics_check(PulseSequence(1.0, pdd, "pdd:2"), 6);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_forbidden_abs > 1e-2);
}

TEST_CASE("smooth admissible segments pass the harmonic gate") {
    for (int n : {2, 3, 5}) {
        GeneralizedModulation mod(n, smooth_segment(41), 4096);
        HarmonicsReport rep = odd_harmonics_check(mod, 6);
        CHECK(rep.pass);
        CHECK(rep.max_forbidden_abs < 1e-6 * rep.max_allowed_abs);
    }
}

TEST_CASE("coarse grids are rejected for wide harmonic ranges") {
    GeneralizedModulation mod(5, smooth_segment(9), 64);
    CHECK_THROWS_AS(odd_harmonics_check(mod, 8), std::invalid_argument);
}

TEST_SUITE_END();
