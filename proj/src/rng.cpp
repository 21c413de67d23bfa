#include "ddkit/rng.hpp"

#include <cmath>
#include <numbers>

namespace ddkit {

double Rng::gaussian() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ddkit
