#pragma once

#include <vector>

namespace ddkit {

struct OrderFitResult {
    bool valid = false;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int points_used = 0;
    double window_lo = 0.0;   // smallest / largest T among the used points
    double window_hi = 0.0;
};

// Least-squares line through (log T, log error) restricted to errors
// strictly inside (floor, ceiling). Fewer than 4 surviving points flags
// the result invalid instead of failing hard.
OrderFitResult fit_order(const std::vector<std::pair<double, double>>& pairs,
                         double floor = 1e-12, double ceiling = 1e-1);

// Geometric grid of `points` values descending from t_max by `ratio`,
// returned in increasing order.
std::vector<double> make_time_grid(double t_max, int points, double ratio);

}  // namespace ddkit
