#include "ddkit/order_fit.hpp"

#include <cmath>
#include <stdexcept>

namespace ddkit {

OrderFitResult fit_order(const std::vector<std::pair<double, double>>& pairs, double floor,
                         double ceiling) {
    if (pairs.size() < 6)
        throw std::invalid_argument("fit_order: need at least 6 (T, error) pairs");
    if (!(floor >= 0.0) || !(ceiling > floor))
        throw std::invalid_argument("fit_order: need 0 <= floor < ceiling");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!(pairs[i].first > 0.0))
            throw std::invalid_argument("fit_order: T values must be positive");
        if (i > 0 && !(pairs[i].first > pairs[i - 1].first))
            throw std::invalid_argument("fit_order: T values must be strictly increasing");
        if (!(pairs[i].second >= 0.0))
            throw std::invalid_argument("fit_order: errors must be non-negative");
    }

    std::vector<double> x, y;
    OrderFitResult res;
    for (const auto& [t, err] : pairs) {
        if (err <= floor || err >= ceiling) continue;
        x.push_back(std::log(t));
        y.push_back(std::log(err));
        if (res.points_used == 0) res.window_lo = t;
        res.window_hi = t;
        ++res.points_used;
    }
    if (res.points_used < 4) return res;  // flagged invalid, diagnostics only

    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    res.valid = true;
    res.slope = sxy / sxx;
    res.intercept = my - res.slope * mx;
    res.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return res;
}

std::vector<double> make_time_grid(double t_max, int points, double ratio) {
    if (!(t_max > 0.0)) throw std::invalid_argument("make_time_grid: t_max must be positive");
    if (points < 1) throw std::invalid_argument("make_time_grid: need at least one point");
    if (!(ratio > 1.0)) throw std::invalid_argument("make_time_grid: ratio must exceed 1");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(points - 1 - i)] = t_max / std::pow(ratio, i);
    return grid;
}

}  // namespace ddkit
