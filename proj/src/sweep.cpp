#include "sqz/sweep.hpp"

#include <cmath>
#include <stdexcept>

namespace sqz {

std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
    if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log grid needs 0 < lo <= hi");
    if (points_per_decade < 1) throw std::invalid_argument("points per decade must be >= 1");
    const double decades = std::log10(hi / lo);
    const auto intervals = static_cast<std::size_t>(std::lround(decades * points_per_decade));
    if (intervals == 0) return {lo};
    std::vector<double> grid(intervals + 1);
    const double log_lo = std::log10(lo);
    const double step = decades / static_cast<double>(intervals);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = std::pow(10.0, log_lo + step * static_cast<double>(i));
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    if (n < 2) throw std::invalid_argument("linear grid needs at least two points");
    std::vector<double> grid(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid[i] = lo + step * static_cast<double>(i);
    grid.back() = hi;
    return grid;
}

}  // namespace sqz
