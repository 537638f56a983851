#pragma once

// Grid-evaluation kernels. Every sweep in the toolkit (spectra, error-signal
// traces, loop responses, quadrature panels) is an independent evaluation per
// grid point, so there are two interchangeable paths:
//
//   Execution::serial    plain loop, the reference used by the tests
//   Execution::parallel  OpenMP static schedule over the same points
//
// Both write result[i] = fn(grid[i]) into a pre-sized vector, so the outputs
// are bit-identical regardless of thread count. Reductions are always done
// serially by the caller over the returned vector.

#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

namespace sqz {

enum class Execution { serial, parallel };

template <class Fn>
auto map_grid_serial(std::span<const double> grid, Fn&& fn) {
    using R = std::invoke_result_t<Fn&, double>;
    std::vector<R> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i] = fn(grid[i]);
    }
    return out;
}

template <class Fn>
auto map_grid_parallel(std::span<const double> grid, Fn&& fn) {
    using R = std::invoke_result_t<Fn&, double>;
    std::vector<R> out(grid.size());
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = fn(grid[static_cast<std::size_t>(i)]);
    }
    return out;
}

template <class Fn>
auto map_grid(std::span<const double> grid, Fn&& fn, Execution exec = Execution::parallel) {
    return exec == Execution::serial ? map_grid_serial(grid, fn) : map_grid_parallel(grid, fn);
}

// Log-spaced grid from lo to hi with `points_per_decade` intervals per decade.
// Endpoints are included exactly; the point count is
// round(decades * points_per_decade) + 1.
std::vector<double> log_grid(double lo, double hi, int points_per_decade);

// Uniform grid of n >= 2 points on [lo, hi], endpoints exact.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

}  // namespace sqz
