#pragma once

#include <span>
#include <vector>

#include "anisowave/grid.hpp"

namespace anisowave {

/// Fornberg weights for the `order`-th derivative at x0 from nodes xs.
std::vector<double> fd_weights(double x0, std::span<const double> xs, int order);

// Pure directional derivative d^order/dx_axis^order of the sampled field,
// second-order accurate: centered stencils inside, one-sided (order+2 point)
// stencils at the boundary. Optionally overrides the grid spacing (used when a
// field is differentiated in rescaled coordinates).
std::vector<double> axis_derivative(const Grid& g, int axis, int order);
std::vector<double> axis_derivative(std::span<const double> data,
                                    std::span<const std::size_t> dims, int axis, int order,
                                    double spacing);

/// Mixed derivative: sequential axis derivatives with the given per-axis orders.
std::vector<double> mixed_derivative(const Grid& g, std::span<const int> orders);

}  // namespace anisowave
