#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace anisowave {

// D-dimensional array of real samples over an axis-aligned box. Samples sit at
// cell centers: x_i(k) = lo_i + (k + 1/2) h_i, which makes the midpoint rule
// the natural quadrature. Row-major storage, last axis fastest.
struct Grid {
    std::vector<std::size_t> dims;
    std::vector<std::array<double, 2>> box;  // per-axis [lo, hi]
    std::vector<double> data;

    int dim() const { return static_cast<int>(dims.size()); }
    std::size_t size() const;
    double spacing(int axis) const;
    double coord(int axis, std::size_t index) const;
    double cell_volume() const;
    std::size_t stride(int axis) const;  // row-major, last axis fastest

    double& at(std::span<const std::size_t> idx);
    double at(std::span<const std::size_t> idx) const;
};

Grid make_grid(std::vector<std::size_t> dims, std::vector<std::array<double, 2>> box);

/// Samples f at the cell centers of the given lattice.
Grid sample_function(std::vector<std::size_t> dims, std::vector<std::array<double, 2>> box,
                     const std::function<double(std::span<const double>)>& f);

/// Walks all multi-indices of `dims` in row-major order.
void for_each_index(std::span<const std::size_t> dims,
                    const std::function<void(std::span<const std::size_t>, std::size_t)>& body);

/// Discrete L_p norm with midpoint weights: (cell_volume * sum |v|^p)^{1/p}.
double lp_norm(std::span<const double> values, double p, double cell_volume);

}  // namespace anisowave
