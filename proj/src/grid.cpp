#include "anisowave/grid.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace anisowave {

std::size_t Grid::size() const {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                           std::multiplies<std::size_t>());
}

double Grid::spacing(int axis) const {
    return (box[axis][1] - box[axis][0]) / static_cast<double>(dims[axis]);
}

double Grid::coord(int axis, std::size_t index) const {
    return box[axis][0] + (static_cast<double>(index) + 0.5) * spacing(axis);
}

double Grid::cell_volume() const {
    double v = 1;
    for (int i = 0; i < dim(); ++i) v *= spacing(i);
    return v;
}

std::size_t Grid::stride(int axis) const {
    std::size_t s = 1;
    for (int i = dim() - 1; i > axis; --i) s *= dims[i];
    return s;
}

double& Grid::at(std::span<const std::size_t> idx) {
    std::size_t flat = 0;
    for (int i = 0; i < dim(); ++i) flat = flat * dims[i] + idx[i];
    return data[flat];
}

double Grid::at(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (int i = 0; i < dim(); ++i) flat = flat * dims[i] + idx[i];
    return data[flat];
}

Grid make_grid(std::vector<std::size_t> dims, std::vector<std::array<double, 2>> box) {
    if (dims.empty() || dims.size() != box.size())
        throw std::invalid_argument("grid dims/box mismatch");
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] < 2) throw std::invalid_argument("grid needs at least 2 cells per axis");
        if (!(box[i][1] > box[i][0])) throw std::invalid_argument("degenerate grid box");
    }
    Grid g;
    g.dims = std::move(dims);
    g.box = std::move(box);
    g.data.assign(g.size(), 0.0);
    return g;
}

void for_each_index(std::span<const std::size_t> dims,
                    const std::function<void(std::span<const std::size_t>, std::size_t)>& body) {
    std::vector<std::size_t> idx(dims.size(), 0);
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    for (std::size_t flat = 0; flat < total; ++flat) {
        body(idx, flat);
        for (int ax = static_cast<int>(dims.size()) - 1; ax >= 0; --ax) {
            if (++idx[ax] < dims[ax]) break;
            idx[ax] = 0;
        }
    }
}

Grid sample_function(std::vector<std::size_t> dims, std::vector<std::array<double, 2>> box,
                     const std::function<double(std::span<const double>)>& f) {
    Grid g = make_grid(std::move(dims), std::move(box));
    std::vector<double> x(g.dim());
    for_each_index(g.dims, [&](std::span<const std::size_t> idx, std::size_t flat) {
        for (int i = 0; i < g.dim(); ++i) x[i] = g.coord(i, idx[i]);
        g.data[flat] = f(x);
    });
    return g;
}

double lp_norm(std::span<const double> values, double p, double cell_volume) {
    double acc = 0;
    for (double v : values) acc += std::pow(std::abs(v), p);
    return std::pow(cell_volume * acc, 1.0 / p);
}

}  // namespace anisowave
