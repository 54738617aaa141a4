#include "anisowave/finite_diff.hpp"

#include <algorithm>
#include <stdexcept>

#include "anisowave/parallel.hpp"

namespace anisowave {

// Fornberg's recursion (Math. Comp. 51, 1988).
std::vector<double> fd_weights(double x0, std::span<const double> xs, int order) {
    const int n = static_cast<int>(xs.size()) - 1;
    if (n < order) throw std::invalid_argument("fd_weights: too few nodes for derivative order");
    std::vector<std::vector<double>> c(static_cast<std::size_t>(n) + 1,
                                       std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) w[i] = c[i][order];
    return w;
}

namespace {

// One stencil per output offset pattern: interior rows share one centered
// stencil, boundary rows get shifted windows of order+2 points.
struct AxisStencils {
    // stencils[i] applies at output index i for i < lead, at n-1-i for the
    // trailing side (mirrored), and stencils[lead] everywhere else.
    std::vector<std::vector<double>> weights;  // indexed by window start offset
    std::vector<int> starts;                   // window start relative to output index
    int lead = 0;
};

AxisStencils build_stencils(std::size_t n, int order, double h) {
    const int w_interior = 2 * ((order + 1) / 2) + 1;  // odd width, accuracy >= 2
    const int w_boundary = order + 2;
    const int reach = w_interior / 2;
    if (static_cast<std::size_t>(std::max(w_interior, w_boundary)) > n)
        throw std::invalid_argument("axis_derivative: stencil exceeds grid");

    AxisStencils st;
    st.lead = reach;
    std::vector<double> xs;
    for (int i = 0; i < reach; ++i) {
        // output index i, window [0, w_boundary)
        xs.clear();
        for (int k = 0; k < w_boundary; ++k) xs.push_back((k - i) * h);
        st.weights.push_back(fd_weights(0.0, xs, order));
        st.starts.push_back(-i);
    }
    xs.clear();
    for (int k = 0; k < w_interior; ++k) xs.push_back((k - reach) * h);
    st.weights.push_back(fd_weights(0.0, xs, order));
    st.starts.push_back(-reach);
    return st;
}

}  // namespace

std::vector<double> axis_derivative(std::span<const double> data,
                                    std::span<const std::size_t> dims, int axis, int order,
                                    double spacing) {
    if (order == 0) return std::vector<double>(data.begin(), data.end());
    const std::size_t n = dims[axis];
    const AxisStencils st = build_stencils(n, order, spacing);

    std::size_t stride = 1;
    for (std::size_t i = axis + 1; i < dims.size(); ++i) stride *= dims[i];
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    const std::size_t n_pencils = total / n;

    std::vector<double> out(total);
    parallel_for(n_pencils, [&](std::size_t p0, std::size_t p1) {
        for (std::size_t p = p0; p < p1; ++p) {
            const std::size_t outer = p / stride;
            const std::size_t inner = p % stride;
            const std::size_t base = outer * n * stride + inner;
            for (std::size_t i = 0; i < n; ++i) {
                int which;
                bool mirrored = false;
                if (i < static_cast<std::size_t>(st.lead)) {
                    which = static_cast<int>(i);
                } else if (n - 1 - i < static_cast<std::size_t>(st.lead)) {
                    which = static_cast<int>(n - 1 - i);
                    mirrored = true;
                } else {
                    which = st.lead;
                }
                const auto& w = st.weights[which];
                double acc = 0;
                if (!mirrored) {
                    const std::size_t start = i + st.starts[which];
                    for (std::size_t k = 0; k < w.size(); ++k)
                        acc += w[k] * data[base + (start + k) * stride];
                } else {
                    // mirrored window: x-offsets negated, weights pick up (-1)^order
                    const std::size_t start = i - st.starts[which];
                    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
                    for (std::size_t k = 0; k < w.size(); ++k)
                        acc += sign * w[k] * data[base + (start - k) * stride];
                }
                out[base + i * stride] = acc;
            }
        }
    });
    return out;
}

std::vector<double> axis_derivative(const Grid& g, int axis, int order) {
    return axis_derivative(g.data, g.dims, axis, order, g.spacing(axis));
}

std::vector<double> mixed_derivative(const Grid& g, std::span<const int> orders) {
    std::vector<double> cur = g.data;
    for (int ax = 0; ax < g.dim(); ++ax) {
        if (orders[ax] == 0) continue;
        cur = axis_derivative(cur, g.dims, ax, orders[ax], g.spacing(ax));
    }
    return cur;
}

}  // namespace anisowave
