#include "anisowave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "anisowave/parallel.hpp"

namespace anisowave {

bool SpatialDomain::contains(std::span<const double> x) const {
    for (int i = 0; i < dim(); ++i)
        if (x[i] < box[i][0] || x[i] > box[i][1]) return false;
    if (lshape && x[0] > cut_x && x[1] > cut_y) return false;
    return true;
}

SpatialDomain box_domain(std::vector<std::array<double, 2>> box) {
    if (box.empty()) throw std::invalid_argument("spatial domain needs at least one axis");
    for (auto& [lo, hi] : box)
        if (!(hi > lo)) throw std::invalid_argument("degenerate spatial box");
    SpatialDomain d;
    d.box = std::move(box);
    return d;
}

SpatialDomain lshape_domain(std::array<double, 2> bx, std::array<double, 2> by,
                            double cut_x, double cut_y) {
    SpatialDomain d = box_domain({bx, by});
    if (!(cut_x > bx[0] && cut_x < bx[1] && cut_y > by[0] && cut_y < by[1]))
        throw std::invalid_argument("L-shape cut corner must lie inside the box");
    d.lshape = true;
    d.cut_x = cut_x;
    d.cut_y = cut_y;
    return d;
}

Cylinder make_cylinder(SpatialDomain space, double horizon) {
    if (!(horizon > 0)) throw std::invalid_argument("cylinder needs a positive time horizon");
    return Cylinder{std::move(space), horizon};
}

SingularSet make_singular_set(int dim, int intrinsic_dim, SingularDescriptor descriptor,
                              std::vector<double> flat_points, double max_gap) {
    if (flat_points.empty() || flat_points.size() % static_cast<std::size_t>(dim) != 0)
        throw std::invalid_argument("singular set needs a nonempty multiple-of-dim point list");
    if (intrinsic_dim < 0 || intrinsic_dim > dim - 1)
        throw std::invalid_argument("intrinsic dimension must lie in [0, D-1]");
    SingularSet M;
    M.dim = dim;
    M.intrinsic_dim = intrinsic_dim;
    M.descriptor = descriptor;
    M.max_gap = max_gap;
    M.tags.assign(flat_points.size() / static_cast<std::size_t>(dim), PointTag::bottom);
    M.points = std::move(flat_points);
    return M;
}

namespace {

std::vector<double> axis_samples(double lo, double hi, double spacing) {
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / spacing)) + 1;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return xs;
}

// Lattice over the closure of the spatial domain.
void spatial_lattice(const SpatialDomain& dom, double spacing,
                     const std::function<void(std::span<const double>)>& emit) {
    const int d = dom.dim();
    std::vector<std::vector<double>> per_axis(d);
    for (int i = 0; i < d; ++i) per_axis[i] = axis_samples(dom.box[i][0], dom.box[i][1], spacing);
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> x(d);
    while (true) {
        for (int i = 0; i < d; ++i) x[i] = per_axis[i][idx[i]];
        if (dom.contains(x)) emit(x);
        int ax = d - 1;
        while (ax >= 0 && ++idx[ax] == per_axis[ax].size()) idx[ax--] = 0;
        if (ax < 0) break;
    }
}

// Polyline boundary of the spatial domain for d <= 2; for d >= 3 boxes, the
// 2d box faces. Emits (point, on_reentrant_edge).
void boundary_lattice(const SpatialDomain& dom, double spacing,
                      const std::function<void(std::span<const double>, bool)>& emit) {
    const int d = dom.dim();
    if (d == 1) {
        double lo = dom.box[0][0], hi = dom.box[0][1];
        emit(std::span<const double>(&lo, 1), false);
        emit(std::span<const double>(&hi, 1), false);
        return;
    }
    if (d == 2) {
        const double x0 = dom.box[0][0], x1 = dom.box[0][1];
        const double y0 = dom.box[1][0], y1 = dom.box[1][1];
        std::vector<std::array<double, 2>> verts;
        if (!dom.lshape) {
            verts = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
        } else {
            verts = {{x0, y0}, {x1, y0}, {x1, dom.cut_y}, {dom.cut_x, dom.cut_y},
                     {dom.cut_x, y1},   {x0, y1}};
        }
        for (std::size_t e = 0; e < verts.size(); ++e) {
            const auto& a = verts[e];
            const auto& b = verts[(e + 1) % verts.size()];
            const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
            const auto n = static_cast<std::size_t>(std::ceil(len / spacing)) + 1;
            for (std::size_t i = 0; i + 1 < n; ++i) {  // skip segment end: next edge owns it
                const double s = static_cast<double>(i) / static_cast<double>(n - 1);
                std::array<double, 2> p{a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])};
                const bool reentrant =
                    dom.lshape && i == 0 && p[0] == dom.cut_x && p[1] == dom.cut_y;
                emit(p, reentrant);
            }
        }
        return;
    }
    // d >= 3: box faces only
    for (int f = 0; f < d; ++f) {
        for (int side = 0; side < 2; ++side) {
            SpatialDomain face;
            for (int i = 0; i < d; ++i)
                if (i != f) face.box.push_back(dom.box[i]);
            std::vector<double> x(d);
            spatial_lattice(face, spacing, [&](std::span<const double> y) {
                int j = 0;
                for (int i = 0; i < d; ++i) x[i] = (i == f) ? dom.box[f][side] : y[j++];
                emit(x, false);
            });
        }
    }
}

}  // namespace

SingularSet parabolic_boundary(const Cylinder& cyl, double spacing) {
    if (!(spacing > 0)) throw std::invalid_argument("spacing must be positive");
    const int d = cyl.space.dim();
    SingularSet M;
    M.dim = d + 1;
    M.intrinsic_dim = d;
    M.descriptor = SingularDescriptor::parabolic_boundary;
    M.max_gap = spacing;

    auto push = [&](std::span<const double> x_space, double t, PointTag tag) {
        for (double c : x_space) M.points.push_back(c);
        M.points.push_back(t);
        M.tags.push_back(tag);
    };

    // bottom face D x {0}
    spatial_lattice(cyl.space, spacing,
                    [&](std::span<const double> x) { push(x, 0.0, PointTag::bottom); });
    // lateral boundary bdry(D) x [0, T]
    const std::vector<double> ts = axis_samples(0.0, cyl.horizon, spacing);
    boundary_lattice(cyl.space, spacing, [&](std::span<const double> x, bool reentrant) {
        for (std::size_t k = 1; k < ts.size(); ++k)  // t = 0 already covered by the bottom face
            push(x, ts[k], reentrant ? PointTag::edge : PointTag::lateral);
    });
    return M;
}

double dist_a(std::span<const double> x, const SingularSet& M, const Anisotropy& aniso) {
    if (M.count() == 0) throw std::invalid_argument("empty singular set");
    if (static_cast<int>(x.size()) != M.dim || aniso.dim != M.dim)
        throw std::invalid_argument("dist_a: dimension mismatch");
    std::vector<double> exps(aniso.a.size());
    for (std::size_t i = 0; i < exps.size(); ++i) exps[i] = to_double(aniso.a[i]);
    double best = std::numeric_limits<double>::infinity();
    const int d = M.dim;
    for (std::size_t p = 0; p < M.count(); ++p) {
        const double* y = M.points.data() + p * d;
        double s = 0;
        for (int i = 0; i < d; ++i) s += std::pow(std::abs(x[i] - y[i]), exps[i]);
        best = std::min(best, s);
    }
    return best;
}

double rho_a(std::span<const double> x, const SingularSet& M, const Anisotropy& aniso) {
    return std::min(1.0, dist_a(x, M, aniso));
}

double parabolic_delta(std::span<const double> x_space, double t, const SingularSet& M) {
    if (M.count() == 0) throw std::invalid_argument("empty singular set");
    if (static_cast<int>(x_space.size()) + 1 != M.dim)
        throw std::invalid_argument("parabolic_delta: dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    const int d = M.dim - 1;
    for (std::size_t p = 0; p < M.count(); ++p) {
        const double* y = M.points.data() + p * M.dim;
        double sq = 0;
        for (int i = 0; i < d; ++i) sq += (x_space[i] - y[i]) * (x_space[i] - y[i]);
        best = std::min(best, std::sqrt(sq) + std::sqrt(std::abs(t - y[d])));
    }
    return best;
}

std::vector<double> rho_a_field(const Grid& g, const SingularSet& M, const Anisotropy& aniso) {
    if (g.dim() != M.dim) throw std::invalid_argument("rho_a_field: dimension mismatch");
    std::vector<double> exps(aniso.a.size());
    for (std::size_t i = 0; i < exps.size(); ++i) exps[i] = to_double(aniso.a[i]);
    const int d = g.dim();
    std::vector<double> out(g.size());
    parallel_for(g.size(), [&](std::size_t lo, std::size_t hi) {
        std::vector<double> x(d);
        for (std::size_t flat = lo; flat < hi; ++flat) {
            std::size_t rem = flat;
            for (int i = d - 1; i >= 0; --i) {
                x[i] = g.coord(i, rem % g.dims[i]);
                rem /= g.dims[i];
            }
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t p = 0; p < M.count(); ++p) {
                const double* y = M.points.data() + p * d;
                double s = 0;
                for (int i = 0; i < d; ++i) s += std::pow(std::abs(x[i] - y[i]), exps[i]);
                best = std::min(best, s);
            }
            out[flat] = std::min(1.0, best);
        }
    });
    return out;
}

ProbeStats weight_equivalence_probe(const Cylinder& cyl, const Anisotropy& aniso,
                                    std::size_t n_samples, std::uint64_t seed) {
    if (aniso.dim != cyl.dim())
        throw std::invalid_argument("probe: anisotropy dimension must match the cylinder");
    const int d = cyl.space.dim();
    const double expo = (d + 2.0) / d;
    double diam = cyl.horizon;
    for (auto& [lo, hi] : cyl.space.box) diam = std::max(diam, hi - lo);
    const SingularSet M = parabolic_boundary(cyl, diam / 256.0);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> ratios;
    ratios.reserve(n_samples);
    std::vector<double> x(d + 1);
    while (ratios.size() < n_samples) {
        for (int i = 0; i < d; ++i)
            x[i] = cyl.space.box[i][0] + unit(rng) * (cyl.space.box[i][1] - cyl.space.box[i][0]);
        if (!cyl.space.contains(std::span<const double>(x.data(), d))) continue;
        x[d] = unit(rng) * cyl.horizon;
        const double rho = rho_a(x, M, aniso);
        const double delta = std::min(1.0, parabolic_delta({x.data(), static_cast<std::size_t>(d)},
                                                           x[d], M));
        if (rho <= 0 || delta <= 0) continue;
        ratios.push_back(rho / std::pow(delta, expo));
    }
    std::sort(ratios.begin(), ratios.end());
    return ProbeStats{ratios.front(), ratios.back(), ratios[ratios.size() / 2], ratios.size()};
}

void export_points_csv(const SingularSet& M, std::ostream& os) {
    static const char* names[] = {"bottom", "lateral", "edge"};
    char buf[64];
    for (std::size_t p = 0; p < M.count(); ++p) {
        for (int i = 0; i < M.dim; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", M.points[p * M.dim + i]);
            os << buf << ',';
        }
        os << names[static_cast<int>(M.tags[p])] << '\n';
    }
}

}  // namespace anisowave
