#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "anisowave/anisotropy.hpp"
#include "anisowave/grid.hpp"

namespace anisowave {

// Spatial domain of a cylinder: an axis-aligned box, or (d = 2) an L-shape,
// i.e. the box minus the open quadrant { x > cut_x, y > cut_y }. The reentrant
// corner is part of the lateral boundary and tagged "edge".
struct SpatialDomain {
    std::vector<std::array<double, 2>> box;
    bool lshape = false;
    double cut_x = 0, cut_y = 0;

    int dim() const { return static_cast<int>(box.size()); }
    bool contains(std::span<const double> x) const;
};

SpatialDomain box_domain(std::vector<std::array<double, 2>> box);
SpatialDomain lshape_domain(std::array<double, 2> bx, std::array<double, 2> by,
                            double cut_x, double cut_y);

struct Cylinder {
    SpatialDomain space;
    double horizon = 0;  // T > 0

    int dim() const { return space.dim() + 1; }  // ambient D = d + 1
};

Cylinder make_cylinder(SpatialDomain space, double horizon);

enum class SingularDescriptor { parabolic_boundary, edge, vertex, custom };
enum class PointTag : std::uint8_t { bottom, lateral, edge };

// Sampled point cloud on a closed subset M of the boundary, with anisotropic
// distance queries by exhaustive scan (|.|_a has no triangle inequality, so
// standard spatial-index pruning does not apply).
struct SingularSet {
    int dim = 0;                  // ambient D
    int intrinsic_dim = 0;        // delta
    SingularDescriptor descriptor = SingularDescriptor::custom;
    double max_gap = 0;           // sampling resolution used at construction
    std::vector<double> points;   // flattened, size = count * dim
    std::vector<PointTag> tags;

    std::size_t count() const { return tags.size(); }
    std::span<const double> point(std::size_t i) const {
        return {points.data() + i * dim, static_cast<std::size_t>(dim)};
    }
};

SingularSet make_singular_set(int dim, int intrinsic_dim, SingularDescriptor descriptor,
                              std::vector<double> flat_points, double max_gap);

/// Samples M = (D x {0}) u (bdry D x [0,T]) with max gap <= spacing; delta = d.
SingularSet parabolic_boundary(const Cylinder& cyl, double spacing);

/// inf over sampled M of |x - y|_a (unclamped).
double dist_a(std::span<const double> x, const SingularSet& M, const Anisotropy& aniso);

/// rho_a(x) = min(1, dist_a(x, M)).
double rho_a(std::span<const double> x, const SingularSet& M, const Anisotropy& aniso);

/// Parabolic distance: inf over M of |x - y| + sqrt(|t - s|).
double parabolic_delta(std::span<const double> x_space, double t, const SingularSet& M);

/// rho_a at every cell center of g (parallel over cells, deterministic).
std::vector<double> rho_a_field(const Grid& g, const SingularSet& M, const Anisotropy& aniso);

struct ProbeStats {
    double min = 0, max = 0, median = 0;
    std::size_t samples = 0;
};

// Empirical check of rho_a(x,t) ~ delta(x,t)^{(d+2)/d} for the heat anisotropy;
// both sides clamped at 1 before comparing.
ProbeStats weight_equivalence_probe(const Cylinder& cyl, const Anisotropy& aniso,
                                    std::size_t n_samples, std::uint64_t seed = 17);

/// One point per row: coordinates, then tag.
void export_points_csv(const SingularSet& M, std::ostream& os);

}  // namespace anisowave
