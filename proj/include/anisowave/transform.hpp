#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "anisowave/anisotropy.hpp"
#include "anisowave/filters.hpp"
#include "anisowave/grid.hpp"

namespace anisowave {

// One detail band. Within anisotropic level l, axis i undergoes b_i dyadic
// steps; every step emits one band. All bands of a level share that level's
// Besov weight, but carry their own per-axis dyadic scale for geometry.
struct Band {
    int axis = 0;     // axis whose step produced this band
    int substep = 0;  // 1-based dyadic sub-step along that axis
    std::vector<std::size_t> shape;
    std::vector<int> axis_steps;  // cumulative dyadic steps per axis at creation
    // entries possibly touched by the boundary handling, per axis
    std::vector<std::size_t> margin_lo, margin_hi;
    std::vector<double> data;

    std::size_t size() const { return data.size(); }
    bool interior(std::span<const std::size_t> idx) const;
};

// Critically sampled anisotropic wavelet decomposition. levels[0] is the
// finest scale; the paper-convention level of levels[l] is depth-1-l, with the
// coarse scaling block sitting at paper level 0.
struct CoefficientTree {
    Anisotropy aniso;
    DilationSchedule schedule;
    BiorthFilterBank bank;
    Boundary boundary = Boundary::zero_pad;
    int depth = 0;  // J
    std::vector<std::size_t> grid_dims;
    std::vector<std::array<double, 2>> box;
    std::vector<std::size_t> coarse_shape;
    std::vector<int> coarse_axis_steps;
    std::vector<double> coarse;
    std::vector<std::vector<Band>> levels;

    int paper_level(int tree_level) const { return depth - 1 - tree_level; }
    std::size_t total_coefficients() const;
};

CoefficientTree forward(const Grid& g, const BiorthFilterBank& bank, const Anisotropy& aniso,
                        int depth, Boundary boundary = Boundary::zero_pad);
Grid inverse(const CoefficientTree& tree);

// Geometry of one coefficient: the dyadic cuboid it indexes and the support
// cuboid Q(I) (the cuboid inflated by the filter support radius per axis).
struct IndexCuboid {
    int paper_level = 0;
    bool scaling = false;  // coarse block entry
    std::vector<long> k;
    std::vector<std::array<double, 2>> cell;     // physical coordinates
    std::vector<std::array<double, 2>> support;  // physical Q(I)
    double measure_paper = 0;                    // |I| = |det M|^{-j}, paper units
    bool touches_boundary = false;               // Q(I) crosses the grid box
};

/// band_index = -1 addresses the coarse scaling block.
IndexCuboid cuboid_of(const CoefficientTree& tree, int tree_level, int band_index,
                      std::span<const std::size_t> multi_index);

struct HomogeneityProbe {
    double lhs = 0;  // |det M|^{1/p} * wavelet seminorm of f(M.)
    double rhs = 0;  // lambda^alpha * wavelet seminorm of f
};

// Discrete check of the dilation-homogeneity identity over Besov seminorms.
// f is sampled analytically on `dims` cells of `box`, and again composed with
// the dilation x -> Mx.
HomogeneityProbe homogeneity_probe(const std::function<double(std::span<const double>)>& f,
                                   std::vector<std::size_t> dims,
                                   std::vector<std::array<double, 2>> box,
                                   const BiorthFilterBank& bank, const Anisotropy& aniso,
                                   int depth, double alpha, double p);

}  // namespace anisowave
