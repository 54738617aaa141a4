#pragma once

#include <functional>
#include <json.hpp>
#include <span>
#include <vector>

#include "anisowave/filters.hpp"
#include "anisowave/geometry.hpp"
#include "anisowave/grid.hpp"

namespace anisowave {

enum class Provenance { exact_kernel, fourier_series, crank_nicolson };
enum class ExactKind { gaussian_kernel, sine_mode, incompatible_step };

// A heat-equation solution sampled on a cylinder grid (last axis = time).
// `residual` is the measured PDE defect in the sense natural to the
// provenance: closed-form kinds evaluate du/dt - Lap u analytically at the
// sample points; the Crank-Nicolson solver measures the algebraic defect of
// its own scheme equations. Downstream operations refuse a Temperature whose
// residual exceeds its declared tolerance.
struct Temperature {
    Grid grid;
    Cylinder cyl;
    Provenance provenance = Provenance::exact_kernel;
    double residual = 0;
    double residual_tol = 0;
    nlohmann::json meta;

    void require_valid() const;
};

struct ExactParams {
    std::vector<int> modes;       // sine_mode: per-axis mode numbers (default all 1)
    std::vector<double> center;   // gaussian_kernel: spatial center of the kernel
    double t_shift = -0.25;       // gaussian_kernel: time of the kernel singularity
    int n_terms = 200;            // incompatible_step: Fourier terms per axis
};

// Exact temperatures: the free-space heat kernel (singularity kept outside
// the closed cylinder), a separable decaying sine mode, and the step-initial
// temperature (u0 = 1, zero lateral data) via truncated Fourier series -- the
// truncated sum is itself an exact solution with smoothed initial data.
Temperature exact_temperature(ExactKind kind, const Cylinder& cyl,
                              std::vector<std::size_t> dims, const ExactParams& params = {});

using SpaceFn = std::function<double(std::span<const double>)>;
using SpaceTimeFn = std::function<double(std::span<const double>, double)>;

// Crank-Nicolson solver on cell-centered spatial meshes (d = 1 tridiagonal,
// d = 2 sparse LU; L-shaped domains supported through the active-cell mask).
// Marches node times 0..nt and stores midpoint averages on the nt time cells.
Temperature solve_heat_cn(const Cylinder& cyl, const SpaceFn& initial,
                          const SpaceTimeFn& lateral_bc, std::vector<std::size_t> nx,
                          std::size_t nt);

// All derivatives d^(alpha, alpha_t) u with |alpha| + 2 alpha_t = 2n, counted
// with the multiplicities of the n-fold tensor power of (Hessian, d/dt);
// component_count() = (d^2+1)^n.
struct Grad21Stack {
    struct Component {
        std::vector<int> spatial_orders;
        int time_order = 0;
        std::size_t multiplicity = 1;
        std::vector<double> field;
    };
    int n = 0;
    int d_space = 0;
    std::vector<std::size_t> dims;
    std::vector<Component> components;
    std::size_t margin = 0;  // cells per axis excluded from quadrature

    std::size_t component_count() const;
    /// sqrt(sum multiplicity * field^2), pointwise.
    std::vector<double> pointwise_length() const;
};

Grad21Stack grad21_stack(const Temperature& u, int n);

struct GradientEstimateReport {
    double lhs = 0;    // || delta^{2n-lambda} |(grad^{2,1})^n u| ||_{L_p}
    double rhs = 0;    // Besov majorant on the B^lambda scale
    double ratio = 0;  // fitted constant c
    nlohmann::json details;
};

GradientEstimateReport gradient_estimate_check(const Temperature& u, int n, double lambda,
                                               double p, const SingularSet& M,
                                               const BiorthFilterBank& bank, int depth);

}  // namespace anisowave
