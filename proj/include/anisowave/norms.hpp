#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "anisowave/anisotropy.hpp"
#include "anisowave/geometry.hpp"
#include "anisowave/grid.hpp"
#include "anisowave/transform.hpp"

namespace anisowave {

struct NormReport {
    double value = 0;
    std::vector<std::pair<std::string, double>> terms;  // per-level or per-term breakdown
    nlohmann::json params;
};

nlohmann::json to_json(const NormReport& r);

/// Lower admissibility bound on the mean smoothness: max(0, N_s(1/p - 1)).
double besov_alpha_bound(const Anisotropy& aniso, double p);

// Wavelet-side Besov norm:
// (sum_k |coarse|^p)^{1/p}
//   + (sum_j |det M|^{j(alpha/N_s + 1/2 - 1/p)q} (sum_{level j} |c|^p)^{q/p})^{1/q}.
NormReport besov_wavelet_norm(const CoefficientTree& tree, double alpha, double p, double q);

// Adaptivity-scale quasi-norm with tau from 1/tau = r/N_s + 1/p:
// (sum |coarse|^tau)^{1/tau} + (sum_j |det M|^{j(1/2-1/p)tau} sum |c|^tau)^{1/tau}.
NormReport adaptivity_norm(const CoefficientTree& tree, double r, double p);

// Difference-based cross-check: per-axis iterated differences of order k_i,
// steps sampled dyadically, restricted-domain convention (differences vanish
// where the stencil exits the box).
NormReport modulus_besov_seminorm(const Grid& g, std::span<const double> alpha_axis, double p,
                                  double q, std::span<const int> k_axis);

/// ||f||_p + sum_i ||d^{l_i} f / dx_i^{l_i}||_p with order-2 central differences.
NormReport aniso_sobolev_norm(const Grid& g, std::span<const int> l_axis, double p);

// The parabolic Sobolev norm on a cylinder grid (last axis = time):
// ||u|| + sum_i ||du/dx_i|| + sum_{i,j} ||d2u/dx_i dx_j|| + ||du/dt||;
// include_mixed = false drops the i != j second-derivative terms.
NormReport w21_norm(const Grid& g, double p, bool include_mixed = true);

struct KondratievOptions {
    Rational m;                 // scalar smoothness; m * a_i must be integers
    double gamma = 0;
    double p = 2;
    bool seminorm_only = false;     // keep only the top derivatives alpha_i = m_i
    bool classical_weights = false; // rho^{alpha_i/a_i - gamma} instead of rho^{m - gamma}
};

// Weighted Sobolev (Kondratiev) norm with weight rho_a(x)^{m-gamma}; the
// zero-order term is counted once. Pure directional derivatives only.
NormReport kondratiev_norm(const Grid& g, const Anisotropy& aniso, const SingularSet& M,
                           const KondratievOptions& opt);

}  // namespace anisowave
