#pragma once

#include <cstddef>
#include <json.hpp>
#include <span>
#include <vector>

#include "anisowave/transform.hpp"

namespace anisowave {

struct RateCurve {
    std::vector<std::size_t> n;      // strictly increasing
    std::vector<double> error;       // nonincreasing
    nlohmann::json meta;
};

// Best N-term approximation error: keep the N largest coefficients by the
// L_p-relevant weight |det M|^{j(1/2-1/p)} |c| (ties broken by (level, band,
// index) lexicographic order), reconstruct, and measure the discrete L_p
// error against the tree's own reconstruction.
RateCurve nterm_error_curve(const CoefficientTree& tree, std::span<const std::size_t> Ns,
                            double p);

/// Uniform (linear) truncation: drop all paper levels >= j, one point per j.
RateCurve uniform_error_curve(const CoefficientTree& tree, double p);

struct RateFit {
    double exponent = 0;  // error ~ N^{-exponent}
    double residual = 0;  // rms residual of the log-log fit
    std::size_t points = 0;
    std::size_t first = 0, last = 0;  // fit window [first, last) into the curve
};

// Least-squares slope of log(error) vs log(N). The default window drops the
// smallest 25% and largest 10% of N values (coarse-level pollution and the
// discretization floor).
RateFit fit_rate(const RateCurve& curve, double drop_low = 0.25, double drop_high = 0.10);

struct RegularityEstimate {
    double r_lo = 0, r_hi = 0;  // bisection bracket on the adaptivity-scale smoothness
    bool converged = false;
    double r_from_nterm = 0;    // N_s * fitted N-term exponent, finest tree
    nlohmann::json details;
};

// Largest r with a refinement-stable adaptivity norm, located by bisection
// over r with the stability predicate max_k |v_{k+1}/v_k - 1| <= growth_tol
// on the refinement sequence; cross-reported against the N-term rate.
RegularityEstimate regularity_estimate(std::span<const CoefficientTree> refinements, double p,
                                       double r_max, double growth_tol = 0.25,
                                       int max_steps = 30);

void write_curve_csv(const RateCurve& curve, const std::string& path);

}  // namespace anisowave
