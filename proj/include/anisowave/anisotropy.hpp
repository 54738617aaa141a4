#pragma once

#include <span>
#include <string>
#include <vector>

#include "anisowave/rational.hpp"

namespace anisowave {

// Anisotropy vector a with a_i = (sum_k b_k) / (N_s * b_i), represented through
// the integer dyadic step vector b so that every per-axis dilation factor is an
// integer power of two. N_s = sum_i 1/a_i is stored explicitly; all scale
// formulas use it where an ambient dimension would otherwise be hard-coded.
struct Anisotropy {
    int dim = 0;                  // ambient dimension D
    std::vector<int> b;           // dyadic steps per level per axis, b_i >= 1
    Rational norm_sum;            // N_s > 0
    std::vector<Rational> a;      // derived: a_i = (sum b)/(N_s b_i)

    int steps_per_level() const;  // sum_i b_i
    bool operator==(const Anisotropy&) const = default;
};

Anisotropy make_anisotropy(std::vector<int> b, Rational norm_sum);

/// Space-time anisotropy of the heat equation on R^{d+1}:
/// a = ((d+2)/d)(1,...,1,1/2), realized by b = (1,...,1,2), N_s = d.
Anisotropy heat_anisotropy(int d_space);

// Diagonal dilation M = diag(2^{b_1},...,2^{b_D}) compatible with a:
// lambda^{1/a_i} = 2^{b_i} exactly in exponent arithmetic.
struct DilationSchedule {
    Anisotropy aniso;
    std::vector<int> per_axis_factor;  // m_i = 2^{b_i}
    double lambda = 0.0;               // 2^{(sum b)/N_s}
    Rational lambda_log2;              // exact exponent (sum b)/N_s
    std::int64_t det_m = 0;            // |det M| = 2^{sum b}
};

DilationSchedule make_schedule(const Anisotropy& aniso);

// Smoothness parameters (alpha, p, q) on the scale B^{alpha a}_{p,q}.
struct SmoothnessScale {
    double alpha = 0.0;
    double p = 2.0;
    double q = 2.0;
    std::vector<double> per_axis;  // alpha * a_i
};

SmoothnessScale make_smoothness(double alpha, double p, double q, const Anisotropy& aniso);

/// tau of the adaptivity scale: 1/tau = r/N_s + 1/p.
double adaptivity_tau(double r, double p, const Rational& norm_sum);

// Outcome of the hypothesis check of the Kondratiev->Besov embedding.
// r_max_theorem = min(m, s N_s/(D-1)); r_max_step4 = s N_s/delta (delta > 0).
struct Admissibility {
    bool admissible = false;
    std::string reason;        // empty when admissible; names the failed condition
    double r_max_theorem = 0;  // the theorem's bound on r
    double r_max_step4 = 0;    // +inf when delta == 0
    bool theorem_bound_binds = true;
};

Admissibility embedding_admissible(double r, double m, double s, double gamma, double delta,
                                   const Anisotropy& aniso, double p);

// Upper bounds on the adaptivity-scale smoothness of temperatures:
// improved = min(2n, s(d+1)/d) versus the interpolation-based baseline
// aimar = min(d(1-1/p), s d/(d-1)) (second term +inf for d = 1).
struct HeatAlphaBounds {
    double improved = 0;
    double aimar = 0;
};

HeatAlphaBounds heat_alpha_bounds(double s, double p, int d_space, int n);

/// Anisotropic pseudo-distance |x-y|_a = sum_i |x_i-y_i|^{a_i} (no triangle inequality).
double aniso_distance(std::span<const double> x, std::span<const double> y,
                      const Anisotropy& aniso);

/// s_tilde = s*d/(d+2): mean smoothness on the heat anisotropy scale.
double mean_smoothness_to_tilde(double s, int d_space);
/// Inverse conversion: s = s_tilde*(d+2)/d.
double mean_smoothness_from_tilde(double s_tilde, int d_space);

}  // namespace anisowave
