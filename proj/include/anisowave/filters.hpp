#pragma once

#include <span>
#include <string>
#include <vector>

namespace anisowave {

enum class Boundary { zero_pad, periodic };

struct FilterTaps {
    std::vector<double> w;
    int offset = 0;  // tap i sits at position offset + i

    int lo() const { return offset; }
    int hi() const { return offset + static_cast<int>(w.size()) - 1; }
    int reach() const { return std::max(-lo(), hi()); }
};

// Biorthogonal B-spline (CDF) filter bank. The analysis highpass annihilates
// discrete polynomials of degree < moments; the synthesis highpass likewise
// for dual_moments. Perfect-reconstruction identities are verified to 1e-12
// at construction.
struct BiorthFilterBank {
    FilterTaps analysis_low, analysis_high, synthesis_low, synthesis_high;
    int moments = 0;       // L
    int dual_moments = 0;  // L~
    int support_radius = 0;
    std::string name;
};

/// CDF spline family with (L, L_dual) vanishing moments; L + L_dual must be even.
BiorthFilterBank make_spline_filters(int L, int L_dual);

// One dyadic refinement step. approx gets ceil(n/2) entries, detail floor(n/2);
// under zero_pad the signal is extended by zero and the critically sampled
// coefficient window is kept, under periodic indices wrap (even length only).
void analysis_step(std::span<const double> signal, const BiorthFilterBank& bank,
                   Boundary boundary, std::vector<double>& approx, std::vector<double>& detail);

// Exact inverse of analysis_step with the same boundary mode. Periodic mode is
// the adjoint-type reconstruction; zero_pad inverts the truncated zero-extension
// operator through a cached sparse LU factorization (interior columns coincide
// with plain synthesis, corrections are boundary-local).
std::vector<double> synthesis_step(std::span<const double> approx,
                                   std::span<const double> detail,
                                   const BiorthFilterBank& bank, Boundary boundary);

/// Max Cauchy-Schwarz-normalized inner product of the analysis highpass with
/// sampled monomials of degree <= degree.
double vanishing_moment_defect(const BiorthFilterBank& bank, int degree);

}  // namespace anisowave
