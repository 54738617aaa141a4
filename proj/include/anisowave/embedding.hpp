#pragma once

#include <json.hpp>
#include <map>
#include <vector>

#include "anisowave/anisotropy.hpp"
#include "anisowave/geometry.hpp"
#include "anisowave/norms.hpp"
#include "anisowave/transform.hpp"

namespace anisowave {

// The embedding machinery works in "paper coordinates": the box is rescaled so
// the coarse cells of the J-level ladder are unit cuboids, which makes the
// level-j cuboids exactly M^{-j}-cells and bounds rho_a by 1 in the units the
// shell bookkeeping assumes.
Grid paper_coordinate_view(const Grid& g, const Anisotropy& aniso, int depth);
SingularSet map_to_paper(const SingularSet& M, const Grid& g, const Anisotropy& aniso, int depth);

struct CoeffRef {
    int tree_level = 0;  // -1 together with band = -1 addresses nothing; coarse uses band = -1
    int band = 0;
    std::size_t flat = 0;
};

struct ShellEntry {
    CoeffRef ref;
    double rho = 0;  // rho_{I,a} in paper coordinates
};

// Partition of all tree coefficients by paper level j and shell index
// k = floor(rho_{I,a} * lambda^j); k = 0 is the "close to M" class, and
// coefficients whose support cuboid meets the domain boundary form their own
// class (they join the k = 0 class in norm sums but are tracked separately).
struct ShellPartition {
    double lambda = 0;
    int depth = 0;
    struct LevelShells {
        std::map<long, std::vector<ShellEntry>> interior;  // k >= 1
        std::vector<ShellEntry> near;                      // k = 0
        std::vector<ShellEntry> boundary;
    };
    std::vector<LevelShells> per_level;  // indexed by paper level; coarse block sits at j = 0

    std::size_t total_assigned() const;
    long k_max(int paper_level) const;
};

ShellPartition shell_partition(const CoefficientTree& tree, const SingularSet& M,
                               const Anisotropy& aniso);

struct WhitneyPercentiles {
    int paper_level = 0;
    std::size_t count = 0;
    double p50 = 0, p90 = 0, p99 = 0, max = 0;
};

struct WhitneyReport {
    std::vector<WhitneyPercentiles> per_level;
    WhitneyPercentiles overall;
};

// Per-coefficient Whitney/Hoelder ratio
//   |<u, psi~_I>| / (|I|^{m/N_s + 1/2 - 1/p} rho_{I,a}^{gamma-m} mu_{I,a})
// over the interior shells (k >= 1), with mu the local weighted top-derivative
// functional over Q(I). Coefficients are converted to continuous units.
WhitneyReport whitney_coeff_bound(const CoefficientTree& tree, const ShellPartition& part,
                                  const Grid& g, const SingularSet& M, const Rational& m,
                                  double gamma, double p);

struct EmbeddingParams {
    Rational m;
    double gamma = 0;
    double s = 0;
    double r = 0;
    double p = 2;
};

struct EmbeddingReport {
    double lhs = 0;             // adaptivity quasi-norm
    double rhs_kondratiev = 0;  // Kondratiev seminorm (top derivatives only)
    double rhs_besov = 0;       // wavelet Besov norm at mean smoothness s
    double ratio = 0;           // lhs / max(rhs parts)
    int proof_case = 0;         // sign of gamma - m + r(N_s - delta)/N_s
    Admissibility admissibility;
    double shell_count_C = 0;   // fitted C in #shell <= C k^{D-1-delta} lambda^{j delta}
    nlohmann::json shells;      // per-level diagnostics incl. per-shell sums
    WhitneyReport whitney;
    nlohmann::json params;
};

nlohmann::json to_json(const EmbeddingReport& rep);

// Evaluates both sides of the embedding inequality for one function. Refuses
// inadmissible parameters unless force = true (used by the contrapositive
// studies).
EmbeddingReport embedding_check(const Grid& g, const EmbeddingParams& params,
                                const SingularSet& M, const Anisotropy& aniso,
                                const BiorthFilterBank& bank, int depth, bool force = false);

struct CorpusSummary {
    std::size_t n_functions = 0;
    std::size_t n_zero = 0;  // excluded from ratio statistics
    double max_ratio = 0;
    double median_ratio = 0;
    std::vector<double> ratios;
    std::vector<nlohmann::json> reports;
};

CorpusSummary corpus_embedding_study(const std::vector<Grid>& corpus,
                                     const EmbeddingParams& params, const SingularSet& M,
                                     const Anisotropy& aniso, const BiorthFilterBank& bank,
                                     int depth, bool force = false);

}  // namespace anisowave
