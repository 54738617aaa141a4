#include "anisowave/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anisowave/finite_diff.hpp"
#include "anisowave/parallel.hpp"

namespace anisowave {

Grid paper_coordinate_view(const Grid& g, const Anisotropy& aniso, int depth) {
    std::vector<std::array<double, 2>> box(g.dims.size());
    for (int i = 0; i < g.dim(); ++i) {
        const std::size_t div = std::size_t{1} << (static_cast<std::size_t>(depth) * aniso.b[i]);
        if (g.dims[i] % div != 0)
            throw std::invalid_argument("grid extent not commensurate with the level ladder");
        box[i] = {0.0, static_cast<double>(g.dims[i] / div)};
    }
    Grid out = g;
    out.box = std::move(box);
    return out;
}

SingularSet map_to_paper(const SingularSet& M, const Grid& g, const Anisotropy& aniso,
                         int depth) {
    SingularSet out = M;
    double worst_scale = 0;
    for (int i = 0; i < g.dim(); ++i) {
        const std::size_t div = std::size_t{1} << (static_cast<std::size_t>(depth) * aniso.b[i]);
        const double n0 = static_cast<double>(g.dims[i] / div);
        const double scale = n0 / (g.box[i][1] - g.box[i][0]);
        worst_scale = std::max(worst_scale, scale);
        for (std::size_t p = 0; p < M.count(); ++p)
            out.points[p * M.dim + i] = (M.points[p * M.dim + i] - g.box[i][0]) * scale;
    }
    out.max_gap = M.max_gap * worst_scale;
    return out;
}

std::size_t ShellPartition::total_assigned() const {
    std::size_t total = 0;
    for (const auto& lvl : per_level) {
        total += lvl.near.size() + lvl.boundary.size();
        for (const auto& [k, v] : lvl.interior) total += v.size();
    }
    return total;
}

long ShellPartition::k_max(int paper_level) const {
    const auto& lvl = per_level[paper_level];
    return lvl.interior.empty() ? 0 : lvl.interior.rbegin()->first;
}

namespace {

struct BandGeometry {
    std::vector<double> cell_w;  // paper-coordinate cell width per axis
    std::vector<std::size_t> shape;
    std::vector<double> domain_hi;  // paper-coordinate domain extent per axis
};

BandGeometry band_geometry(const CoefficientTree& tree, std::span<const int> axis_steps,
                           std::span<const std::size_t> shape) {
    const int D = static_cast<int>(tree.grid_dims.size());
    BandGeometry geo;
    geo.shape.assign(shape.begin(), shape.end());
    for (int i = 0; i < D; ++i) {
        const double n0 = static_cast<double>(
            tree.grid_dims[i] >> (static_cast<std::size_t>(tree.depth) * tree.aniso.b[i]));
        geo.domain_hi.push_back(n0);
        geo.cell_w.push_back(n0 * std::exp2(axis_steps[i]) /
                             static_cast<double>(tree.grid_dims[i]));
    }
    return geo;
}

// rho_{I,a} approximated by corner+center samples of Q(I), and the boundary flag.
void band_rho(const BandGeometry& geo, const SingularSet& M_paper, const Anisotropy& aniso,
              int radius, std::vector<double>& rho_out, std::vector<bool>& boundary_out) {
    const int D = static_cast<int>(geo.shape.size());
    std::size_t n = 1;
    for (std::size_t s : geo.shape) n *= s;
    rho_out.assign(n, 0.0);
    boundary_out.assign(n, false);
    std::vector<double> bnd(n, 0.0);

    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> qlo(D), qhi(D), pt(D);
        for (std::size_t flat = lo; flat < hi; ++flat) {
            std::size_t rem = flat;
            bool touches = false;
            for (int i = D - 1; i >= 0; --i) {
                const auto k = static_cast<long>(rem % geo.shape[i]);
                rem /= geo.shape[i];
                qlo[i] = (static_cast<double>(k) - radius) * geo.cell_w[i];
                qhi[i] = (static_cast<double>(k) + 1 + radius) * geo.cell_w[i];
                if (qlo[i] < -1e-12 || qhi[i] > geo.domain_hi[i] + 1e-12) touches = true;
            }
            double best = std::numeric_limits<double>::infinity();
            // corners + center of Q(I)
            for (std::size_t corner = 0; corner < (std::size_t{1} << D) + 1; ++corner) {
                for (int i = 0; i < D; ++i) {
                    if (corner == (std::size_t{1} << D))
                        pt[i] = 0.5 * (qlo[i] + qhi[i]);
                    else
                        pt[i] = (corner >> i) & 1 ? qhi[i] : qlo[i];
                }
                best = std::min(best, rho_a(pt, M_paper, aniso));
            }
            rho_out[flat] = best;
            bnd[flat] = touches ? 1.0 : 0.0;
        }
    });
    for (std::size_t i = 0; i < n; ++i) boundary_out[i] = bnd[i] > 0.5;
}

}  // namespace

ShellPartition shell_partition(const CoefficientTree& tree, const SingularSet& M,
                               const Anisotropy& aniso) {
    // resolution contract: M must be sampled at least twice as finely as the
    // finest grid cell
    if (M.max_gap > 0) {
        double diam2 = 0;
        for (int i = 0; i < static_cast<int>(tree.grid_dims.size()); ++i) {
            const double h = (tree.box[i][1] - tree.box[i][0]) /
                             static_cast<double>(tree.grid_dims[i]);
            diam2 += h * h;
        }
        if (M.max_gap > 0.5 * std::sqrt(diam2))
            throw std::invalid_argument("singular set sampled too coarsely for this grid");
    }

    Grid shell_grid = make_grid(tree.grid_dims, tree.box);
    const SingularSet Mp = map_to_paper(M, shell_grid, aniso, tree.depth);

    ShellPartition part;
    part.lambda = tree.schedule.lambda;
    part.depth = tree.depth;
    part.per_level.resize(tree.depth);

    std::vector<double> rho;
    std::vector<bool> touches;
    auto assign = [&](int paper_level, int tree_level, int band,
                      std::span<const int> axis_steps, std::span<const std::size_t> shape,
                      const std::vector<double>& data) {
        const BandGeometry geo = band_geometry(tree, axis_steps, shape);
        band_rho(geo, Mp, aniso, tree.bank.support_radius, rho, touches);
        auto& lvl = part.per_level[paper_level];
        const double lam_j = std::pow(part.lambda, paper_level);
        for (std::size_t flat = 0; flat < data.size(); ++flat) {
            ShellEntry e{{tree_level, band, flat}, rho[flat]};
            if (touches[flat]) {
                lvl.boundary.push_back(e);
            } else {
                const long k = static_cast<long>(std::floor(rho[flat] * lam_j));
                if (k <= 0)
                    lvl.near.push_back(e);
                else
                    lvl.interior[k].push_back(e);
            }
        }
    };

    for (int l = 0; l < tree.depth; ++l) {
        const int j = tree.paper_level(l);
        for (std::size_t b = 0; b < tree.levels[l].size(); ++b) {
            const Band& band = tree.levels[l][b];
            assign(j, l, static_cast<int>(b), band.axis_steps, band.shape, band.data);
        }
    }
    assign(0, -1, -1, tree.coarse_axis_steps, tree.coarse_shape, tree.coarse);
    return part;
}

namespace {

WhitneyPercentiles percentiles_of(std::vector<double>& v, int paper_level) {
    WhitneyPercentiles out;
    out.paper_level = paper_level;
    out.count = v.size();
    if (v.empty()) return out;
    std::sort(v.begin(), v.end());
    auto at = [&](double q) {
        return v[std::min(v.size() - 1, static_cast<std::size_t>(q * (v.size() - 1) + 0.5))];
    };
    out.p50 = at(0.50);
    out.p90 = at(0.90);
    out.p99 = at(0.99);
    out.max = v.back();
    return out;
}

const std::vector<double>& band_data(const CoefficientTree& tree, const CoeffRef& ref) {
    return ref.band < 0 ? tree.coarse : tree.levels[ref.tree_level][ref.band].data;
}

}  // namespace

WhitneyReport whitney_coeff_bound(const CoefficientTree& tree, const ShellPartition& part,
                                  const Grid& g, const SingularSet& M, const Rational& m,
                                  double gamma, double p) {
    const Anisotropy& aniso = tree.aniso;
    const Grid gp = paper_coordinate_view(g, aniso, tree.depth);
    const SingularSet Mp = map_to_paper(M, g, aniso, tree.depth);
    const double m_val = to_double(m);
    const double ns = to_double(aniso.norm_sum);
    const double det = static_cast<double>(tree.schedule.det_m);
    const double unit = std::pow(det, -tree.depth / 2.0);

    std::vector<int> m_axis(gp.dim());
    for (int i = 0; i < gp.dim(); ++i) {
        const Rational mi = m * aniso.a[i];
        if (!is_integer(mi))
            throw std::invalid_argument("m*a is not integer on axis " + std::to_string(i));
        m_axis[i] = static_cast<int>(mi.numerator());
    }
    const std::vector<double> rho_cells = rho_a_field(gp, Mp, aniso);
    std::vector<std::vector<double>> deriv(gp.dim());
    for (int i = 0; i < gp.dim(); ++i) deriv[i] = axis_derivative(gp, i, m_axis[i]);
    const double vol = gp.cell_volume();
    const double w_exp = m_val - gamma;

    WhitneyReport rep;
    std::vector<double> all;
    const int D = gp.dim();
    for (int j = 0; j < part.depth; ++j) {
        std::vector<double> ratios;
        for (const auto& [k, entries] : part.per_level[j].interior) {
            for (const ShellEntry& e : entries) {
                if (e.ref.band < 0) continue;  // scaling coefficients carry no moments
                const Band& band = tree.levels[e.ref.tree_level][e.ref.band];
                // mu over Q(I): samples covered by the inflated cuboid
                std::size_t rem = e.ref.flat;
                double mu_p = 0;
                std::vector<std::size_t> lo(D), hi(D);
                for (int i = D - 1; i >= 0; --i) {
                    const auto kk = static_cast<long>(rem % band.shape[i]);
                    rem /= band.shape[i];
                    const long scale = 1l << band.axis_steps[i];
                    const long a = (kk - tree.bank.support_radius) * scale;
                    const long b = (kk + 1 + tree.bank.support_radius) * scale;
                    lo[i] = static_cast<std::size_t>(std::max(0l, a));
                    hi[i] = static_cast<std::size_t>(
                        std::min(static_cast<long>(gp.dims[i]), b));
                }
                std::vector<std::size_t> idx(lo);
                while (true) {
                    std::size_t flat = 0;
                    for (int i = 0; i < D; ++i) flat = flat * gp.dims[i] + idx[i];
                    const double w = std::pow(rho_cells[flat], w_exp);
                    for (int i = 0; i < D; ++i)
                        mu_p += std::pow(w * std::abs(deriv[i][flat]), p);
                    int ax = D - 1;
                    while (ax >= 0 && ++idx[ax] == hi[ax]) idx[ax] = lo[ax], --ax;
                    if (ax < 0) break;
                }
                const double mu = std::pow(vol * mu_p, 1.0 / p);
                const double c_cont = unit * std::abs(band_data(tree, e.ref)[e.ref.flat]);
                const double denom = std::pow(det, -j * (m_val / ns + 0.5 - 1.0 / p)) *
                                     std::pow(e.rho, gamma - m_val) * mu;
                if (denom > 0) ratios.push_back(c_cont / denom);
            }
        }
        all.insert(all.end(), ratios.begin(), ratios.end());
        rep.per_level.push_back(percentiles_of(ratios, j));
    }
    rep.overall = percentiles_of(all, -1);
    return rep;
}

nlohmann::json to_json(const EmbeddingReport& rep) {
    nlohmann::json adm = {{"admissible", rep.admissibility.admissible},
                          {"reason", rep.admissibility.reason},
                          {"r_max_theorem", rep.admissibility.r_max_theorem},
                          {"r_max_step4", rep.admissibility.r_max_step4},
                          {"theorem_bound_binds", rep.admissibility.theorem_bound_binds}};
    nlohmann::json whitney = nlohmann::json::array();
    for (const auto& w : rep.whitney.per_level)
        whitney.push_back({{"level", w.paper_level},
                           {"count", w.count},
                           {"p50", w.p50},
                           {"p90", w.p90},
                           {"p99", w.p99},
                           {"max", w.max}});
    return {{"lhs", rep.lhs},
            {"rhs_kondratiev", rep.rhs_kondratiev},
            {"rhs_besov", rep.rhs_besov},
            {"ratio", rep.ratio},
            {"proof_case", rep.proof_case},
            {"admissibility", adm},
            {"shell_count_C", rep.shell_count_C},
            {"shells", rep.shells},
            {"whitney", whitney},
            {"params", rep.params}};
}

EmbeddingReport embedding_check(const Grid& g, const EmbeddingParams& params,
                                const SingularSet& M, const Anisotropy& aniso,
                                const BiorthFilterBank& bank, int depth, bool force) {
    EmbeddingReport rep;
    rep.admissibility = embedding_admissible(params.r, to_double(params.m), params.s,
                                             params.gamma, M.intrinsic_dim, aniso, params.p);
    if (!rep.admissibility.admissible && !force)
        throw std::invalid_argument("inadmissible embedding parameters: " +
                                    rep.admissibility.reason);

    const CoefficientTree tree = forward(g, bank, aniso, depth);
    const double det = static_cast<double>(tree.schedule.det_m);
    const double unit = std::pow(det, -depth / 2.0);
    const double ns = to_double(aniso.norm_sum);

    rep.lhs = unit * adaptivity_norm(tree, params.r, params.p).value;
    const Grid gp = paper_coordinate_view(g, aniso, depth);
    const SingularSet Mp = map_to_paper(M, g, aniso, depth);
    KondratievOptions kopt;
    kopt.m = params.m;
    kopt.gamma = params.gamma;
    kopt.p = params.p;
    kopt.seminorm_only = true;
    rep.rhs_kondratiev = kondratiev_norm(gp, aniso, Mp, kopt).value;
    rep.rhs_besov = unit * besov_wavelet_norm(tree, params.s, params.p, params.p).value;
    const double rhs = std::max(rep.rhs_kondratiev, rep.rhs_besov);
    rep.ratio = rhs > 0 ? rep.lhs / rhs : 0.0;

    const double sigma =
        params.gamma - to_double(params.m) + params.r * (ns - M.intrinsic_dim) / ns;
    rep.proof_case = sigma > 0 ? 1 : (sigma == 0 ? 2 : 3);

    const ShellPartition part = shell_partition(tree, M, aniso);
    const double tau = adaptivity_tau(params.r, params.p, aniso.norm_sum);
    const double delta = M.intrinsic_dim;
    const double D = aniso.dim;
    nlohmann::json shells = nlohmann::json::array();
    double fitC = 0;
    for (int j = 0; j < part.depth; ++j) {
        const auto& lvl = part.per_level[j];
        const double w = std::pow(det, j * (0.5 - 1.0 / params.p) * tau);
        auto class_sum = [&](const std::vector<ShellEntry>& entries) {
            double s = 0;
            for (const ShellEntry& e : entries)
                s += w * std::pow(unit * std::abs(band_data(tree, e.ref)[e.ref.flat]), tau);
            return s;
        };
        nlohmann::json per_shell = nlohmann::json::array();
        for (const auto& [k, entries] : lvl.interior) {
            per_shell.push_back(
                {{"k", k}, {"count", entries.size()}, {"lhs_sum", class_sum(entries)}});
            const double bound = std::pow(static_cast<double>(k), D - 1 - delta) *
                                 std::pow(part.lambda, j * delta);
            if (bound > 0) fitC = std::max(fitC, entries.size() / bound);
        }
        shells.push_back({{"level", j},
                          {"k_max", part.k_max(j)},
                          {"near_count", lvl.near.size()},
                          {"near_sum", class_sum(lvl.near)},
                          {"boundary_count", lvl.boundary.size()},
                          {"boundary_sum", class_sum(lvl.boundary)},
                          {"shells", per_shell}});
    }
    rep.shells = shells;
    rep.shell_count_C = fitC;
    rep.whitney = whitney_coeff_bound(tree, part, g, M, params.m, params.gamma, params.p);
    rep.params = {{"m", rational_str(params.m)}, {"gamma", params.gamma}, {"s", params.s},
                  {"r", params.r},               {"p", params.p},         {"tau", tau},
                  {"depth", depth},              {"delta", M.intrinsic_dim}};
    return rep;
}

CorpusSummary corpus_embedding_study(const std::vector<Grid>& corpus,
                                     const EmbeddingParams& params, const SingularSet& M,
                                     const Anisotropy& aniso, const BiorthFilterBank& bank,
                                     int depth, bool force) {
    if (corpus.empty()) throw std::invalid_argument("empty corpus");
    CorpusSummary sum;
    sum.n_functions = corpus.size();
    for (const Grid& g : corpus) {
        EmbeddingReport rep = embedding_check(g, params, M, aniso, bank, depth, force);
        sum.reports.push_back(to_json(rep));
        if (rep.lhs == 0 && rep.rhs_besov == 0 && rep.rhs_kondratiev == 0) {
            ++sum.n_zero;
            continue;
        }
        sum.ratios.push_back(rep.ratio);
    }
    if (!sum.ratios.empty()) {
        std::vector<double> sorted = sum.ratios;
        std::sort(sorted.begin(), sorted.end());
        sum.max_ratio = sorted.back();
        sum.median_ratio = sorted[sorted.size() / 2];
    }
    return sum;
}

}  // namespace anisowave
