#include "anisowave/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "anisowave/finite_diff.hpp"

namespace anisowave {

nlohmann::json to_json(const NormReport& r) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [label, v] : r.terms) terms.push_back({{"term", label}, {"value", v}});
    return {{"value", r.value}, {"levels", terms}, {"params", r.params}};
}

double besov_alpha_bound(const Anisotropy& aniso, double p) {
    return std::max(0.0, to_double(aniso.norm_sum) * (1.0 / p - 1.0));
}

namespace {

double pow_sum(std::span<const double> v, double p) {
    double acc = 0;
    for (double c : v) acc += std::pow(std::abs(c), p);
    return acc;
}

}  // namespace

NormReport besov_wavelet_norm(const CoefficientTree& tree, double alpha, double p, double q) {
    if (p <= 0 || q <= 0) throw std::invalid_argument("p, q must be positive");
    const double bound = besov_alpha_bound(tree.aniso, p);
    if (!(alpha > bound) && !(alpha == 0 && bound == 0))
        throw std::invalid_argument("alpha must exceed max(0, N_s(1/p-1)) = " +
                                    std::to_string(bound));
    const double ns = to_double(tree.aniso.norm_sum);
    const double det = static_cast<double>(tree.schedule.det_m);

    NormReport rep;
    const double coarse = std::pow(pow_sum(tree.coarse, p), 1.0 / p);
    rep.terms.emplace_back("coarse", coarse);

    double detail_acc = 0;
    for (int l = tree.depth - 1; l >= 0; --l) {  // coarse-to-fine for the breakdown
        const int j = tree.paper_level(l);
        double level_p = 0;
        for (const Band& b : tree.levels[l]) level_p += pow_sum(b.data, p);
        const double w = std::pow(det, j * (alpha / ns + 0.5 - 1.0 / p) * q);
        const double contrib = w * std::pow(level_p, q / p);
        detail_acc += contrib;
        rep.terms.emplace_back("level " + std::to_string(j), std::pow(contrib, 1.0 / q));
    }
    rep.value = coarse + std::pow(detail_acc, 1.0 / q);
    rep.params = {{"norm", "besov_wavelet"}, {"alpha", alpha}, {"p", p}, {"q", q},
                  {"depth", tree.depth}};
    return rep;
}

NormReport adaptivity_norm(const CoefficientTree& tree, double r, double p) {
    const double tau = adaptivity_tau(r, p, tree.aniso.norm_sum);
    const double det = static_cast<double>(tree.schedule.det_m);

    NormReport rep;
    const double coarse = std::pow(pow_sum(tree.coarse, tau), 1.0 / tau);
    rep.terms.emplace_back("coarse", coarse);

    double acc = 0;
    for (int l = tree.depth - 1; l >= 0; --l) {
        const int j = tree.paper_level(l);
        double level_tau = 0;
        for (const Band& b : tree.levels[l]) level_tau += pow_sum(b.data, tau);
        const double contrib = std::pow(det, j * (0.5 - 1.0 / p) * tau) * level_tau;
        acc += contrib;
        rep.terms.emplace_back("level " + std::to_string(j), std::pow(contrib, 1.0 / tau));
    }
    rep.value = coarse + std::pow(acc, 1.0 / tau);
    rep.params = {{"norm", "adaptivity"}, {"r", r}, {"p", p}, {"tau", tau},
                  {"depth", tree.depth}};
    return rep;
}

NormReport modulus_besov_seminorm(const Grid& g, std::span<const double> alpha_axis, double p,
                                  double q, std::span<const int> k_axis) {
    const int D = g.dim();
    if (static_cast<int>(alpha_axis.size()) != D || static_cast<int>(k_axis.size()) != D)
        throw std::invalid_argument("modulus seminorm: per-axis parameter size mismatch");
    for (int i = 0; i < D; ++i)
        if (!(k_axis[i] > alpha_axis[i]))
            throw std::invalid_argument("difference order k must exceed alpha on axis " +
                                        std::to_string(i));

    const double vol = g.cell_volume();
    NormReport rep;
    double total = 0;
    std::vector<double> binom;
    for (int axis = 0; axis < D; ++axis) {
        const int k = k_axis[axis];
        binom.assign(static_cast<std::size_t>(k) + 1, 0.0);
        binom[0] = 1;
        for (int row = 1; row <= k; ++row)
            for (int col = row; col >= 1; --col) binom[col] += binom[col - 1];

        const std::size_t n = g.dims[axis];
        const std::size_t stride = g.stride(axis);
        const double h = g.spacing(axis);
        double axis_acc = 0;
        for (std::size_t step = 1; static_cast<std::size_t>(k) * step < n; step *= 2) {
            // ||Delta^k_{t e_axis} f||_p over points whose stencil stays inside
            double psum = 0;
            const std::size_t valid = n - static_cast<std::size_t>(k) * step;
            const std::size_t pencils = g.size() / n;
            for (std::size_t pe = 0; pe < pencils; ++pe) {
                const std::size_t outer = pe / stride;
                const std::size_t inner = pe % stride;
                const std::size_t base = outer * n * stride + inner;
                for (std::size_t i = 0; i < valid; ++i) {
                    double diff = 0;
                    for (int l = 0; l <= k; ++l) {
                        const double sign = ((k - l) % 2 == 0) ? 1.0 : -1.0;
                        diff += sign * binom[l] * g.data[base + (i + l * step) * stride];
                    }
                    psum += std::pow(std::abs(diff), p);
                }
            }
            const double t = h * static_cast<double>(step);
            const double norm_p = std::pow(vol * psum, 1.0 / p);
            axis_acc += std::pow(std::pow(t, -alpha_axis[axis]) * norm_p, q) * std::log(2.0);
        }
        const double term = std::pow(axis_acc, 1.0 / q);
        rep.terms.emplace_back("axis " + std::to_string(axis), term);
        total += term;
    }
    rep.value = total;
    rep.params = {{"norm", "modulus_besov_seminorm"}, {"p", p}, {"q", q}};
    return rep;
}

NormReport aniso_sobolev_norm(const Grid& g, std::span<const int> l_axis, double p) {
    if (static_cast<int>(l_axis.size()) != g.dim())
        throw std::invalid_argument("per-axis order vector must match the grid dimension");
    const double vol = g.cell_volume();
    NormReport rep;
    rep.value = lp_norm(g.data, p, vol);
    rep.terms.emplace_back("f", rep.value);
    for (int axis = 0; axis < g.dim(); ++axis) {
        const auto d = axis_derivative(g, axis, l_axis[axis]);
        const double term = lp_norm(d, p, vol);
        rep.terms.emplace_back("d^" + std::to_string(l_axis[axis]) + "/dx" +
                                   std::to_string(axis),
                               term);
        rep.value += term;
    }
    rep.params = {{"norm", "aniso_sobolev"}, {"p", p}};
    return rep;
}

NormReport w21_norm(const Grid& g, double p, bool include_mixed) {
    const int D = g.dim();
    if (D < 2) throw std::invalid_argument("W^{2,1} norm needs a space-time grid");
    const int d = D - 1;
    const double vol = g.cell_volume();
    NormReport rep;
    rep.value = lp_norm(g.data, p, vol);
    rep.terms.emplace_back("u", rep.value);

    for (int i = 0; i < d; ++i) {
        const double term = lp_norm(axis_derivative(g, i, 1), p, vol);
        rep.terms.emplace_back("du/dx" + std::to_string(i), term);
        rep.value += term;
    }
    std::vector<int> orders(D, 0);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (i != j && !include_mixed) continue;
            std::fill(orders.begin(), orders.end(), 0);
            orders[i] += 1;
            orders[j] += 1;
            const double term = lp_norm(mixed_derivative(g, orders), p, vol);
            rep.terms.emplace_back("d2u/dx" + std::to_string(i) + "dx" + std::to_string(j), term);
            rep.value += term;
        }
    }
    const double dt = lp_norm(axis_derivative(g, D - 1, 1), p, vol);
    rep.terms.emplace_back("du/dt", dt);
    rep.value += dt;
    rep.params = {{"norm", "w21"}, {"p", p}, {"include_mixed", include_mixed}};
    return rep;
}

NormReport kondratiev_norm(const Grid& g, const Anisotropy& aniso, const SingularSet& M,
                           const KondratievOptions& opt) {
    if (g.dim() != aniso.dim || g.dim() != M.dim)
        throw std::invalid_argument("kondratiev norm: dimension mismatch");
    if (opt.m <= Rational(0)) throw std::invalid_argument("m must be positive");
    std::vector<int> m_axis(g.dim());
    for (int i = 0; i < g.dim(); ++i) {
        const Rational mi = opt.m * aniso.a[i];
        if (!is_integer(mi))
            throw std::invalid_argument("m*a is not integer on axis " + std::to_string(i) +
                                        ": " + rational_str(mi));
        m_axis[i] = static_cast<int>(mi.numerator());
    }
    const double m_val = to_double(opt.m);
    const std::vector<double> rho = rho_a_field(g, M, aniso);
    const double vol = g.cell_volume();

    NormReport rep;
    double acc = 0;
    auto add_term = [&](const std::vector<double>& field, int alpha_order, int axis,
                        const std::string& label) {
        const double expo = opt.classical_weights
                                ? alpha_order / to_double(aniso.a[axis < 0 ? 0 : axis]) - opt.gamma
                                : m_val - opt.gamma;
        double s = 0;
        for (std::size_t i = 0; i < field.size(); ++i)
            s += std::pow(std::pow(rho[i], expo) * std::abs(field[i]), opt.p);
        s *= vol;
        acc += s;
        rep.terms.emplace_back(label, std::pow(s, 1.0 / opt.p));
    };

    if (!opt.seminorm_only) {
        // zero-order term, counted once
        const double expo = opt.classical_weights ? -opt.gamma : m_val - opt.gamma;
        double s = 0;
        for (std::size_t i = 0; i < g.data.size(); ++i)
            s += std::pow(std::pow(rho[i], expo) * std::abs(g.data[i]), opt.p);
        s *= vol;
        acc += s;
        rep.terms.emplace_back("order 0", std::pow(s, 1.0 / opt.p));
    }
    for (int axis = 0; axis < g.dim(); ++axis) {
        const int from = opt.seminorm_only ? m_axis[axis] : 1;
        for (int order = from; order <= m_axis[axis]; ++order) {
            add_term(axis_derivative(g, axis, order), order, axis,
                     "axis " + std::to_string(axis) + " order " + std::to_string(order));
        }
    }
    rep.value = std::pow(acc, 1.0 / opt.p);
    rep.params = {{"norm", opt.seminorm_only ? "kondratiev_seminorm" : "kondratiev"},
                  {"m", rational_str(opt.m)},
                  {"gamma", opt.gamma},
                  {"p", opt.p},
                  {"classical_weights", opt.classical_weights}};
    return rep;
}

}  // namespace anisowave
