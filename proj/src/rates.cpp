#include "anisowave/rates.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "anisowave/norms.hpp"

namespace anisowave {

namespace {

struct Entry {
    double key = 0;  // weighted magnitude
    int paper_level = 0;
    int tree_level = 0;
    int band = 0;  // -1 = coarse
    std::size_t flat = 0;
};

std::vector<Entry> weighted_entries(const CoefficientTree& tree, double p) {
    const double det = static_cast<double>(tree.schedule.det_m);
    std::vector<Entry> entries;
    entries.reserve(tree.total_coefficients());
    for (std::size_t i = 0; i < tree.coarse.size(); ++i)
        entries.push_back({std::abs(tree.coarse[i]), 0, -1, -1, i});
    for (int l = 0; l < tree.depth; ++l) {
        const int j = tree.paper_level(l);
        const double w = std::pow(det, j * (0.5 - 1.0 / p));
        for (std::size_t b = 0; b < tree.levels[l].size(); ++b) {
            const auto& data = tree.levels[l][b].data;
            for (std::size_t i = 0; i < data.size(); ++i)
                entries.push_back({w * std::abs(data[i]), j, l, static_cast<int>(b), i});
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.key != b.key) return a.key > b.key;
        if (a.paper_level != b.paper_level) return a.paper_level < b.paper_level;
        if (a.band != b.band) return a.band < b.band;
        return a.flat < b.flat;
    });
    return entries;
}

CoefficientTree zeroed_copy(const CoefficientTree& tree) {
    CoefficientTree out = tree;
    std::fill(out.coarse.begin(), out.coarse.end(), 0.0);
    for (auto& bands : out.levels)
        for (auto& b : bands) std::fill(b.data.begin(), b.data.end(), 0.0);
    return out;
}

double reconstruction_error(const CoefficientTree& candidate, const Grid& reference, double p) {
    const Grid rec = inverse(candidate);
    std::vector<double> diff(reference.data.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = rec.data[i] - reference.data[i];
    return lp_norm(diff, p, reference.cell_volume());
}

}  // namespace

RateCurve nterm_error_curve(const CoefficientTree& tree, std::span<const std::size_t> Ns,
                            double p) {
    const std::size_t total = tree.total_coefficients();
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        if (Ns[i] > total)
            throw std::invalid_argument("requested N exceeds the coefficient count");
        if (i > 0 && Ns[i] <= Ns[i - 1])
            throw std::invalid_argument("N values must be strictly increasing");
    }
    const std::vector<Entry> order = weighted_entries(tree, p);
    const Grid reference = inverse(tree);

    RateCurve curve;
    CoefficientTree kept = zeroed_copy(tree);
    std::size_t filled = 0;
    for (std::size_t N : Ns) {
        for (; filled < N; ++filled) {
            const Entry& e = order[filled];
            if (e.band < 0)
                kept.coarse[e.flat] = tree.coarse[e.flat];
            else
                kept.levels[e.tree_level][e.band].data[e.flat] =
                    tree.levels[e.tree_level][e.band].data[e.flat];
        }
        curve.n.push_back(N);
        curve.error.push_back(reconstruction_error(kept, reference, p));
    }
    curve.meta = {{"curve", "nterm"}, {"p", p}, {"total", total}};
    return curve;
}

RateCurve uniform_error_curve(const CoefficientTree& tree, double p) {
    const Grid reference = inverse(tree);
    RateCurve curve;
    for (int jcut = 0; jcut <= tree.depth; ++jcut) {
        CoefficientTree kept = zeroed_copy(tree);
        kept.coarse = tree.coarse;
        std::size_t count = tree.coarse.size();
        for (int l = 0; l < tree.depth; ++l) {
            if (tree.paper_level(l) >= jcut) continue;
            for (std::size_t b = 0; b < tree.levels[l].size(); ++b) {
                kept.levels[l][b].data = tree.levels[l][b].data;
                count += tree.levels[l][b].data.size();
            }
        }
        curve.n.push_back(count);
        curve.error.push_back(reconstruction_error(kept, reference, p));
    }
    curve.meta = {{"curve", "uniform"}, {"p", p}, {"total", tree.total_coefficients()}};
    return curve;
}

RateFit fit_rate(const RateCurve& curve, double drop_low, double drop_high) {
    const std::size_t count = curve.n.size();
    for (std::size_t i = 1; i < count; ++i) {
        if (curve.n[i] <= curve.n[i - 1])
            throw std::invalid_argument("rate curve: N must be strictly increasing");
        if (curve.error[i] > curve.error[i - 1] * (1.0 + 1e-9))
            throw std::invalid_argument("rate curve: errors must be nonincreasing");
    }
    RateFit fit;
    fit.first = static_cast<std::size_t>(drop_low * count);
    fit.last = count - static_cast<std::size_t>(drop_high * count);
    if (fit.last <= fit.first || fit.last - fit.first < 4)
        throw std::invalid_argument("rate fit window has fewer than 4 points");

    double min_e = std::numeric_limits<double>::infinity(), max_e = 0;
    for (std::size_t i = fit.first; i < fit.last; ++i) {
        min_e = std::min(min_e, curve.error[i]);
        max_e = std::max(max_e, curve.error[i]);
    }
    if (!(min_e > 0) || min_e == max_e)
        throw std::invalid_argument("rate fit refused: zero or flat error data");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double npts = static_cast<double>(fit.last - fit.first);
    for (std::size_t i = fit.first; i < fit.last; ++i) {
        const double x = std::log(static_cast<double>(curve.n[i]));
        const double y = std::log(curve.error[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / npts;
    double rss = 0;
    for (std::size_t i = fit.first; i < fit.last; ++i) {
        const double x = std::log(static_cast<double>(curve.n[i]));
        const double y = std::log(curve.error[i]);
        const double e = y - (slope * x + intercept);
        rss += e * e;
    }
    fit.exponent = -slope;
    fit.residual = std::sqrt(rss / npts);
    fit.points = fit.last - fit.first;
    return fit;
}

RegularityEstimate regularity_estimate(std::span<const CoefficientTree> refinements, double p,
                                       double r_max, double growth_tol, int max_steps) {
    if (refinements.size() < 2)
        throw std::invalid_argument("regularity estimate needs at least two refinements");
    const Rational ns = refinements[0].aniso.norm_sum;

    auto stable = [&](double r) {
        double prev = 0;
        for (std::size_t k = 0; k < refinements.size(); ++k) {
            const double unit = std::pow(static_cast<double>(refinements[k].schedule.det_m),
                                         -refinements[k].depth / 2.0);
            const double v = unit * adaptivity_norm(refinements[k], r, p).value;
            if (k > 0 && v > prev * (1.0 + growth_tol)) return false;
            prev = v;
        }
        return true;
    };

    RegularityEstimate est;
    if (!stable(0.0)) {
        est.r_lo = est.r_hi = 0;
        est.converged = false;
        est.details = {{"note", "unstable already at r = 0"}};
        return est;
    }
    double lo = 0, hi = r_max;
    if (stable(r_max)) {
        est.r_lo = est.r_hi = r_max;
        est.converged = true;
        est.details = {{"note", "stable up to the search cap r_max"}};
    } else {
        for (int step = 0; step < max_steps && hi - lo > 1e-4; ++step) {
            const double mid = 0.5 * (lo + hi);
            (stable(mid) ? lo : hi) = mid;
        }
        est.r_lo = lo;
        est.r_hi = hi;
        est.converged = (hi - lo) <= 1e-3 * std::max(1.0, r_max);
    }

    // cross-report: N-term rate of the finest tree
    const CoefficientTree& finest = refinements.back();
    const std::size_t total = finest.total_coefficients();
    std::vector<std::size_t> Ns;
    std::size_t n0 = std::max<std::size_t>(finest.coarse.size() + 1, 8);
    const std::size_t n1 = std::max<std::size_t>(n0 + 16, total / 2);
    for (int i = 0; i < 14; ++i) {
        const double f = static_cast<double>(i) / 13.0;
        const auto N = static_cast<std::size_t>(
            std::round(n0 * std::pow(static_cast<double>(n1) / n0, f)));
        if (Ns.empty() || N > Ns.back()) Ns.push_back(N);
    }
    try {
        const RateCurve curve = nterm_error_curve(finest, Ns, p);
        est.r_from_nterm = to_double(ns) * fit_rate(curve).exponent;
    } catch (const std::invalid_argument&) {
        est.r_from_nterm = 0;  // degenerate curve (e.g. zero tree)
    }
    est.details["r_lo"] = est.r_lo;
    est.details["r_hi"] = est.r_hi;
    est.details["r_from_nterm"] = est.r_from_nterm;
    return est;
}

void write_curve_csv(const RateCurve& curve, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "N,error\n";
    char buf[64];
    for (std::size_t i = 0; i < curve.n.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", curve.error[i]);
        os << curve.n[i] << ',' << buf << '\n';
    }
}

}  // namespace anisowave
