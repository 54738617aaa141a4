#include "anisowave/filters.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace anisowave {

namespace {

double binom(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

FilterTaps convolve(const FilterTaps& a, const FilterTaps& b) {
    FilterTaps out;
    out.offset = a.offset + b.offset;
    out.w.assign(a.w.size() + b.w.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.w.size(); ++i)
        for (std::size_t j = 0; j < b.w.size(); ++j) out.w[i + j] += a.w[i] * b.w[j];
    return out;
}

// ((1+z)/2)^n centered: whole-sample symmetric for even n, half-sample for odd.
FilterTaps spline_taps(int n) {
    FilterTaps t;
    t.offset = (n % 2 == 0) ? -n / 2 : -(n - 1) / 2;
    const double scale = std::exp2(-n);
    for (int k = 0; k <= n; ++k) t.w.push_back(binom(n, k) * scale);
    return t;
}

// sum_{k<K} C(K-1+k, k) y^k with y = sin^2(w/2) = (2 - z - z^{-1})/4.
FilterTaps bezout_factor(int K) {
    const FilterTaps y{{-0.25, 0.5, -0.25}, -1};
    FilterTaps acc{{1.0}, 0};
    FilterTaps ypow{{1.0}, 0};
    for (int k = 1; k < K; ++k) {
        ypow = convolve(ypow, y);
        const double c = binom(K - 1 + k, k);
        FilterTaps grown;
        grown.offset = ypow.offset;
        grown.w = ypow.w;
        for (double& v : grown.w) v *= c;
        // accumulate acc += grown
        const int lo = std::min(acc.offset, grown.offset);
        const int hi = std::max(acc.hi(), grown.hi());
        FilterTaps merged;
        merged.offset = lo;
        merged.w.assign(static_cast<std::size_t>(hi - lo) + 1, 0.0);
        for (std::size_t i = 0; i < acc.w.size(); ++i) merged.w[acc.offset - lo + i] += acc.w[i];
        for (std::size_t i = 0; i < grown.w.size(); ++i)
            merged.w[grown.offset - lo + i] += grown.w[i];
        acc = std::move(merged);
    }
    return acc;
}

FilterTaps alternating_flip(const FilterTaps& h) {
    // g[k] = (-1)^k h[1-k]
    FilterTaps g;
    g.offset = 1 - h.hi();
    g.w.resize(h.w.size());
    for (std::size_t i = 0; i < g.w.size(); ++i) {
        const int k = g.offset + static_cast<int>(i);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        g.w[i] = sign * h.w[(1 - k) - h.offset];
    }
    return g;
}

double shifted_inner(const FilterTaps& a, const FilterTaps& b, int shift) {
    // sum_n a[n] * b[n + shift]
    double s = 0;
    for (std::size_t i = 0; i < a.w.size(); ++i) {
        const int n = a.offset + static_cast<int>(i);
        const int j = n + shift - b.offset;
        if (j >= 0 && j < static_cast<int>(b.w.size())) s += a.w[i] * b.w[j];
    }
    return s;
}

void check_pr(const BiorthFilterBank& bank) {
    const int span = 2 * bank.support_radius + 2;
    for (int l = -span; l <= span; ++l) {
        const double want = (l == 0) ? 1.0 : 0.0;
        if (std::abs(shifted_inner(bank.analysis_low, bank.synthesis_low, 2 * l) - want) > 1e-12 ||
            std::abs(shifted_inner(bank.analysis_high, bank.synthesis_high, 2 * l) - want) > 1e-12 ||
            std::abs(shifted_inner(bank.analysis_high, bank.synthesis_low, 2 * l)) > 1e-12 ||
            std::abs(shifted_inner(bank.analysis_low, bank.synthesis_high, 2 * l)) > 1e-12)
            throw std::runtime_error("filter bank failed the perfect-reconstruction identity");
    }
}

}  // namespace

BiorthFilterBank make_spline_filters(int L, int L_dual) {
    if (L < 1 || L_dual < 1) throw std::invalid_argument("moment counts must be >= 1");
    if ((L + L_dual) % 2 != 0)
        throw std::invalid_argument("CDF spline family needs L + L_dual even");
    const double sqrt2 = std::sqrt(2.0);

    BiorthFilterBank bank;
    bank.moments = L;
    bank.dual_moments = L_dual;
    bank.name = "cdf" + std::to_string(L) + "." + std::to_string(L_dual);

    bank.synthesis_low = spline_taps(L);
    for (double& v : bank.synthesis_low.w) v *= sqrt2;

    bank.analysis_low = convolve(spline_taps(L_dual), bezout_factor((L + L_dual) / 2));
    for (double& v : bank.analysis_low.w) v *= sqrt2;

    bank.analysis_high = alternating_flip(bank.synthesis_low);
    bank.synthesis_high = alternating_flip(bank.analysis_low);

    for (const FilterTaps* t : {&bank.analysis_low, &bank.analysis_high, &bank.synthesis_low,
                                &bank.synthesis_high})
        bank.support_radius = std::max(bank.support_radius, t->reach());

    check_pr(bank);
    if (vanishing_moment_defect(bank, L - 1) > 1e-10)
        throw std::runtime_error("filter bank failed the vanishing-moment check");
    return bank;
}

namespace {

inline double fetch(std::span<const double> x, int pos, Boundary boundary) {
    const int n = static_cast<int>(x.size());
    if (pos >= 0 && pos < n) return x[pos];
    if (boundary == Boundary::zero_pad) return 0.0;
    pos %= n;
    if (pos < 0) pos += n;
    return x[pos];
}

using SolverPtr = std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>>;

// Exact inverses of the truncated zero-pad analysis operator, keyed by
// (bank, length). The operator is banded in interleaved row order.
SolverPtr zero_pad_solver(const BiorthFilterBank& bank, std::size_t n) {
    static std::mutex mu;
    static std::map<std::tuple<std::string, std::size_t>, SolverPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(bank.name, n);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    const std::size_t na = (n + 1) / 2;
    std::vector<Eigen::Triplet<double>> trips;
    auto add_row = [&](std::size_t row, const FilterTaps& f, std::size_t k) {
        for (std::size_t i = 0; i < f.w.size(); ++i) {
            const int col = static_cast<int>(2 * k) + f.offset + static_cast<int>(i);
            if (col >= 0 && col < static_cast<int>(n))
                trips.emplace_back(static_cast<int>(row), col, f.w[i]);
        }
    };
    for (std::size_t k = 0; k < na; ++k) add_row(2 * k, bank.analysis_low, k);
    for (std::size_t k = 0; k < n / 2; ++k) add_row(2 * k + 1, bank.analysis_high, k);

    Eigen::SparseMatrix<double> T(static_cast<int>(n), static_cast<int>(n));
    T.setFromTriplets(trips.begin(), trips.end());
    auto solver = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    solver->compute(T);
    if (solver->info() != Eigen::Success)
        throw std::runtime_error("zero-pad analysis operator is singular at length " +
                                 std::to_string(n));
    cache[key] = solver;
    return solver;
}

}  // namespace

void analysis_step(std::span<const double> signal, const BiorthFilterBank& bank,
                   Boundary boundary, std::vector<double>& approx, std::vector<double>& detail) {
    const std::size_t n = signal.size();
    const std::size_t flen = std::max(bank.analysis_low.w.size(), bank.analysis_high.w.size());
    if (n < flen) throw std::invalid_argument("analysis_step: signal shorter than the filter");
    if (boundary == Boundary::periodic && n % 2 != 0)
        throw std::invalid_argument("periodic analysis_step needs even length");

    approx.assign((n + 1) / 2, 0.0);
    detail.assign(n / 2, 0.0);
    const auto& hl = bank.analysis_low;
    const auto& hh = bank.analysis_high;
    for (std::size_t k = 0; k < approx.size(); ++k) {
        double acc = 0;
        for (std::size_t i = 0; i < hl.w.size(); ++i)
            acc += hl.w[i] * fetch(signal, static_cast<int>(2 * k) + hl.offset + static_cast<int>(i),
                                   boundary);
        approx[k] = acc;
    }
    for (std::size_t k = 0; k < detail.size(); ++k) {
        double acc = 0;
        for (std::size_t i = 0; i < hh.w.size(); ++i)
            acc += hh.w[i] * fetch(signal, static_cast<int>(2 * k) + hh.offset + static_cast<int>(i),
                                   boundary);
        detail[k] = acc;
    }
}

std::vector<double> synthesis_step(std::span<const double> approx, std::span<const double> detail,
                                   const BiorthFilterBank& bank, Boundary boundary) {
    const std::size_t n = approx.size() + detail.size();
    if (approx.size() != (n + 1) / 2)
        throw std::invalid_argument("synthesis_step: approx/detail lengths mismatched");

    if (boundary == Boundary::periodic) {
        std::vector<double> out(n, 0.0);
        const auto& gl = bank.synthesis_low;
        const auto& gh = bank.synthesis_high;
        for (std::size_t k = 0; k < approx.size(); ++k)
            for (std::size_t i = 0; i < gl.w.size(); ++i) {
                int pos = (static_cast<int>(2 * k) + gl.offset + static_cast<int>(i)) %
                          static_cast<int>(n);
                if (pos < 0) pos += static_cast<int>(n);
                out[pos] += approx[k] * gl.w[i];
            }
        for (std::size_t k = 0; k < detail.size(); ++k)
            for (std::size_t i = 0; i < gh.w.size(); ++i) {
                int pos = (static_cast<int>(2 * k) + gh.offset + static_cast<int>(i)) %
                          static_cast<int>(n);
                if (pos < 0) pos += static_cast<int>(n);
                out[pos] += detail[k] * gh.w[i];
            }
        return out;
    }

    Eigen::VectorXd rhs(static_cast<int>(n));
    for (std::size_t k = 0; k < approx.size(); ++k) rhs[static_cast<int>(2 * k)] = approx[k];
    for (std::size_t k = 0; k < detail.size(); ++k) rhs[static_cast<int>(2 * k + 1)] = detail[k];
    Eigen::VectorXd x = zero_pad_solver(bank, n)->solve(rhs);
    return std::vector<double>(x.data(), x.data() + n);
}

double vanishing_moment_defect(const BiorthFilterBank& bank, int degree) {
    if (degree < 0) throw std::invalid_argument("degree must be nonnegative");
    const auto& g = bank.analysis_high;
    double g2 = 0;
    for (double v : g.w) g2 += v * v;
    double worst = 0;
    for (int t = 0; t <= degree; ++t) {
        double dot = 0, m2 = 0;
        for (std::size_t i = 0; i < g.w.size(); ++i) {
            const double pos = g.offset + static_cast<double>(i);
            const double mono = std::pow(pos, t);
            dot += g.w[i] * mono;
            m2 += mono * mono;
        }
        if (m2 > 0) worst = std::max(worst, std::abs(dot) / std::sqrt(g2 * m2));
    }
    return worst;
}

}  // namespace anisowave
