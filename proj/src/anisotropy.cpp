#include "anisowave/anisotropy.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace anisowave {

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(text));
    std::int64_t num = std::stoll(text.substr(0, slash));
    std::int64_t den = std::stoll(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + text);
    return Rational(num, den);
}

std::string rational_str(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

int Anisotropy::steps_per_level() const {
    return std::accumulate(b.begin(), b.end(), 0);
}

Anisotropy make_anisotropy(std::vector<int> b, Rational norm_sum) {
    if (b.empty()) throw std::invalid_argument("anisotropy needs at least one axis");
    if (norm_sum <= Rational(0)) throw std::invalid_argument("norm_sum must be positive");
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] < 1)
            throw std::invalid_argument("dyadic step b[" + std::to_string(i) +
                                        "] must be a positive integer");
    }
    Anisotropy out;
    out.dim = static_cast<int>(b.size());
    out.b = std::move(b);
    out.norm_sum = norm_sum;
    Rational sum_b(std::accumulate(out.b.begin(), out.b.end(), std::int64_t{0}));
    out.a.reserve(out.b.size());
    for (int bi : out.b) out.a.push_back(sum_b / (norm_sum * Rational(bi)));
    return out;
}

Anisotropy heat_anisotropy(int d_space) {
    if (d_space < 1) throw std::invalid_argument("heat_anisotropy needs d_space >= 1");
    std::vector<int> b(static_cast<std::size_t>(d_space) + 1, 1);
    b.back() = 2;
    return make_anisotropy(std::move(b), Rational(d_space));
}

DilationSchedule make_schedule(const Anisotropy& aniso) {
    DilationSchedule s;
    s.aniso = aniso;
    s.det_m = 1;
    for (int bi : aniso.b) {
        s.per_axis_factor.push_back(1 << bi);
        s.det_m <<= bi;
    }
    s.lambda_log2 = Rational(aniso.steps_per_level()) / aniso.norm_sum;
    s.lambda = std::exp2(to_double(s.lambda_log2));
    return s;
}

SmoothnessScale make_smoothness(double alpha, double p, double q, const Anisotropy& aniso) {
    if (alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
    if (p <= 0 || q <= 0) throw std::invalid_argument("p, q must be positive");
    SmoothnessScale s;
    s.alpha = alpha;
    s.p = p;
    s.q = q;
    for (const Rational& ai : aniso.a) s.per_axis.push_back(alpha * to_double(ai));
    return s;
}

double adaptivity_tau(double r, double p, const Rational& norm_sum) {
    if (r < 0) throw std::invalid_argument("r must be nonnegative");
    if (p <= 0) throw std::invalid_argument("p must be positive");
    return 1.0 / (r / to_double(norm_sum) + 1.0 / p);
}

Admissibility embedding_admissible(double r, double m, double s, double gamma, double delta,
                                   const Anisotropy& aniso, double p) {
    if (m <= 0) throw std::invalid_argument("m must be positive");
    if (p <= 1 || !std::isfinite(p)) throw std::invalid_argument("need 1 < p < inf");
    const double D = aniso.dim;
    if (delta < 0 || delta > D - 1)
        throw std::invalid_argument("delta must lie in [0, D-1]");
    const double ns = to_double(aniso.norm_sum);

    Admissibility out;
    out.r_max_theorem = std::min(m, D > 1 ? s * ns / (D - 1)
                                          : std::numeric_limits<double>::infinity());
    out.r_max_step4 = delta > 0 ? s * ns / delta : std::numeric_limits<double>::infinity();
    out.theorem_bound_binds = out.r_max_theorem <= out.r_max_step4;

    if (r < 0) {
        out.reason = "r < 0";
    } else if (r >= m) {
        out.reason = "r >= m";
    } else if (r >= out.r_max_theorem) {
        out.reason = "r >= s*N_s/(D-1)";
    } else if (r >= out.r_max_step4) {
        out.reason = "r >= s*N_s/delta";
    } else if (!(gamma > delta / ns * r)) {
        out.reason = "gamma <= delta*r/N_s";
    } else {
        out.admissible = true;
    }
    return out;
}

HeatAlphaBounds heat_alpha_bounds(double s, double p, int d_space, int n) {
    if (s <= 0) throw std::invalid_argument("s must be positive");
    if (p <= 1) throw std::invalid_argument("p must exceed 1");
    if (n < 1) throw std::invalid_argument("n must be a positive integer");
    const double d = d_space;
    HeatAlphaBounds out;
    out.improved = std::min(2.0 * n, s * (d + 1.0) / d);
    const double second = d_space > 1 ? s * d / (d - 1.0)
                                      : std::numeric_limits<double>::infinity();
    out.aimar = std::min(d * (1.0 - 1.0 / p), second);
    return out;
}

double aniso_distance(std::span<const double> x, std::span<const double> y,
                      const Anisotropy& aniso) {
    if (x.size() != y.size() || static_cast<int>(x.size()) != aniso.dim)
        throw std::invalid_argument("aniso_distance: dimension mismatch");
    double sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        sum += std::pow(std::abs(x[i] - y[i]), to_double(aniso.a[i]));
    return sum;
}

double mean_smoothness_to_tilde(double s, int d_space) {
    if (s <= 0) throw std::invalid_argument("s must be positive");
    return s * d_space / (d_space + 2.0);
}

double mean_smoothness_from_tilde(double s_tilde, int d_space) {
    if (s_tilde <= 0) throw std::invalid_argument("s_tilde must be positive");
    return s_tilde * (d_space + 2.0) / d_space;
}

}  // namespace anisowave
