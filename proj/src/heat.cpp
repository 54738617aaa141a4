#include "anisowave/heat.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "anisowave/finite_diff.hpp"
#include "anisowave/norms.hpp"
#include "anisowave/parallel.hpp"
#include "anisowave/transform.hpp"

namespace anisowave {

void Temperature::require_valid() const {
    if (!(residual <= residual_tol))
        throw std::invalid_argument("temperature residual " + std::to_string(residual) +
                                    " exceeds declared tolerance " +
                                    std::to_string(residual_tol));
}

namespace {

constexpr double kPi = std::numbers::pi;

struct PointwiseModel {
    std::function<double(std::span<const double>, double)> u, ut, lap;
};

// 1-d step-initial Fourier factor and its derivatives.
struct StepSeries {
    double lo, len;
    int n_terms;

    double eval(double x, double t, int deriv_t, int deriv_xx) const {
        // deriv_t in {0,1}: time derivative; deriv_xx in {0,1}: second space derivative
        const double xi = x - lo;
        double acc = 0;
        for (int n = 1; n <= n_terms; n += 2) {
            const double w = n * kPi / len;
            const double mu = w * w;
            double term = 4.0 / (n * kPi) * std::sin(w * xi) * std::exp(-mu * t);
            if (deriv_t) term *= -mu;
            if (deriv_xx) term *= -mu;
            acc += term;
        }
        return acc;
    }
};

PointwiseModel sine_model(const Cylinder& cyl, std::vector<int> modes) {
    const int d = cyl.space.dim();
    if (modes.empty()) modes.assign(d, 1);
    if (static_cast<int>(modes.size()) != d)
        throw std::invalid_argument("sine_mode: one mode number per spatial axis");
    std::vector<double> omega(d);
    for (int i = 0; i < d; ++i)
        omega[i] = modes[i] * kPi / (cyl.space.box[i][1] - cyl.space.box[i][0]);

    auto product = [omega, box = cyl.space.box](std::span<const double> x) {
        double v = 1;
        for (std::size_t i = 0; i < omega.size(); ++i)
            v *= std::sin(omega[i] * (x[i] - box[i][0]));
        return v;
    };
    PointwiseModel m;
    m.u = [product, omega](std::span<const double> x, double t) {
        double mu = 0;
        for (double w : omega) mu += w * w;
        return std::exp(-mu * t) * product(x);
    };
    m.ut = [product, omega](std::span<const double> x, double t) {
        double mu = 0;
        for (double w : omega) mu += w * w;
        return -mu * std::exp(-mu * t) * product(x);
    };
    m.lap = [product, omega](std::span<const double> x, double t) {
        double mu = 0;
        for (double w : omega) mu += w * w;
        double acc = 0;
        const double base = std::exp(-mu * t) * product(x);
        for (double w : omega) acc += -(w * w) * base;
        return acc;
    };
    return m;
}

PointwiseModel gaussian_model(const Cylinder& cyl, std::vector<double> center, double t_shift) {
    const int d = cyl.space.dim();
    if (center.empty()) {
        center.assign(d, 0.0);
        for (int i = 0; i < d; ++i) center[i] = cyl.space.box[i][1] + 0.25;
    }
    if (static_cast<int>(center.size()) != d)
        throw std::invalid_argument("gaussian_kernel: center must have spatial dimension");
    std::vector<double> c_closed(center);
    const bool center_inside = cyl.space.contains(c_closed);
    if (center_inside && t_shift >= 0 && t_shift <= cyl.horizon)
        throw std::invalid_argument(
            "gaussian_kernel: singular point lies inside the closed cylinder");

    auto r2 = [center](std::span<const double> x) {
        double s = 0;
        for (std::size_t i = 0; i < center.size(); ++i)
            s += (x[i] - center[i]) * (x[i] - center[i]);
        return s;
    };
    const double dd = d;
    PointwiseModel m;
    m.u = [r2, t_shift, dd](std::span<const double> x, double t) {
        const double s = t - t_shift;
        if (s <= 0) return 0.0;
        return std::pow(4 * kPi * s, -dd / 2) * std::exp(-r2(x) / (4 * s));
    };
    m.ut = [r2, t_shift, dd](std::span<const double> x, double t) {
        const double s = t - t_shift;
        if (s <= 0) return 0.0;
        const double phi = std::pow(4 * kPi * s, -dd / 2) * std::exp(-r2(x) / (4 * s));
        return phi * (r2(x) / (4 * s * s) - dd / (2 * s));
    };
    m.lap = [r2, center, t_shift, dd](std::span<const double> x, double t) {
        const double s = t - t_shift;
        if (s <= 0) return 0.0;
        const double phi = std::pow(4 * kPi * s, -dd / 2) * std::exp(-r2(x) / (4 * s));
        double acc = 0;
        for (std::size_t i = 0; i < center.size(); ++i) {
            const double z = x[i] - center[i];
            acc += phi * (z * z / (4 * s * s) - 1.0 / (2 * s));
        }
        return acc;
    };
    return m;
}

PointwiseModel step_model(const Cylinder& cyl, int n_terms) {
    if (cyl.space.lshape)
        throw std::invalid_argument("incompatible_step needs a box spatial domain");
    const int d = cyl.space.dim();
    std::vector<StepSeries> axes;
    for (int i = 0; i < d; ++i)
        axes.push_back({cyl.space.box[i][0], cyl.space.box[i][1] - cyl.space.box[i][0], n_terms});

    PointwiseModel m;
    m.u = [axes](std::span<const double> x, double t) {
        double v = 1;
        for (std::size_t i = 0; i < axes.size(); ++i) v *= axes[i].eval(x[i], t, 0, 0);
        return v;
    };
    auto sum_form = [axes](std::span<const double> x, double t, bool time_part) {
        double acc = 0;
        for (std::size_t i = 0; i < axes.size(); ++i) {
            double term = time_part ? axes[i].eval(x[i], t, 1, 0) : axes[i].eval(x[i], t, 0, 1);
            for (std::size_t j = 0; j < axes.size(); ++j)
                if (j != i) term *= axes[j].eval(x[j], t, 0, 0);
            acc += term;
        }
        return acc;
    };
    m.ut = [sum_form](std::span<const double> x, double t) { return sum_form(x, t, true); };
    m.lap = [sum_form](std::span<const double> x, double t) { return sum_form(x, t, false); };
    return m;
}

}  // namespace

Temperature exact_temperature(ExactKind kind, const Cylinder& cyl,
                              std::vector<std::size_t> dims, const ExactParams& params) {
    const int d = cyl.space.dim();
    if (static_cast<int>(dims.size()) != d + 1)
        throw std::invalid_argument("temperature grid must be space-time (d+1 dimensional)");

    PointwiseModel model;
    Provenance prov = Provenance::exact_kernel;
    double tol = 1e-8;
    const char* kind_name = "";
    switch (kind) {
        case ExactKind::sine_mode:
            model = sine_model(cyl, params.modes);
            kind_name = "sine_mode";
            break;
        case ExactKind::gaussian_kernel:
            model = gaussian_model(cyl, params.center, params.t_shift);
            kind_name = "gaussian_kernel";
            break;
        case ExactKind::incompatible_step:
            model = step_model(cyl, params.n_terms);
            prov = Provenance::fourier_series;
            tol = 1e-7;
            kind_name = "incompatible_step";
            break;
    }

    std::vector<std::array<double, 2>> box = cyl.space.box;
    box.push_back({0.0, cyl.horizon});
    Temperature temp;
    temp.cyl = cyl;
    temp.provenance = prov;
    temp.residual_tol = tol;
    temp.grid = make_grid(std::move(dims), std::move(box));

    const Grid& g = temp.grid;
    std::vector<double> defect(g.size());
    std::vector<std::size_t> gdims = g.dims;
    parallel_for(g.size(), [&](std::size_t lo, std::size_t hi) {
        std::vector<double> x(d);
        for (std::size_t flat = lo; flat < hi; ++flat) {
            std::size_t rem = flat;
            double t = 0;
            for (int i = d; i >= 0; --i) {
                const std::size_t idx = rem % gdims[i];
                rem /= gdims[i];
                if (i == d)
                    t = g.coord(i, idx);
                else
                    x[i] = g.coord(i, idx);
            }
            temp.grid.data[flat] = model.u(x, t);
            defect[flat] = model.ut(x, t) - model.lap(x, t);
        }
    });

    double max_u = 0, max_defect = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        max_u = std::max(max_u, std::abs(temp.grid.data[i]));
        max_defect = std::max(max_defect, std::abs(defect[i]));
    }
    temp.residual = max_u > 0 ? max_defect / max_u : 0.0;
    temp.meta = {{"kind", kind_name}, {"provenance", static_cast<int>(prov)}};
    if (kind == ExactKind::incompatible_step) temp.meta["n_terms"] = params.n_terms;
    temp.require_valid();
    return temp;
}

Temperature solve_heat_cn(const Cylinder& cyl, const SpaceFn& initial,
                          const SpaceTimeFn& lateral_bc, std::vector<std::size_t> nx,
                          std::size_t nt) {
    const int d = cyl.space.dim();
    if (d > 2) throw std::invalid_argument("Crank-Nicolson solver supports d <= 2");
    if (static_cast<int>(nx.size()) != d)
        throw std::invalid_argument("initial/boundary data dimensions do not match the domain");
    if (nt < 2) throw std::invalid_argument("need at least two time cells");

    // cell-centered spatial mesh over the bounding box; active = inside the domain
    std::vector<double> h(d);
    std::size_t n_cells = 1;
    for (int i = 0; i < d; ++i) {
        h[i] = (cyl.space.box[i][1] - cyl.space.box[i][0]) / static_cast<double>(nx[i]);
        n_cells *= nx[i];
    }
    auto cell_center = [&](std::size_t flat, std::vector<double>& x) {
        for (int i = d - 1; i >= 0; --i) {
            x[i] = cyl.space.box[i][0] + (static_cast<double>(flat % nx[i]) + 0.5) * h[i];
            flat /= nx[i];
        }
    };
    std::vector<long> active(n_cells, -1);
    std::vector<std::size_t> cells;
    {
        std::vector<double> x(d);
        for (std::size_t f = 0; f < n_cells; ++f) {
            cell_center(f, x);
            if (cyl.space.contains(x)) {
                active[f] = static_cast<long>(cells.size());
                cells.push_back(f);
            }
        }
    }
    const std::size_t m = cells.size();

    // Dirichlet Laplacian with ghost closure u_face = (u_in + u_ghost)/2
    struct BcFace {
        std::size_t row;
        std::vector<double> point;
        double coef;
    };
    std::vector<Eigen::Triplet<double>> trips;
    std::vector<BcFace> bc_faces;
    {
        std::vector<double> x(d), xn(d);
        std::vector<std::size_t> idx(d);
        for (std::size_t r = 0; r < m; ++r) {
            std::size_t f = cells[r];
            for (int i = d - 1; i >= 0; --i) {
                idx[i] = f % nx[i];
                f /= nx[i];
            }
            cell_center(cells[r], x);
            double diag = 0;
            for (int i = 0; i < d; ++i) {
                for (int dir = -1; dir <= 1; dir += 2) {
                    const double inv_h2 = 1.0 / (h[i] * h[i]);
                    long nb = -1;
                    if ((dir < 0 && idx[i] > 0) || (dir > 0 && idx[i] + 1 < nx[i])) {
                        std::size_t stridei = 1;
                        for (int k = d - 1; k > i; --k) stridei *= nx[k];
                        const std::size_t nf = dir < 0 ? cells[r] - stridei : cells[r] + stridei;
                        nb = active[nf];
                    }
                    if (nb >= 0) {
                        trips.emplace_back(static_cast<int>(r), static_cast<int>(nb), inv_h2);
                        diag -= inv_h2;
                    } else {
                        // boundary face: u_ghost = 2 g - u
                        diag -= 2.0 * inv_h2;
                        xn = x;
                        xn[i] += dir * 0.5 * h[i];
                        bc_faces.push_back({r, xn, 2.0 * inv_h2});
                    }
                }
            }
            trips.emplace_back(static_cast<int>(r), static_cast<int>(r), diag);
        }
    }
    Eigen::SparseMatrix<double> A(static_cast<int>(m), static_cast<int>(m));
    A.setFromTriplets(trips.begin(), trips.end());

    const double T = cyl.horizon;
    const double dt = T / static_cast<double>(nt);
    Eigen::SparseMatrix<double> I(static_cast<int>(m), static_cast<int>(m));
    I.setIdentity();
    Eigen::SparseMatrix<double> M1 = I - (dt / 2) * A;
    Eigen::SparseMatrix<double> M2 = I + (dt / 2) * A;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(M1);
    if (lu.info() != Eigen::Success) throw std::runtime_error("CN system factorization failed");

    auto bc_vector = [&](double t) {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<int>(m));
        for (const auto& face : bc_faces)
            b[static_cast<int>(face.row)] += face.coef * lateral_bc(face.point, t);
        return b;
    };

    Eigen::VectorXd u(static_cast<int>(m));
    {
        std::vector<double> x(d);
        for (std::size_t r = 0; r < m; ++r) {
            cell_center(cells[r], x);
            u[static_cast<int>(r)] = initial(x);
        }
    }

    std::vector<std::size_t> out_dims(nx.begin(), nx.end());
    out_dims.push_back(nt);
    std::vector<std::array<double, 2>> out_box = cyl.space.box;
    out_box.push_back({0.0, T});
    Temperature temp;
    temp.cyl = cyl;
    temp.provenance = Provenance::crank_nicolson;
    temp.residual_tol = 1e-9;
    temp.grid = make_grid(out_dims, out_box);

    double max_u = 0, max_defect = 0;
    Eigen::VectorXd b0 = bc_vector(0.0);
    for (std::size_t k = 0; k < nt; ++k) {
        const Eigen::VectorXd b1 = bc_vector((k + 1) * dt);
        const Eigen::VectorXd rhs = M2 * u + (dt / 2) * (b0 + b1);
        const Eigen::VectorXd u_next = lu.solve(rhs);
        const Eigen::VectorXd defect =
            (u_next - u) / dt - 0.5 * (A * (u_next + u) + b0 + b1);
        max_defect = std::max(max_defect, defect.cwiseAbs().maxCoeff());
        max_u = std::max(max_u, u_next.cwiseAbs().maxCoeff());
        for (std::size_t r = 0; r < m; ++r)
            temp.grid.data[cells[r] * nt + k] = 0.5 * (u[static_cast<int>(r)] +
                                                       u_next[static_cast<int>(r)]);
        u = u_next;
        b0 = b1;
    }
    temp.residual = max_u > 0 ? max_defect / max_u : 0.0;
    temp.meta = {{"kind", "crank_nicolson"}, {"nt", nt}};
    temp.require_valid();
    return temp;
}

std::size_t Grad21Stack::component_count() const {
    std::size_t total = 0;
    for (const auto& c : components) total += c.multiplicity;
    return total;
}

std::vector<double> Grad21Stack::pointwise_length() const {
    if (components.empty()) return {};
    std::vector<double> out(components.front().field.size(), 0.0);
    for (const auto& c : components)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += static_cast<double>(c.multiplicity) * c.field[i] * c.field[i];
    for (double& v : out) v = std::sqrt(v);
    return out;
}

Grad21Stack grad21_stack(const Temperature& u, int n) {
    u.require_valid();
    if (n < 1) throw std::invalid_argument("n must be a positive integer");
    const int d = u.grid.dim() - 1;

    // multiplicities of the n-fold tensor power of (d^2 spatial pairs, d/dt)
    std::map<std::pair<std::vector<int>, int>, std::size_t> mult;
    std::vector<int> symbols(n, 0);  // 0..d^2-1: pair (i,j); d^2: time
    const int n_symbols = d * d + 1;
    while (true) {
        std::vector<int> alpha(d, 0);
        int alpha_t = 0;
        for (int s : symbols) {
            if (s == d * d) {
                ++alpha_t;
            } else {
                alpha[s / d] += 1;
                alpha[s % d] += 1;
            }
        }
        mult[{alpha, alpha_t}] += 1;
        int pos = n - 1;
        while (pos >= 0 && ++symbols[pos] == n_symbols) symbols[pos--] = 0;
        if (pos < 0) break;
    }

    Grad21Stack stack;
    stack.n = n;
    stack.d_space = d;
    stack.dims = u.grid.dims;
    stack.margin = static_cast<std::size_t>(2 * n);
    for (std::size_t dim : u.grid.dims)
        if (dim <= 2 * stack.margin)
            throw std::invalid_argument("grid too small for the requested derivative order");
    for (const auto& [key, count] : mult) {
        Grad21Stack::Component comp;
        comp.spatial_orders = key.first;
        comp.time_order = key.second;
        comp.multiplicity = count;
        std::vector<int> orders = key.first;
        orders.push_back(key.second);
        comp.field = mixed_derivative(u.grid, orders);
        stack.components.push_back(std::move(comp));
    }
    return stack;
}

GradientEstimateReport gradient_estimate_check(const Temperature& u, int n, double lambda,
                                               double p, const SingularSet& M,
                                               const BiorthFilterBank& bank, int depth) {
    u.require_valid();
    const int d = u.grid.dim() - 1;
    const Grad21Stack stack = grad21_stack(u, n);
    const std::vector<double> len = stack.pointwise_length();

    // delta at cell centers
    const Grid& g = u.grid;
    std::vector<double> delta(g.size());
    parallel_for(g.size(), [&](std::size_t lo, std::size_t hi) {
        std::vector<double> x(d);
        for (std::size_t flat = lo; flat < hi; ++flat) {
            std::size_t rem = flat;
            double t = 0;
            for (int i = d; i >= 0; --i) {
                const std::size_t idx = rem % g.dims[i];
                rem /= g.dims[i];
                if (i == d)
                    t = g.coord(i, idx);
                else
                    x[i] = g.coord(i, idx);
            }
            delta[flat] = parabolic_delta(x, t, M);
        }
    });

    const double expo = 2.0 * n - lambda;
    double acc = 0;
    for_each_index(g.dims, [&](std::span<const std::size_t> ix, std::size_t flat) {
        for (int i = 0; i < g.dim(); ++i)
            if (ix[i] < stack.margin || ix[i] >= g.dims[i] - stack.margin) return;
        acc += std::pow(std::pow(delta[flat], expo) * len[flat], p);
    });
    const double lhs = std::pow(acc * g.cell_volume(), 1.0 / p);

    const Anisotropy aniso = heat_anisotropy(d);
    const CoefficientTree tree = forward(g, bank, aniso, depth);
    const double lambda_tilde = mean_smoothness_to_tilde(lambda, d);
    const double unit = std::pow(static_cast<double>(tree.schedule.det_m), -depth / 2.0);
    const double rhs = unit * besov_wavelet_norm(tree, lambda_tilde, p, p).value;

    GradientEstimateReport rep;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.ratio = rhs > 0 ? lhs / rhs : 0.0;
    rep.details = {{"n", n},     {"lambda", lambda},       {"lambda_tilde", lambda_tilde},
                   {"p", p},     {"margin", stack.margin}, {"depth", depth},
                   {"lhs", lhs}, {"rhs", rhs}};
    return rep;
}

}  // namespace anisowave
