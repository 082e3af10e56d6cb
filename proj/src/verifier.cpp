#include "mvu/verifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace mvu {

namespace {

double kappa_of(const ProblemSpec& spec) {
    const double excess = spec.market.mu - spec.market.r;
    return excess * excess / (spec.market.sigma * spec.market.sigma);
}

double discounted_utility(const ProblemSpec& spec, double t) {
    if (spec.prefs.beta == 0.0) return 0.0;
    return std::exp(-spec.prefs.rho * t) * spec.utility.eval(consumption_star(spec, t));
}

// 5-point central 4th-order first derivative on a uniform grid.
double d1_central(const std::vector<double>& f, int i, double h) {
    return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
}

}  // namespace

ResidualReport ode_residuals(const CoefficientTable& coeffs) {
    const ProblemSpec& spec = coeffs.spec();
    const auto& p = spec.prefs;
    const int n = coeffs.grid_size();
    const double h = coeffs.step();
    const double kappa = kappa_of(spec);
    const double r_minus_d = spec.market.r - p.delta;

    std::vector<double> A(n + 1), b(n + 1), B(n + 1), q(n + 1);
    for (int i = 0; i <= n; ++i) {
        A[i] = coeffs.A(coeffs.node_time(i));
        b[i] = coeffs.b_node(i);
        B[i] = coeffs.B_node(i);
        q[i] = coeffs.q_node(i);
    }

    ResidualReport report;
    auto scan = [&](const char* name, auto residual_at, double threshold) {
        ResidualCheck check;
        check.name = name;
        check.grid = "interior nodes 2.." + std::to_string(n - 2) + " of " + std::to_string(n + 1);
        check.threshold = threshold;
        for (int i = 2; i <= n - 2; ++i) {
            const double res = std::abs(residual_at(i));
            if (res > check.max_abs) {
                check.max_abs = res;
                check.location = coeffs.node_time(i);
            }
        }
        check.pass = check.max_abs <= threshold;
        report.checks.push_back(std::move(check));
    };

    // x-coefficient lines: A' + (r - delta) A = 0 (same for a).
    scan("A_x_coefficient",
         [&](int i) { return d1_central(A, i, h) + r_minus_d * A[i]; }, 1e-8);
    // Constant line of the first-moment equation.
    scan("b_constant",
         [&](int i) {
             const double t = coeffs.node_time(i);
             const double c = consumption_star(spec, t);
             const double l = spec.income.rate_at(t);
             const double rhs = p.delta * b[i] - kappa / p.gamma + (c - l) * A[i];
             return d1_central(b, i, h) - rhs;
         },
         1e-8);
    // Constant line of the value equation.
    scan("B_constant",
         [&](int i) {
             const double t = coeffs.node_time(i);
             const double c = consumption_star(spec, t);
             const double l = spec.income.rate_at(t);
             const double util = discounted_utility(spec, t);
             const double rhs = 2.0 * p.delta * B[i] - p.delta * b[i] - kappa / (2.0 * p.gamma) +
                                (c - l) * A[i] - p.beta * util - 2.0 * p.delta * p.beta * q[i];
             return d1_central(B, i, h) - rhs;
         },
         1e-8);
    // Utility integral line: q' + e^{-rho t} U(c*) = 0.
    scan("q_constant",
         [&](int i) { return d1_central(q, i, h) + discounted_utility(spec, coeffs.node_time(i)); },
         1e-8);

    auto terminal = [&](const char* name, double value) {
        ResidualCheck check;
        check.name = name;
        check.grid = "terminal node t = T";
        check.threshold = 1e-12;
        check.max_abs = std::abs(value);
        check.location = spec.horizon;
        check.pass = check.max_abs <= check.threshold;
        report.checks.push_back(std::move(check));
    };
    terminal("A(T) - 1", A[n] - 1.0);
    terminal("a(T) - 1", coeffs.a(spec.horizon) - 1.0);
    terminal("b(T)", b[n]);
    terminal("B(T)", B[n]);
    terminal("p(T)", coeffs.p(spec.horizon));
    terminal("q(T)", q[n]);

    report.finalize();
    return report;
}

double pseudo_bellman_rhs(const ProblemSpec& spec, const CoefficientTable& coeffs, double t,
                          double x, double c, double pi) {
    const auto& mkt = spec.market;
    const auto& p = spec.prefs;
    const double A = coeffs.A(t);
    const double a = coeffs.a(t);
    const double b = coeffs.b(t);
    const double B = coeffs.B(t);
    const double q = coeffs.q(t);
    const double l = spec.income.rate_at(t);

    // F_x = A, F_xx = 0, Q = 0, K = gamma a^2; J from the objective form.
    const double drift = (mkt.r + pi * (mkt.mu - mkt.r)) * x + l - c;
    const double second = -0.5 * pi * pi * mkt.sigma * mkt.sigma * x * x * (0.0 - p.gamma * a * a);
    const double util = p.beta > 0.0 ? std::exp(-p.rho * t) * spec.utility.eval(c) : 0.0;
    const double J = p.delta * (a * x + b) -
                     2.0 * p.delta * (a * x + b + p.beta * q - (A * x + B)) - p.beta * util;
    return -drift * A + second + J;
}

double value_time_derivative(const ProblemSpec& spec, const CoefficientTable& coeffs, double t,
                             double x) {
    const auto& p = spec.prefs;
    const double kappa = kappa_of(spec);
    const double A = coeffs.A(t);
    const double c = consumption_star(spec, t);
    const double l = spec.income.rate_at(t);
    const double util = discounted_utility(spec, t);
    const double A_t = -(spec.market.r - p.delta) * A;
    const double B_t = 2.0 * p.delta * coeffs.B(t) - p.delta * coeffs.b(t) -
                       kappa / (2.0 * p.gamma) + (c - l) * A - p.beta * util -
                       2.0 * p.delta * p.beta * coeffs.q(t);
    return A_t * x + B_t;
}

ResidualReport foc_residuals(const ProblemSpec& spec, const CoefficientTable& coeffs, double t,
                             double x) {
    if (!(x > 0.0)) throw ZeroWealth("FOC check requires x > 0");
    const auto& mkt = spec.market;
    const auto& p = spec.prefs;
    const double A = coeffs.A(t);
    const double a = coeffs.a(t);

    ResidualReport report;

    ResidualCheck cons;
    cons.name = "consumption_foc";
    cons.grid = "t = " + std::to_string(t);
    cons.threshold = 1e-10;
    cons.location = t;
    if (p.beta == 0.0) {
        cons.max_abs = 0.0;
        cons.note = "beta = 0: no consumption FOC (degenerate mode)";
        cons.pass = true;
    } else {
        const double c = consumption_star(spec, t);
        cons.max_abs = std::abs(A - p.beta * std::exp(-p.rho * t) * spec.utility.marginal(c));
        const bool stationary = cons.max_abs <= cons.threshold;
        const bool mode_gap = spec.consumption_mode == ConsumptionMode::paper_literal &&
                              (p.rho != 0.0 || p.delta != 0.0);
        if (!stationary && mode_gap) {
            cons.note = "mode discrepancy: paper_literal rate is not the FOC stationary point "
                        "when rho or delta is nonzero; reported, not failed";
            cons.pass = true;
        } else {
            cons.pass = stationary;
        }
    }
    report.checks.push_back(cons);

    ResidualCheck inv;
    inv.name = "investment_foc";
    inv.grid = "t = " + std::to_string(t) + ", x = " + std::to_string(x);
    inv.threshold = 1e-10;
    inv.location = t;
    const double pi = investment_star(spec, t, x);
    inv.max_abs = std::abs(-(mkt.mu - mkt.r) * x * A +
                           pi * mkt.sigma * mkt.sigma * x * x * p.gamma * a * a);
    inv.pass = inv.max_abs <= inv.threshold;
    report.checks.push_back(inv);

    report.finalize();
    for (const auto& c : report.checks) {
        if (!c.note.empty()) report.note = c.note;
    }
    return report;
}

ResidualReport hjb_argmin_check(const ProblemSpec& spec, const CoefficientTable& coeffs,
                                double t, double x, std::span<const double> grid_c,
                                std::span<const double> grid_pi, ArgminResult* result) {
    ResidualReport report;
    if (grid_c.empty() || grid_pi.empty()) {
        report.note = "empty control grid";
        return report;
    }
    const double c_star = consumption_star(spec, t);
    const double pi_star = investment_star(spec, t, x);

    std::vector<double> values(grid_c.size() * grid_pi.size());
    std::size_t best = 0;
    for (std::size_t ic = 0; ic < grid_c.size(); ++ic) {
        for (std::size_t ip = 0; ip < grid_pi.size(); ++ip) {
            const std::size_t idx = ic * grid_pi.size() + ip;
            values[idx] = pseudo_bellman_rhs(spec, coeffs, t, x, grid_c[ic], grid_pi[ip]);
            if (values[idx] < values[best]) best = idx;  // tie-break: smallest index
        }
    }
    ArgminResult arg;
    arg.c_index = best / grid_pi.size();
    arg.pi_index = best % grid_pi.size();
    arg.c = grid_c[arg.c_index];
    arg.pi = grid_pi[arg.pi_index];
    arg.value = values[best];
    arg.on_boundary = grid_c.size() > 1 && (arg.c_index == 0 || arg.c_index + 1 == grid_c.size());
    arg.on_boundary = arg.on_boundary || (grid_pi.size() > 1 &&
                                          (arg.pi_index == 0 || arg.pi_index + 1 == grid_pi.size()));

    // Local curvature orientation at the extremum (interior points only).
    if (!arg.on_boundary && grid_c.size() >= 3 && grid_pi.size() >= 3) {
        const std::size_t ic = arg.c_index, ip = arg.pi_index;
        auto at = [&](std::size_t i, std::size_t j) { return values[i * grid_pi.size() + j]; };
        const double d2c = at(ic + 1, ip) - 2.0 * at(ic, ip) + at(ic - 1, ip);
        const double d2p = at(ic, ip + 1) - 2.0 * at(ic, ip) + at(ic, ip - 1);
        if (d2c > 0.0 && d2p > 0.0) {
            arg.orientation = "min";
        } else if (d2c < 0.0 && d2p < 0.0) {
            arg.orientation = "max";
        } else {
            arg.orientation = "saddle";
        }
    } else {
        arg.orientation = grid_c.size() == 1 && grid_pi.size() == 1 ? "degenerate" : "boundary";
    }
    if (result) *result = arg;

    const double dc = grid_c.size() > 1 ? grid_c[1] - grid_c[0] : 0.0;
    const double dpi = grid_pi.size() > 1 ? grid_pi[1] - grid_pi[0] : 0.0;

    // With paper_literal consumption and a nonzero rho or delta the tabulated
    // rate is not the stationary point of the expression, so the consumption
    // direction is annotated instead of enforced (same treatment as the FOC).
    const bool mode_gap = spec.consumption_mode == ConsumptionMode::paper_literal &&
                          spec.prefs.beta > 0.0 &&
                          (spec.prefs.rho != 0.0 || spec.prefs.delta != 0.0);

    ResidualCheck cell;
    cell.name = "argmin_within_cell";
    cell.grid = std::to_string(grid_c.size()) + "x" + std::to_string(grid_pi.size()) +
                " control grid at t = " + std::to_string(t);
    cell.threshold = 1.0;  // measured in cells
    const double c_cells = dc > 0.0 ? std::abs(arg.c - c_star) / dc : std::abs(arg.c - c_star);
    const double pi_cells = dpi > 0.0 ? std::abs(arg.pi - pi_star) / dpi : std::abs(arg.pi - pi_star);
    cell.max_abs = mode_gap ? pi_cells : std::max(c_cells, pi_cells);
    cell.location = t;
    cell.pass = cell.max_abs <= 1.0 + 1e-9 && !arg.on_boundary;
    if (arg.on_boundary) cell.note = "extremum on grid boundary";
    if (mode_gap) {
        cell.note = "mode discrepancy: consumption offset of " + std::to_string(c_cells) +
                    " cells reported, not failed; investment direction enforced";
    }
    report.checks.push_back(cell);

    ResidualCheck match;
    match.name = "extremum_equals_F_t";
    match.grid = cell.grid;
    match.threshold = 1e-4;
    // the pseudo-Bellman equality F_t = RHS(c*, pi*) holds in either mode;
    // away from the mode gap the grid extremum value is the same thing up to
    // grid quantisation
    const double rhs_value =
        mode_gap ? pseudo_bellman_rhs(spec, coeffs, t, x, c_star, pi_star) : arg.value;
    match.max_abs = std::abs(rhs_value - value_time_derivative(spec, coeffs, t, x));
    match.location = t;
    match.pass = match.max_abs <= match.threshold;
    if (mode_gap) match.note = "compared at the tabulated controls (mode discrepancy)";
    report.checks.push_back(match);

    report.note = "orientation: " + arg.orientation;
    if (mode_gap) report.note += "; mode discrepancy annotated";
    report.finalize();
    return report;
}

namespace {

// Banded LU solve (kl = ku = 2), no pivoting: the implicit operator is
// strongly diagonally dominant at these resolutions.
class Banded5 {
public:
    explicit Banded5(int n) : n_(n), rows_(n) {}
    // column j relative to row i: offset in [-2, 2]
    double& at(int i, int offset) { return rows_[i][offset + 2]; }
    void clear() {
        for (auto& r : rows_) r = {0, 0, 0, 0, 0};
    }

    void solve_in_place(std::vector<double>& rhs) {
        for (int i = 0; i < n_ - 1; ++i) {
            const double pivot = rows_[i][2];
            if (std::abs(pivot) < 1e-300) throw NoConvergence("singular implicit operator");
            for (int r = 1; r <= 2 && i + r < n_; ++r) {
                const int off = -r;  // entry (i+r, i) sits at offset -r
                const double factor = rows_[i + r][off + 2] / pivot;
                if (factor == 0.0) continue;
                rows_[i + r][off + 2] = 0.0;
                for (int c = 1; c <= 2; ++c) {
                    if (i + c >= n_) break;
                    rows_[i + r][off + c + 2] -= factor * rows_[i][c + 2];
                }
                rhs[i + r] -= factor * rhs[i];
            }
        }
        for (int i = n_ - 1; i >= 0; --i) {
            double s = rhs[i];
            for (int c = 1; c <= 2; ++c) {
                if (i + c >= n_) break;
                s -= rows_[i][c + 2] * rhs[i + c];
            }
            rhs[i] = s / rows_[i][2];
        }
    }

private:
    int n_;
    std::vector<std::array<double, 5>> rows_;
};

struct SolveOutput {
    PDESurfaces surfaces;
    double err_Y, err_Z, err_W, w_spread;
};

SolveOutput solve_once(const ProblemSpec& spec, const CoefficientTable& coeffs, int n_t, int n_x,
                       double x_min, double x_max) {
    const auto& mkt = spec.market;
    const auto& p = spec.prefs;
    const double T = spec.horizon;
    const double dt = T / n_t;
    const double dx = (x_max - x_min) / (n_x - 1);

    PDESurfaces s;
    s.t_nodes.resize(n_t + 1);
    for (int k = 0; k <= n_t; ++k) s.t_nodes[k] = dt * k;
    s.x_nodes.resize(n_x);
    for (int i = 0; i < n_x; ++i) s.x_nodes[i] = x_min + dx * i;

    std::vector<double> Y(n_x), Z(n_x), W(n_x);
    for (int i = 0; i < n_x; ++i) {
        Y[i] = s.x_nodes[i];
        Z[i] = s.x_nodes[i] * s.x_nodes[i];
        W[i] = 0.0;
    }
    s.Y.assign(static_cast<std::size_t>(n_t + 1) * n_x, 0.0);
    s.Z.assign(s.Y.size(), 0.0);
    s.W.assign(s.Y.size(), 0.0);
    auto store = [&](int k, const std::vector<double>& y, const std::vector<double>& z,
                     const std::vector<double>& w) {
        std::copy(y.begin(), y.end(), s.Y.begin() + static_cast<std::size_t>(k) * n_x);
        std::copy(z.begin(), z.end(), s.Z.begin() + static_cast<std::size_t>(k) * n_x);
        std::copy(w.begin(), w.end(), s.W.begin() + static_cast<std::size_t>(k) * n_x);
    };
    store(n_t, Y, Z, W);

    Banded5 mat(n_x);
    std::vector<double> rhs(n_x);
    std::vector<std::array<double, 5>> stencil(n_x);  // operator L rows, offsets -2..2

    // Spatial operator L u = [r x + g(t)] u_x + (sigma^2 D^2 / 2) u_xx with
    // second-order central stencils inside and one-sided zero-third-derivative
    // rows at the edges (exact for quadratics).
    auto fill_stencil = [&](double drift_free, double diff_coef) {
        for (int i = 0; i < n_x; ++i) {
            const double adv = mkt.r * s.x_nodes[i] + drift_free;
            const double dif = diff_coef;
            auto& row = stencil[i];
            row = {0.0, 0.0, 0.0, 0.0, 0.0};
            if (i == 0) {
                row[2] = adv * (-3.0 / (2.0 * dx)) + dif / (dx * dx);
                row[3] = adv * (4.0 / (2.0 * dx)) - 2.0 * dif / (dx * dx);
                row[4] = adv * (-1.0 / (2.0 * dx)) + dif / (dx * dx);
            } else if (i == n_x - 1) {
                row[2] = adv * (3.0 / (2.0 * dx)) + dif / (dx * dx);
                row[1] = adv * (-4.0 / (2.0 * dx)) - 2.0 * dif / (dx * dx);
                row[0] = adv * (1.0 / (2.0 * dx)) + dif / (dx * dx);
            } else {
                row[1] = -adv / (2.0 * dx) + dif / (dx * dx);
                row[2] = -2.0 * dif / (dx * dx);
                row[3] = adv / (2.0 * dx) + dif / (dx * dx);
            }
        }
    };
    auto apply_stencil = [&](const std::vector<double>& u, int i) {
        const auto& row = stencil[i];
        double acc = row[2] * u[i];
        if (i >= 1) acc += row[1] * u[i - 1];
        if (i >= 2) acc += row[0] * u[i - 2];
        if (i + 1 < n_x) acc += row[3] * u[i + 1];
        if (i + 2 < n_x) acc += row[4] * u[i + 2];
        return acc;
    };

    // One backward theta-scheme step of u_t = -L u + reaction u - source:
    //   (I + theta dt (reaction I - L_k)) u^k =
    //   (I - (1-theta) dt (reaction I - L_{k+1})) u^{k+1} + (dt/2)(s_k + s_{k+1}),
    // theta = 1/2 (trapezoidal) after two implicit startup steps that damp
    // the high-frequency modes the trapezoidal rule leaves undamped.
    auto step = [&](std::vector<double>& u, double reaction, double source_sum,
                    double drift_free_new, double diff_new, double drift_free_old,
                    double diff_old, double theta) {
        const double wi = theta * dt;        // implicit weight
        const double we = (1.0 - theta) * dt;  // explicit weight
        fill_stencil(drift_free_old, diff_old);
        for (int i = 0; i < n_x; ++i) {
            rhs[i] = (1.0 - we * reaction) * u[i] + we * apply_stencil(u, i) +
                     0.5 * dt * source_sum;
        }
        fill_stencil(drift_free_new, diff_new);
        mat.clear();
        for (int i = 0; i < n_x; ++i) {
            const auto& row = stencil[i];
            for (int off = -2; off <= 2; ++off) {
                if (i + off < 0 || i + off >= n_x) continue;
                mat.at(i, off) = (off == 0 ? 1.0 + wi * reaction : 0.0) - wi * row[off + 2];
            }
        }
        mat.solve_in_place(rhs);
        u = rhs;
    };

    auto coefficients_at = [&](double t, double& drift_free, double& diff_coef, double& src) {
        const double D = dollar_star(spec, t);
        const double c = consumption_star(spec, t);
        const double l = spec.income.rate_at(t);
        drift_free = D * (mkt.mu - mkt.r) + l - c;
        diff_coef = 0.5 * mkt.sigma * mkt.sigma * D * D;
        src = p.beta > 0.0 ? std::exp(-p.rho * t) * spec.utility.eval(c) : 0.0;
    };

    for (int k = n_t - 1; k >= 0; --k) {
        double g_new, dif_new, src_new, g_old, dif_old, src_old;
        coefficients_at(dt * k, g_new, dif_new, src_new);
        coefficients_at(dt * (k + 1), g_old, dif_old, src_old);

        const double theta = (k >= n_t - 2) ? 1.0 : 0.5;  // Rannacher startup
        step(Y, p.delta, 0.0, g_new, dif_new, g_old, dif_old, theta);
        step(Z, 2.0 * p.delta, 0.0, g_new, dif_new, g_old, dif_old, theta);
        step(W, 0.0, src_new + src_old, g_new, dif_new, g_old, dif_old, theta);
        store(k, Y, Z, W);
    }

    // Interior deviation from the closed forms (boundary columns excluded).
    SolveOutput out;
    out.surfaces = std::move(s);
    out.err_Y = out.err_Z = out.err_W = out.w_spread = 0.0;
    const auto& sr = out.surfaces;
    for (int k = 0; k <= n_t; ++k) {
        const double t = sr.t_nodes[k];
        const double a = coeffs.a(t);
        const double b = coeffs.b(t);
        const double q = coeffs.q(t);
        const double zvar = 2.0 / p.gamma * (b - coeffs.B(t) + p.beta * q);
        double w_min = 0.0, w_max = 0.0;
        for (int i = 1; i + 1 < n_x; ++i) {
            const double x = sr.x_nodes[i];
            const std::size_t idx = static_cast<std::size_t>(k) * n_x + i;
            const double y_exact = a * x + b;
            out.err_Y = std::max(out.err_Y, std::abs(sr.Y[idx] - y_exact));
            out.err_Z = std::max(out.err_Z, std::abs(sr.Z[idx] - (zvar + y_exact * y_exact)));
            out.err_W = std::max(out.err_W, std::abs(sr.W[idx] - q));
            const double w = sr.W[idx];
            if (i == 1) {
                w_min = w_max = w;
            } else {
                w_min = std::min(w_min, w);
                w_max = std::max(w_max, w);
            }
        }
        out.w_spread = std::max(out.w_spread, w_max - w_min);
    }
    return out;
}

}  // namespace

double PDESurfaces::at(const std::vector<double>& surface, double t, double x) const {
    const int n_x = static_cast<int>(x_nodes.size());
    const int n_t = static_cast<int>(t_nodes.size()) - 1;
    const double dt = t_nodes[1] - t_nodes[0];
    const double dx = x_nodes[1] - x_nodes[0];
    int k = std::clamp(static_cast<int>(std::round(t / dt)), 0, n_t);
    // quadratic 3-point interpolation in x (exact for the quadratic Z)
    int i = std::clamp(static_cast<int>(std::floor((x - x_nodes[0]) / dx)), 1, n_x - 2);
    const double s = (x - x_nodes[i]) / dx;
    const std::size_t base = static_cast<std::size_t>(k) * n_x;
    const double fm = surface[base + i - 1], f0 = surface[base + i], fp = surface[base + i + 1];
    return f0 + 0.5 * s * (fp - fm) + 0.5 * s * s * (fp - 2.0 * f0 + fm);
}

FDResult fd_solve_pdes(const ProblemSpec& spec, const CoefficientTable& coeffs,
                       const FDGrid& grid) {
    if (grid.n_t < 200 || grid.n_x < 200) {
        throw GridTooCoarse("FD grid " + std::to_string(grid.n_t) + "x" +
                            std::to_string(grid.n_x) + " below the 200x200 minimum");
    }
    const double x_min = grid.x_min > 0.0 ? grid.x_min : 0.1 * spec.x0;
    const double x_max = grid.x_max > 0.0 ? grid.x_max : 8.0 * spec.x0;
    if (!(x_min > 0.0) || !(x_min < spec.x0 && spec.x0 < x_max)) {
        throw InvalidParameter("fd.x_range", x_min, "0 < x_min < x0 < x_max");
    }

    SolveOutput base = solve_once(spec, coeffs, grid.n_t, grid.n_x, x_min, x_max);
    SolveOutput fine = solve_once(spec, coeffs, 2 * grid.n_t, 2 * grid.n_x, x_min, x_max);

    FDResult result;
    result.err_Y = base.err_Y;
    result.err_Z = base.err_Z;
    result.err_W = base.err_W;
    result.w_x_spread = base.w_spread;
    result.refined_err_Y = fine.err_Y;
    result.refinement_ratio = fine.err_Y > 0.0 ? base.err_Y / fine.err_Y
                                               : std::numeric_limits<double>::infinity();
    result.surfaces = std::move(base.surfaces);

    if (result.refinement_ratio < 1.0) {
        throw GridTooCoarse("FD error does not decrease under refinement (ratio " +
                            std::to_string(result.refinement_ratio) + ")");
    }

    auto push = [&](const char* name, double value, double threshold, const char* where) {
        ResidualCheck c;
        c.name = name;
        c.grid = std::to_string(grid.n_t) + "x" + std::to_string(grid.n_x) + " " + where;
        c.max_abs = value;
        c.threshold = threshold;
        c.pass = value <= threshold;
        result.report.checks.push_back(std::move(c));
    };
    push("Y_vs_affine_ansatz", result.err_Y, 5e-3, "interior");
    push("W_x_spread", result.w_x_spread, 1e-6, "interior");
    {
        ResidualCheck c;
        c.name = "refinement_ratio";
        c.grid = "base vs doubled grid";
        c.max_abs = result.refinement_ratio;
        c.threshold = 2.0;
        c.pass = result.refinement_ratio >= 2.0;
        c.note = "pass requires ratio >= 2";
        result.report.checks.push_back(std::move(c));
    }
    result.report.finalize();
    return result;
}

}  // namespace mvu
