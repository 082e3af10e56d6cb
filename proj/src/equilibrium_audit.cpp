#include "mvu/equilibrium_audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace mvu {

std::pair<double, double> propagate_moments(const ProblemSpec& spec, double t, double x,
                                            double c, double pi, double h, int substeps) {
    if (!(h > 0.0) || t + h > spec.horizon + 1e-12) {
        throw InvalidParameter("h", h, "h > 0 and t + h <= T");
    }
    substeps = std::max(substeps, 64);
    const double k = spec.market.r + pi * (spec.market.mu - spec.market.r);
    const double diff2 = pi * pi * spec.market.sigma * spec.market.sigma;
    const double dt = h / substeps;

    auto rhs = [&](double s, double m1, double m2) {
        const double inflow = spec.income.rate_at(s) - c;
        return std::array<double, 2>{k * m1 + inflow, (2.0 * k + diff2) * m2 + 2.0 * inflow * m1};
    };

    double m1 = x, m2 = x * x;
    for (int i = 0; i < substeps; ++i) {
        const double s = t + dt * i;
        const auto k1 = rhs(s, m1, m2);
        const auto k2 = rhs(s + 0.5 * dt, m1 + 0.5 * dt * k1[0], m2 + 0.5 * dt * k1[1]);
        const auto k3 = rhs(s + 0.5 * dt, m1 + 0.5 * dt * k2[0], m2 + 0.5 * dt * k2[1]);
        const auto k4 = rhs(s + dt, m1 + dt * k3[0], m2 + dt * k3[1]);
        m1 += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        m2 += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    }
    return {m1, m2};
}

ContinuationTable::ContinuationTable(ProblemSpec spec, double scale, std::vector<double> yb,
                                     std::vector<double> zvar, std::vector<double> q)
    : spec_(std::move(spec)), dollar_scale_(scale), yb_(std::move(yb)), zvar_(std::move(zvar)),
      q_(std::move(q)) {
    step_ = spec_.horizon / static_cast<double>(yb_.size() - 1);
}

ContinuationTable ContinuationTable::from_coefficients(const CoefficientTable& coeffs) {
    const int n = coeffs.grid_size();
    const auto& prefs = coeffs.spec().prefs;
    std::vector<double> yb(n + 1), zvar(n + 1), q(n + 1);
    for (int i = 0; i <= n; ++i) {
        yb[i] = coeffs.b_node(i);
        q[i] = coeffs.q_node(i);
        zvar[i] = 2.0 / prefs.gamma *
                  (coeffs.b_node(i) - coeffs.B_node(i) + prefs.beta * coeffs.q_node(i));
    }
    return ContinuationTable(coeffs.spec(), 1.0, std::move(yb), std::move(zvar), std::move(q));
}

ContinuationTable ContinuationTable::scaled_dollar(const ProblemSpec& spec, double dollar_scale,
                                                   int n) {
    if (n < 100) throw GridTooCoarse("continuation grid n below minimum 100");
    const double T = spec.horizon;
    const double h = T / n;
    const auto& mkt = spec.market;
    const auto& prefs = spec.prefs;
    const double excess = mkt.mu - mkt.r;
    const bool has_utility = prefs.beta > 0.0;

    // Backward sweep of the first-moment intercept, the conditional variance
    // and the utility integral for the deterministic (c*, scaled-dollar)
    // strategy:
    //   yb' = delta yb - e^{-delta(T-t)} e^{r(T-t)} (D(t)(mu-r) + l - c*)
    //   zv' = 2 delta zv - e^{-2 delta(T-t)} e^{2r(T-t)} sigma^2 D(t)^2
    //   q'  = -e^{-rho t} U(c*)
    auto rhs = [&](double t, double yb, double zv) {
        const double D = dollar_scale * dollar_star(spec, t);
        const double c = consumption_star(spec, t);
        const double l = spec.income.rate_at(t);
        const double growth = std::exp((mkt.r - prefs.delta) * (T - t));
        std::array<double, 3> d;
        d[0] = prefs.delta * yb - growth * (D * excess + l - c);
        const double growth2 = std::exp(2.0 * (mkt.r - prefs.delta) * (T - t));
        d[1] = 2.0 * prefs.delta * zv - growth2 * mkt.sigma * mkt.sigma * D * D;
        d[2] = has_utility ? -std::exp(-prefs.rho * t) * spec.utility.eval(c) : 0.0;
        return d;
    };

    std::vector<double> yb(n + 1, 0.0), zvar(n + 1, 0.0), q(n + 1, 0.0);
    double u0 = 0.0, u1 = 0.0, u2 = 0.0;
    for (int i = n; i > 0; --i) {
        const double t1 = h * i;
        const double dt = -h;
        const auto k1 = rhs(t1, u0, u1);
        const auto k2 = rhs(t1 + 0.5 * dt, u0 + 0.5 * dt * k1[0], u1 + 0.5 * dt * k1[1]);
        const auto k3 = rhs(t1 + 0.5 * dt, u0 + 0.5 * dt * k2[0], u1 + 0.5 * dt * k2[1]);
        const auto k4 = rhs(t1 + dt, u0 + dt * k3[0], u1 + dt * k3[1]);
        u0 += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        u1 += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        u2 += dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
        yb[i - 1] = u0;
        zvar[i - 1] = u1;
        q[i - 1] = u2;
    }
    return ContinuationTable(spec, dollar_scale, std::move(yb), std::move(zvar), std::move(q));
}

double ContinuationTable::a(double t) const {
    return std::exp((spec_.market.r - spec_.prefs.delta) * (spec_.horizon - t));
}

double ContinuationTable::interpolate(const std::vector<double>& values, double t) const {
    const int n = static_cast<int>(values.size()) - 1;
    const double u = t / step_;
    int i = static_cast<int>(std::floor(u));
    i = std::clamp(i, 0, n - 1);
    if (u == static_cast<double>(i)) return values[i];
    int i0 = std::clamp(i - 1, 0, n - 3);
    const double s = u - static_cast<double>(i0);
    const std::array<double, 4> f{values[i0], values[i0 + 1], values[i0 + 2], values[i0 + 3]};
    const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    return w0 * f[0] + w1 * f[1] + w2 * f[2] + w3 * f[3];
}

double ContinuationTable::yb(double t) const { return interpolate(yb_, t); }
double ContinuationTable::zvar(double t) const { return interpolate(zvar_, t); }
double ContinuationTable::q(double t) const { return interpolate(q_, t); }

double ContinuationTable::value(double t, double x) const {
    const double y = a(t) * x + yb(t);
    const double z = zvar(t) + y * y;
    return objective_of_triple(y, z, q(t), spec_.prefs);
}

double perturbed_objective(const ProblemSpec& spec, const ContinuationTable& cont,
                           const Perturbation& pert) {
    if (!(pert.h > 0.0) || pert.t + pert.h > spec.horizon + 1e-12) {
        throw InvalidParameter("h", pert.h, "h > 0 and t + h <= T");
    }
    const auto [m1, m2] = propagate_moments(spec, pert.t, pert.x, pert.c, pert.pi, pert.h);
    const double th = pert.t + pert.h;
    const double delta = spec.prefs.delta;
    const double rho = spec.prefs.rho;

    const double a = cont.a(th);
    const double yb = cont.yb(th);
    const double y = std::exp(-delta * pert.h) * (a * m1 + yb);
    const double z = std::exp(-2.0 * delta * pert.h) *
                     (cont.zvar(th) + a * a * m2 + 2.0 * a * yb * m1 + yb * yb);

    double w = cont.q(th);
    if (spec.prefs.beta > 0.0) {
        const double window = rho == 0.0
                                  ? pert.h
                                  : (std::exp(-rho * pert.t) - std::exp(-rho * th)) / rho;
        w += spec.utility.eval(pert.c) * window;
    }
    return objective_of_triple(y, z, w, spec.prefs);
}

double perturbed_objective(const ProblemSpec& spec, const CoefficientTable& coeffs,
                           const Perturbation& pert) {
    return perturbed_objective(spec, ContinuationTable::from_coefficients(coeffs), pert);
}

double equilibrium_gap(const ProblemSpec& spec, const ContinuationTable& cont,
                       const Perturbation& pert) {
    return (cont.value(pert.t, pert.x) - perturbed_objective(spec, cont, pert)) / pert.h;
}

double equilibrium_gap(const ProblemSpec& spec, const CoefficientTable& coeffs,
                       const Perturbation& pert) {
    return equilibrium_gap(spec, ContinuationTable::from_coefficients(coeffs), pert);
}

AuditReport audit_report(const ProblemSpec& spec, const ContinuationTable& cont,
                         std::span<const double> t_list, std::span<const double> x_list,
                         std::span<const double> c_factors, std::span<const double> pi_offsets,
                         std::span<const double> h_list, double tol) {
    AuditReport report;
    report.tol = tol;
    if (c_factors.empty() || pi_offsets.empty() || t_list.empty() || x_list.empty() ||
        h_list.empty()) {
        report.note = "empty deviation grid: nothing to falsify, trivially pass";
        return report;
    }
    bool first = true;
    for (double t : t_list) {
        for (double x : x_list) {
            const double c_cand = consumption_star(spec, t);
            const double pi_cand = cont.dollar_scale() * dollar_star(spec, t) / x;
            for (double cf : c_factors) {
                const double c = std::max(0.0, cf * c_cand);
                for (double po : pi_offsets) {
                    const double pi = pi_cand + po;
                    const bool trivial = (c == c_cand) && (po == 0.0);
                    for (double h : h_list) {
                        if (t + h > spec.horizon) continue;
                        Perturbation pert{t, x, c, pi, h};
                        const double gap = equilibrium_gap(spec, cont, pert);
                        AuditEntry entry{t, x, c, pi, h, gap, trivial};
                        report.entries.push_back(entry);
                        if (first || gap < report.min_gap) {
                            report.min_gap = gap;
                            report.min_entry = entry;
                            first = false;
                        }
                    }
                }
            }
        }
    }
    report.pass = report.min_gap >= -tol;
    report.note = "finite-grid falsification harness, not a proof of equilibrium";
    return report;
}

AuditReport audit_report(const ProblemSpec& spec, const CoefficientTable& coeffs,
                         std::span<const double> t_list, std::span<const double> x_list,
                         std::span<const double> c_factors, std::span<const double> pi_offsets,
                         std::span<const double> h_list, double tol) {
    return audit_report(spec, ContinuationTable::from_coefficients(coeffs), t_list, x_list,
                        c_factors, pi_offsets, h_list, tol);
}

}  // namespace mvu
