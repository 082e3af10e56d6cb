#include "mvu/closed_form.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace mvu {

namespace {

double discount_a(const ProblemSpec& spec, double t) {
    return std::exp((spec.market.r - spec.prefs.delta) * (spec.horizon - t));
}

double risk_premium_sq(const ProblemSpec& spec) {
    const double excess = spec.market.mu - spec.market.r;
    return excess * excess / (spec.market.sigma * spec.market.sigma);
}

double raw_consumption(const ProblemSpec& spec, double t) {
    const auto& p = spec.prefs;
    double v = 0.0;
    if (spec.consumption_mode == ConsumptionMode::paper_literal) {
        v = std::exp(spec.market.r * (spec.horizon - t) - p.delta * spec.horizon) / p.beta;
    } else {
        v = std::exp(p.rho * t) * discount_a(spec, t) / p.beta;
    }
    return spec.utility.inverse_marginal(v);
}

void require_in_horizon(const ProblemSpec& spec, double t) {
    if (!(t >= 0.0 && t <= spec.horizon)) {
        throw OutOfHorizon("t = " + std::to_string(t) + " outside [0, " +
                           std::to_string(spec.horizon) + "]");
    }
}

}  // namespace

double consumption_star(const ProblemSpec& spec, double t) {
    require_in_horizon(spec, t);
    if (spec.prefs.beta == 0.0) return 0.0;  // degenerate classical-MV mode
    const double c = raw_consumption(spec, t);
    if (spec.clamp_consumption && c < 0.0) return 0.0;
    return c;
}

bool consumption_clamp_active(const ProblemSpec& spec) {
    if (!spec.clamp_consumption || spec.prefs.beta == 0.0) return false;
    return raw_consumption(spec, 0.0) < 0.0 || raw_consumption(spec, spec.horizon) < 0.0;
}

double investment_star(const ProblemSpec& spec, double t, double x) {
    require_in_horizon(spec, t);
    if (x == 0.0) throw ZeroWealth("investment fraction undefined at x = 0");
    return dollar_star(spec, t) / x;
}

double dollar_star(const ProblemSpec& spec, double t) {
    const double excess = spec.market.mu - spec.market.r;
    return excess / (spec.prefs.gamma * spec.market.sigma * spec.market.sigma) /
           discount_a(spec, t);
}

Policy equilibrium_policy(const ProblemSpec& spec) {
    Policy policy;
    policy.consumption = [spec](double t) { return consumption_star(spec, t); };
    policy.investment = [spec](double t, double x) { return investment_star(spec, t, x); };
    policy.dollar_position = [spec](double t, double /*x*/) { return dollar_star(spec, t); };
    return policy;
}

CoefficientTable::CoefficientTable(ProblemSpec spec, std::vector<double> b,
                                   std::vector<double> B, std::vector<double> q)
    : spec_(std::move(spec)), b_(std::move(b)), B_(std::move(B)), q_(std::move(q)) {
    step_ = spec_.horizon / static_cast<double>(b_.size() - 1);
}

double CoefficientTable::A(double t) const { return discount_a(spec_, t); }
double CoefficientTable::a(double t) const { return discount_a(spec_, t); }
double CoefficientTable::b(double t) const { return interpolate(b_, t); }
double CoefficientTable::B(double t) const { return interpolate(B_, t); }
double CoefficientTable::q(double t) const { return interpolate(q_, t); }

double CoefficientTable::interpolate(const std::vector<double>& values, double t) const {
    require_in_horizon(spec_, t);
    const int n = static_cast<int>(values.size()) - 1;
    const double u = t / step_;
    int i = static_cast<int>(std::floor(u));
    i = std::clamp(i, 0, n - 1);
    if (u == static_cast<double>(i)) return values[i];  // exact at nodes

    // Local 4-point Lagrange cubic around the bracketing interval.
    int i0 = std::clamp(i - 1, 0, n - 3);
    const double s = u - static_cast<double>(i0);
    const std::array<double, 4> f{values[i0], values[i0 + 1], values[i0 + 2], values[i0 + 3]};
    const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    return w0 * f[0] + w1 * f[1] + w2 * f[2] + w3 * f[3];
}

CoefficientTable CoefficientTable::shifted(double db, double dB, double dq) const {
    std::vector<double> b2 = b_, B2 = B_, q2 = q_;
    for (auto& v : b2) v += db;
    for (auto& v : B2) v += dB;
    for (auto& v : q2) v += dq;
    CoefficientTable out(spec_, std::move(b2), std::move(B2), std::move(q2));
    out.add_note("table shifted for falsification control");
    return out;
}

CoefficientTable build_coefficients(const ProblemSpec& spec, int n) {
    if (n < 100) {
        throw GridTooCoarse("coefficient grid n = " + std::to_string(n) + " below minimum 100");
    }
    const double T = spec.horizon;
    const double h = T / static_cast<double>(n);
    const auto& p = spec.prefs;
    const double kappa = risk_premium_sq(spec);
    const bool has_utility = p.beta > 0.0;

    std::vector<double> b(n + 1, 0.0), B(n + 1, 0.0), q(n + 1, 0.0);

    struct State {
        double b, B, q;
    };
    auto rhs = [&](double t, const State& s) {
        const double at = discount_a(spec, t);
        const double c = consumption_star(spec, t);
        const double l = spec.income.rate_at(t);
        const double util = has_utility ? std::exp(-p.rho * t) * spec.utility.eval(c) : 0.0;
        State d;
        d.b = p.delta * s.b - kappa / p.gamma + (c - l) * at;
        d.q = -util;
        d.B = 2.0 * p.delta * s.B - p.delta * s.b - kappa / (2.0 * p.gamma) + (c - l) * at -
              p.beta * util - 2.0 * p.delta * p.beta * s.q;
        return d;
    };

    State s{0.0, 0.0, 0.0};  // terminal values at t = T
    for (int i = n; i > 0; --i) {
        const double t1 = h * i;
        const double dt = -h;  // backward
        const State k1 = rhs(t1, s);
        const State s2{s.b + 0.5 * dt * k1.b, s.B + 0.5 * dt * k1.B, s.q + 0.5 * dt * k1.q};
        const State k2 = rhs(t1 + 0.5 * dt, s2);
        const State s3{s.b + 0.5 * dt * k2.b, s.B + 0.5 * dt * k2.B, s.q + 0.5 * dt * k2.q};
        const State k3 = rhs(t1 + 0.5 * dt, s3);
        const State s4{s.b + dt * k3.b, s.B + dt * k3.B, s.q + dt * k3.q};
        const State k4 = rhs(t1 + dt, s4);
        s.b += dt / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b);
        s.B += dt / 6.0 * (k1.B + 2.0 * k2.B + 2.0 * k3.B + k4.B);
        s.q += dt / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
        b[i - 1] = s.b;
        B[i - 1] = s.B;
        q[i - 1] = s.q;
    }

    CoefficientTable table(spec, std::move(b), std::move(B), std::move(q));
    if (p.beta == 0.0) table.add_note("beta = 0: consumption forced to 0, utility term dropped");
    if (consumption_clamp_active(spec)) {
        table.add_note("consumption clamped at 0 on part of the horizon");
    }
    return table;
}

double value_function(const CoefficientTable& coeffs, double t, double x) {
    return coeffs.A(t) * x + coeffs.B(t);
}

double terminal_mean(const CoefficientTable& coeffs, double t, double x) {
    return coeffs.a(t) * x + coeffs.b(t);
}

double terminal_variance(const CoefficientTable& coeffs, double t, double x) {
    const auto& p = coeffs.spec().prefs;
    const double value =
        2.0 / p.gamma * (coeffs.b(t) - coeffs.B(t) + p.beta * (coeffs.p(t) * x + coeffs.q(t)));
    const double tol = 1e-10 * std::max(1.0, std::abs(coeffs.b(t)) + std::abs(coeffs.B(t)));
    if (value < -tol) {
        throw NegativeVariance("terminal variance " + std::to_string(value) + " < -tolerance");
    }
    return value;
}

double terminal_second_moment(const CoefficientTable& coeffs, double t, double x) {
    const double mean = terminal_mean(coeffs, t, x);
    return terminal_variance(coeffs, t, x) + mean * mean;
}

double accumulated_utility(const CoefficientTable& coeffs, double t) { return coeffs.q(t); }

BetaSensitivity sensitivity_beta(const ProblemSpec& spec, const CoefficientTable& coeffs,
                                 double t, double x) {
    if (spec.utility.family() != UtilityFamily::log) {
        throw UtilityMismatch("beta sensitivity is derived for the logarithmic utility only");
    }
    const int n = coeffs.grid_size();
    const double beta = spec.prefs.beta;
    if (beta <= 0.0) throw BetaZero("beta sensitivity requires beta > 0");
    const double step = beta * 1e-4;

    auto value_at = [&](double beta_value) {
        ProblemSpec s = spec;
        s.prefs.beta = beta_value;
        const CoefficientTable table = build_coefficients(s, n);
        return value_function(table, t, x);
    };
    const double v_plus = value_at(beta + step);
    const double v_minus = value_at(beta - step);
    const double v_mid = value_function(coeffs, t, x);

    BetaSensitivity out;
    out.dV_fd = (v_plus - v_minus) / (2.0 * step);
    out.d2V_fd = (v_plus - 2.0 * v_mid + v_minus) / (step * step);

    // M(t) = int_t^T e^{-rho s}[-r(T-s) + rho T] ds, composite Simpson.
    const auto& p = spec.prefs;
    const double r = spec.market.r;
    const double T = spec.horizon;
    auto integrand = [&](double sgrid) {
        return std::exp(-p.rho * sgrid) * (-r * (T - sgrid) + p.rho * T);
    };
    const int panels = 2000;
    const double hq = (T - t) / panels;
    double sum = integrand(t) + integrand(T);
    for (int i = 1; i < panels; ++i) {
        sum += (i % 2 == 0 ? 2.0 : 4.0) * integrand(t + hq * i);
    }
    out.M_paper = sum * hq / 3.0;
    out.dV_paper = out.M_paper * (1.0 + std::log(beta));
    return out;
}

}  // namespace mvu
