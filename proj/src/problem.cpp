#include "mvu/problem.hpp"

#include <algorithm>
#include <cmath>

namespace mvu {

IncomeSchedule::IncomeSchedule(std::vector<IncomeSegment> segments)
    : segments_(std::move(segments)) {
    if (segments_.empty()) return;
    if (segments_.front().start != 0.0) {
        throw InvalidParameter("income.segments", segments_.front().start,
                               "first segment must start at 0");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (!std::isfinite(segments_[i].rate) || !std::isfinite(segments_[i].start)) {
            throw InvalidParameter("income.segments", segments_[i].rate,
                                   "segment entries must be finite");
        }
        if (i > 0 && !(segments_[i].start > segments_[i - 1].start)) {
            throw InvalidParameter("income.segments", segments_[i].start,
                                   "segment start times must be strictly increasing");
        }
    }
}

double IncomeSchedule::rate_at(double t) const {
    if (segments_.empty()) return 0.0;
    // Right-continuous: the segment owning t is the last one with start <= t.
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double value, const IncomeSegment& s) { return value < s.start; });
    if (it == segments_.begin()) return 0.0;  // t < 0 handled by income_at
    return std::prev(it)->rate;
}

double income_at(const IncomeSchedule& schedule, double t, double horizon) {
    if (t < 0.0 || t > horizon || !std::isfinite(t)) {
        throw OutOfHorizon("income requested at t = " + std::to_string(t) +
                           " outside [0, " + std::to_string(horizon) + "]");
    }
    return schedule.rate_at(t);
}

ProblemSpec validate_spec(const ProblemSpec& spec) {
    std::vector<InvalidParameter> violations;
    auto check = [&](bool ok, const char* name, double value, const char* constraint) {
        if (!ok) violations.emplace_back(name, value, constraint);
    };

    check(std::isfinite(spec.market.r) && spec.market.r > 0.0, "market.r", spec.market.r, "r > 0");
    check(std::isfinite(spec.market.sigma) && spec.market.sigma > 0.0, "market.sigma",
          spec.market.sigma, "sigma > 0");
    check(std::isfinite(spec.market.mu) && spec.market.mu > spec.market.r, "market.mu",
          spec.market.mu, "mu > r");
    check(std::isfinite(spec.prefs.gamma) && spec.prefs.gamma > 0.0, "prefs.gamma",
          spec.prefs.gamma, "gamma > 0");
    check(std::isfinite(spec.prefs.beta) && spec.prefs.beta >= 0.0, "prefs.beta",
          spec.prefs.beta, "beta >= 0");
    check(std::isfinite(spec.prefs.rho) && spec.prefs.rho >= 0.0, "prefs.rho", spec.prefs.rho,
          "rho >= 0");
    check(std::isfinite(spec.prefs.delta) && spec.prefs.delta >= 0.0, "prefs.delta",
          spec.prefs.delta, "delta >= 0");
    check(std::isfinite(spec.horizon) && spec.horizon > 0.0, "horizon.T", spec.horizon, "T > 0");
    check(std::isfinite(spec.x0) && spec.x0 > 0.0, "init.x0", spec.x0, "x0 > 0");
    for (const auto& seg : spec.income.segments()) {
        check(seg.start <= spec.horizon, "income.segments", seg.start,
              "segment start within [0, T]");
    }

    if (!violations.empty()) throw ValidationError(std::move(violations));
    return spec;
}

std::pair<double, double> drift_diffusion(const ProblemSpec& spec, double t, double x,
                                          double c, double pi) {
    if (!std::isfinite(t) || !std::isfinite(x) || !std::isfinite(c) || !std::isfinite(pi)) {
        throw DomainError("drift_diffusion requires finite (t, x, c, pi)");
    }
    const double l = income_at(spec.income, t, spec.horizon);
    const double drift = (spec.market.r + pi * (spec.market.mu - spec.market.r)) * x + l - c;
    const double diffusion = pi * spec.market.sigma * x;
    return {drift, diffusion};
}

double objective_of_triple(double y, double z, double w, const Preferences& prefs) {
    const double spread = z - y * y;
    const double tol = 1e-8 * std::max(1.0, y * y);
    if (spread < -tol) {
        throw NegativeVariance("z - y^2 = " + std::to_string(spread) + " below -tolerance");
    }
    return y - 0.5 * prefs.gamma * spread + prefs.beta * w;
}

}  // namespace mvu
