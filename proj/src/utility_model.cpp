#include "mvu/utility_model.hpp"

#include <cmath>
#include <limits>

namespace mvu {

namespace {

constexpr int kMaxBracketExpansions = 200;
constexpr int kMaxBisections = 500;
constexpr double kInverseRelTol = 1e-12;

void require_positive_rate(double c, const char* family) {
    if (!(c > 0.0)) {
        throw DomainError(std::string(family) + " utility requires c > 0, got c = " +
                          std::to_string(c));
    }
}

}  // namespace

UtilityModel UtilityModel::log_utility() {
    UtilityModel u;
    u.family_ = UtilityFamily::log;
    return u;
}

UtilityModel UtilityModel::power_utility(double theta) {
    if (!(theta < 1.0) || theta == 0.0 || !std::isfinite(theta)) {
        throw InvalidParameter("theta", theta, "theta < 1 and theta != 0");
    }
    UtilityModel u;
    u.family_ = UtilityFamily::power;
    u.theta_ = theta;
    return u;
}

UtilityModel UtilityModel::exponential_utility(double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw InvalidParameter("eta", eta, "eta > 0");
    }
    UtilityModel u;
    u.family_ = UtilityFamily::exponential;
    u.eta_ = eta;
    return u;
}

UtilityModel UtilityModel::custom_utility(CustomUtility fns) {
    if (!fns.eval || !fns.marginal) {
        throw DomainError("custom utility requires eval and marginal functions");
    }
    UtilityModel u;
    u.family_ = UtilityFamily::custom;
    u.custom_ = std::move(fns);
    return u;
}

double UtilityModel::eval(double c) const {
    switch (family_) {
        case UtilityFamily::log:
            require_positive_rate(c, "log");
            return std::log(c);
        case UtilityFamily::power:
            require_positive_rate(c, "power");
            return std::pow(c, theta_) / theta_;
        case UtilityFamily::exponential:
            return -std::exp(-eta_ * c) / eta_;
        case UtilityFamily::custom:
            return custom_.eval(c);
    }
    throw DomainError("unreachable utility family");
}

double UtilityModel::marginal(double c) const {
    switch (family_) {
        case UtilityFamily::log:
            require_positive_rate(c, "log");
            return 1.0 / c;
        case UtilityFamily::power:
            require_positive_rate(c, "power");
            return std::pow(c, theta_ - 1.0);
        case UtilityFamily::exponential:
            return std::exp(-eta_ * c);
        case UtilityFamily::custom:
            return custom_.marginal(c);
    }
    throw DomainError("unreachable utility family");
}

double UtilityModel::inverse_marginal(double v) const {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError("inverse marginal requires v > 0, got v = " + std::to_string(v));
    }
    switch (family_) {
        case UtilityFamily::log:
            return 1.0 / v;
        case UtilityFamily::power:
            return std::pow(v, 1.0 / (theta_ - 1.0));
        case UtilityFamily::exponential:
            return -std::log(v) / eta_;  // may be negative; clamping is a spec-level flag
        case UtilityFamily::custom:
            break;
    }
    if (custom_.inverse_marginal) return custom_.inverse_marginal(v);

    // Bracketing bisection on the strictly decreasing marginal. Geometric
    // expansion from c = 1 until marginal(lo) >= v >= marginal(hi).
    double lo = 1.0;
    double hi = 1.0;
    double m1 = custom_.marginal(1.0);
    if (m1 == v) return 1.0;
    if (m1 > v) {
        for (int i = 0; i < kMaxBracketExpansions; ++i) {
            hi *= 2.0;
            if (custom_.marginal(hi) <= v) break;
            lo = hi;
            if (i + 1 == kMaxBracketExpansions) {
                throw NoConvergence("inverse marginal bracket expansion failed upward");
            }
        }
    } else {
        for (int i = 0; i < kMaxBracketExpansions; ++i) {
            lo *= 0.5;
            if (custom_.marginal(lo) >= v) break;
            hi = lo;
            if (i + 1 == kMaxBracketExpansions) {
                throw NoConvergence("inverse marginal bracket expansion failed downward");
            }
        }
    }
    for (int i = 0; i < kMaxBisections; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= kInverseRelTol * std::max(std::abs(mid), 1e-300)) return mid;
        if (custom_.marginal(mid) >= v) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    throw NoConvergence("inverse marginal bisection did not converge");
}

AdmissibilityReport admissibility_report(const UtilityModel& u, std::span<const double> grid) {
    if (grid.size() < 3) {
        throw InvalidParameter("grid", static_cast<double>(grid.size()),
                               "admissibility grid needs >= 3 points");
    }
    AdmissibilityReport report;
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = u.eval(grid[i]);

    report.increasing = true;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (!(values[i + 1] - values[i] > 0.0)) {
            report.increasing = false;
            report.notes.push_back("not increasing between grid points " + std::to_string(i) +
                                   " and " + std::to_string(i + 1));
            break;
        }
    }
    report.concave = true;
    for (std::size_t i = 0; i + 2 < values.size(); ++i) {
        const double second = (values[i + 2] - values[i + 1]) - (values[i + 1] - values[i]);
        if (second > 1e-12 * std::max(1.0, std::abs(values[i + 1]))) {
            report.concave = false;
            report.notes.push_back("convex segment at grid point " + std::to_string(i + 1));
            break;
        }
    }

    // U(0) is checked only where it is finite: the log family (and power with
    // a negative exponent) diverge at zero and are flagged as not-finite.
    switch (u.family()) {
        case UtilityFamily::log:
            report.zero_value = ZeroValueStatus::not_finite;
            break;
        case UtilityFamily::power:
            if (u.theta() > 0.0) {
                report.zero_value = ZeroValueStatus::satisfied;
                report.value_at_zero = 0.0;
            } else {
                report.zero_value = ZeroValueStatus::not_finite;
            }
            break;
        case UtilityFamily::exponential:
            report.value_at_zero = -1.0 / u.eta();
            report.zero_value = ZeroValueStatus::violated;
            report.notes.push_back("U(0) = " + std::to_string(report.value_at_zero) + " != 0");
            break;
        case UtilityFamily::custom: {
            double at_zero = std::numeric_limits<double>::quiet_NaN();
            try {
                at_zero = u.eval(0.0);
            } catch (const Error&) {
            }
            if (!std::isfinite(at_zero)) {
                report.zero_value = ZeroValueStatus::not_finite;
            } else {
                report.value_at_zero = at_zero;
                report.zero_value = std::abs(at_zero) <= 1e-12 ? ZeroValueStatus::satisfied
                                                               : ZeroValueStatus::violated;
            }
            break;
        }
    }
    return report;
}

}  // namespace mvu
