#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mvu/errors.hpp"

namespace mvu {

enum class UtilityFamily { log, power, exponential, custom };

// Hooks for a user-supplied concave increasing utility. `inverse_marginal`
// may be left empty, in which case a bracketing root-find on `marginal` is
// used instead.
struct CustomUtility {
    std::function<double(double)> eval;
    std::function<double(double)> marginal;
    std::function<double(double)> inverse_marginal;
};

// A utility function U together with its marginal U' and inverse marginal
// [U']^{-1}. Analytic forms for the log, power and exponential families;
// arbitrary concave increasing utilities via the custom hooks.
class UtilityModel {
public:
    static UtilityModel log_utility();
    static UtilityModel power_utility(double theta);        // theta < 1, theta != 0
    static UtilityModel exponential_utility(double eta);    // eta > 0
    static UtilityModel custom_utility(CustomUtility fns);

    UtilityFamily family() const { return family_; }
    double theta() const { return theta_; }
    double eta() const { return eta_; }

    // U(c). Throws DomainError for c <= 0 under log/power.
    double eval(double c) const;

    // U'(c), strictly positive on the domain.
    double marginal(double c) const;

    // [U']^{-1}(v) for v > 0. For the custom family without an analytic
    // inverse this bisects marginal(c) = v to relative tolerance 1e-12.
    double inverse_marginal(double v) const;

private:
    UtilityModel() = default;

    UtilityFamily family_ = UtilityFamily::log;
    double theta_ = 0.0;
    double eta_ = 0.0;
    CustomUtility custom_;
};

enum class ZeroValueStatus { satisfied, violated, not_finite };

struct AdmissibilityReport {
    bool increasing = false;
    bool concave = false;
    ZeroValueStatus zero_value = ZeroValueStatus::not_finite;
    double value_at_zero = 0.0;  // meaningful only when zero_value != not_finite
    std::vector<std::string> notes;
};

// Flags (never rejects) monotonicity, concavity and the U(0) = 0
// normalisation on a sampled grid of rates. Grid needs >= 3 points.
AdmissibilityReport admissibility_report(const UtilityModel& u, std::span<const double> grid);

}  // namespace mvu
