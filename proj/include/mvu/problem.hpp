#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mvu/errors.hpp"
#include "mvu/utility_model.hpp"

namespace mvu {

// Black-Scholes market: bank account at rate r, one stock with drift mu and
// volatility sigma. Requires r > 0, sigma > 0, mu > r.
struct MarketParams {
    double r = 0.01;
    double mu = 0.05;
    double sigma = 0.2;
};

// gamma: risk-aversion weight on the terminal-wealth variance.
// beta:  consumption preference (utility-to-wealth conversion); beta = 0 is
//        the degenerate classical mean-variance mode.
// rho:   utility discount rate. delta: wealth discount rate.
struct Preferences {
    double gamma = 1.0;
    double beta = 1.0;
    double rho = 0.0;
    double delta = 0.0;
};

struct IncomeSegment {
    double start = 0.0;
    double rate = 0.0;
};

// Piecewise-constant deterministic income rate l(t), right-continuous at
// breakpoints. Default-constructed schedule is l == 0.
class IncomeSchedule {
public:
    IncomeSchedule() = default;
    explicit IncomeSchedule(std::vector<IncomeSegment> segments);

    double rate_at(double t) const;  // lookup only, no horizon check
    const std::vector<IncomeSegment>& segments() const { return segments_; }
    bool is_zero() const { return segments_.empty(); }

private:
    std::vector<IncomeSegment> segments_;
};

// Lookup with horizon guard: throws OutOfHorizon for t < 0 or t > horizon.
double income_at(const IncomeSchedule& schedule, double t, double horizon);

enum class ConsumptionMode { paper_literal, foc_derived };

struct ProblemSpec {
    MarketParams market;
    Preferences prefs;
    double horizon = 10.0;  // T
    double x0 = 1.0;
    IncomeSchedule income;
    UtilityModel utility = UtilityModel::log_utility();
    ConsumptionMode consumption_mode = ConsumptionMode::paper_literal;
    bool clamp_consumption = false;
};

// Returns the spec unchanged when every type invariant holds; otherwise
// throws ValidationError carrying all violations together.
ProblemSpec validate_spec(const ProblemSpec& spec);

// A consumption rate c(t) plus an investment fraction pi(t, x). The dollar
// position pi(t,x)*x may be supplied directly; the equilibrium policy does,
// since its dollar amount does not depend on x.
struct Policy {
    std::function<double(double)> consumption;
    std::function<double(double, double)> investment;
    std::function<double(double, double)> dollar_position;

    double dollar(double t, double x) const {
        return dollar_position ? dollar_position(t, x) : investment(t, x) * x;
    }
};

// Wealth-SDE coefficients under controls (c, pi):
//   drift = (r + pi (mu - r)) x + l(t) - c,  diffusion = pi sigma x.
std::pair<double, double> drift_diffusion(const ProblemSpec& spec, double t, double x,
                                          double c, double pi);

// f(y, z, w) = y - (gamma/2)(z - y^2) + beta w. Throws NegativeVariance when
// z - y^2 is negative beyond numerical tolerance.
double objective_of_triple(double y, double z, double w, const Preferences& prefs);

}  // namespace mvu
