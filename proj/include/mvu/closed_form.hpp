#pragma once

#include <string>
#include <vector>

#include "mvu/problem.hpp"

namespace mvu {

// Equilibrium consumption rate at time t. Mode paper_literal evaluates
// [U']^{-1}(beta^{-1} e^{r(T-t) - delta T}); mode foc_derived evaluates
// [U']^{-1}(beta^{-1} e^{rho t} A(t)) with A(t) = e^{(r-delta)(T-t)}. The two
// coincide when rho = delta = 0. beta = 0 is the degenerate classical
// mean-variance mode and returns 0. With clamp_consumption set, negative
// rates (possible under exponential utility) are clamped at 0.
double consumption_star(const ProblemSpec& spec, double t);

// True when the clamp actually fires somewhere on [0, T] (checked at both
// endpoints; the rate is monotone in t for all three analytic families).
bool consumption_clamp_active(const ProblemSpec& spec);

// Equilibrium investment fraction (1/gamma)((mu-r)/(x sigma^2)) e^{-(r-delta)(T-t)}.
// Independent of beta and of the utility family. Throws ZeroWealth at x = 0.
double investment_star(const ProblemSpec& spec, double t, double x);

// Dollar amount invested, investment_star(t,x)*x: independent of x.
double dollar_star(const ProblemSpec& spec, double t);

// The (c*, pi*) pair as a Policy (dollar_position set, so the policy is
// usable at any wealth including x <= 0 along simulated paths).
Policy equilibrium_policy(const ProblemSpec& spec);

// Coefficient functions of the affine/quadratic value ansatz tabulated on a
// uniform grid over [0, T]:
//   A(t) = a(t) = e^{(r-delta)(T-t)} (analytic),  p(t) = 0,
//   q(t) = int_t^T e^{-rho s} U(c*(s)) ds,
//   b, B from the backward coefficient ODE system
//     b' = delta b - kappa/gamma + (c* - l) a
//     B' = 2 delta B - delta b - kappa/(2 gamma) + (c* - l) a
//          - beta e^{-rho t} U(c*) - 2 delta beta q
//     q' = -e^{-rho t} U(c*)
// with kappa = (mu-r)^2/sigma^2 and terminal values b(T) = B(T) = q(T) = 0,
// integrated by a classical 4th-order one-step sweep. Cubic interpolation
// between nodes.
class CoefficientTable {
public:
    CoefficientTable(ProblemSpec spec, std::vector<double> b, std::vector<double> B,
                     std::vector<double> q);

    const ProblemSpec& spec() const { return spec_; }
    int grid_size() const { return static_cast<int>(b_.size()) - 1; }
    double horizon() const { return spec_.horizon; }
    double node_time(int i) const { return step_ * i; }
    double step() const { return step_; }

    double A(double t) const;  // analytic
    double a(double t) const;  // == A
    double b(double t) const;
    double B(double t) const;
    double p(double /*t*/) const { return 0.0; }
    double q(double t) const;

    double b_node(int i) const { return b_[i]; }
    double B_node(int i) const { return B_[i]; }
    double q_node(int i) const { return q_[i]; }

    // Corrupted copy for falsification controls.
    CoefficientTable shifted(double db, double dB, double dq) const;

    const std::vector<std::string>& notes() const { return notes_; }
    void add_note(std::string note) { notes_.push_back(std::move(note)); }

private:
    double interpolate(const std::vector<double>& values, double t) const;

    ProblemSpec spec_;
    double step_;
    std::vector<double> b_;
    std::vector<double> B_;
    std::vector<double> q_;
    std::vector<std::string> notes_;
};

// Backward sweep on n+1 nodes. Requires n >= 100 (GridTooCoarse otherwise).
CoefficientTable build_coefficients(const ProblemSpec& spec, int n);

// V(t, x) = e^{(r-delta)(T-t)} x + B(t).
double value_function(const CoefficientTable& coeffs, double t, double x);

// E[e^{-delta(T-t)} X(T) | X(t) = x] = e^{(r-delta)(T-t)} x + b(t).
double terminal_mean(const CoefficientTable& coeffs, double t, double x);

// Conditional variance of the discounted terminal wealth,
// (2/gamma){b - B + beta [p x + q]}; x-independent since p == 0.
double terminal_variance(const CoefficientTable& coeffs, double t, double x);

// Conditional second moment: variance + (a(t) x + b(t))^2.
double terminal_second_moment(const CoefficientTable& coeffs, double t, double x);

// q(t), the expected discounted accumulated utility of consumption on [t, T].
double accumulated_utility(const CoefficientTable& coeffs, double t);

struct BetaSensitivity {
    double dV_fd = 0.0;    // central finite difference of V over beta (authoritative)
    double d2V_fd = 0.0;
    double M_paper = 0.0;  // int_t^T e^{-rho s}[-r(T-s) + rho T] ds by quadrature
    double dV_paper = 0.0; // M(t) (1 + ln beta), diagnostic only
};

// Log utility only (UtilityMismatch otherwise). Finite-difference step is
// beta * 1e-4; the coefficient sweep is rebuilt per perturbed beta.
BetaSensitivity sensitivity_beta(const ProblemSpec& spec, const CoefficientTable& coeffs,
                                 double t, double x);

}  // namespace mvu
