#pragma once

#include <span>
#include <string>
#include <vector>

#include "mvu/closed_form.hpp"
#include "mvu/problem.hpp"

namespace mvu {

// A spliced strategy: constant controls (c, pi) on [t, t+h), the candidate
// strategy afterwards.
struct Perturbation {
    double t = 0.0;
    double x = 1.0;
    double c = 0.0;
    double pi = 0.0;
    double h = 0.1;
};

// First and second conditional moments of the wealth SDE under constant
// controls over [t, t+h], from (x, x^2), by a 4th-order one-step method:
//   m1' = k m1 + (l(s) - c),   m2' = (2k + pi^2 sigma^2) m2 + 2 (l(s) - c) m1,
// with k = r + pi (mu - r).
std::pair<double, double> propagate_moments(const ProblemSpec& spec, double t, double x,
                                            double c, double pi, double h, int substeps = 256);

// Continuation data for a candidate strategy whose consumption and dollar
// position are deterministic in time:
//   y(t, x) = a(t) x + yb(t),   z(t, x) = zvar(t) + (a(t) x + yb(t))^2,
//   w(t)    = q(t),
// with a(t) = e^{(r-delta)(T-t)}. For the equilibrium candidate these come
// straight from the coefficient table; for a corrupted candidate they are
// rebuilt by quadrature of the moment integrals.
class ContinuationTable {
public:
    static ContinuationTable from_coefficients(const CoefficientTable& coeffs);
    // Candidate = equilibrium consumption with the dollar position scaled by
    // `dollar_scale` (the falsification control uses 2).
    static ContinuationTable scaled_dollar(const ProblemSpec& spec, double dollar_scale, int n);

    const ProblemSpec& spec() const { return spec_; }
    double a(double t) const;
    double yb(double t) const;
    double zvar(double t) const;
    double q(double t) const;
    double dollar_scale() const { return dollar_scale_; }

    // The candidate's own objective value f(y, z, w) at (t, x).
    double value(double t, double x) const;

private:
    ContinuationTable(ProblemSpec spec, double scale, std::vector<double> yb,
                      std::vector<double> zvar, std::vector<double> q);
    double interpolate(const std::vector<double>& v, double t) const;

    ProblemSpec spec_;
    double dollar_scale_ = 1.0;
    double step_ = 0.0;
    std::vector<double> yb_, zvar_, q_;
};

// Objective of the spliced strategy: moment propagation across the window,
// affine/quadratic continuation at t+h, exact window utility integral.
double perturbed_objective(const ProblemSpec& spec, const ContinuationTable& cont,
                           const Perturbation& pert);
double perturbed_objective(const ProblemSpec& spec, const CoefficientTable& coeffs,
                           const Perturbation& pert);

// gap = [candidate value at (t, x) - perturbed objective] / h.
double equilibrium_gap(const ProblemSpec& spec, const ContinuationTable& cont,
                       const Perturbation& pert);
double equilibrium_gap(const ProblemSpec& spec, const CoefficientTable& coeffs,
                       const Perturbation& pert);

struct AuditEntry {
    double t, x, c, pi, h, gap;
    bool trivial;  // (c, pi) equal to the candidate's own controls
};

struct AuditReport {
    std::vector<AuditEntry> entries;
    double min_gap = 0.0;
    AuditEntry min_entry{};
    double tol = 1e-6;
    bool pass = true;
    std::string note;
};

// Sweeps every (t, x, c-factor, pi-offset, h) splice and verifies
// gap >= -tol. Deviations are parametrised around the candidate's own
// controls: c = factor * c_cand(t) (clamped at >= 0), pi = pi_cand(t,x) +
// offset. A finite sweep can only falsify, not prove; the note says so.
AuditReport audit_report(const ProblemSpec& spec, const ContinuationTable& cont,
                         std::span<const double> t_list, std::span<const double> x_list,
                         std::span<const double> c_factors, std::span<const double> pi_offsets,
                         std::span<const double> h_list, double tol = 1e-6);
AuditReport audit_report(const ProblemSpec& spec, const CoefficientTable& coeffs,
                         std::span<const double> t_list, std::span<const double> x_list,
                         std::span<const double> c_factors, std::span<const double> pi_offsets,
                         std::span<const double> h_list, double tol = 1e-6);

}  // namespace mvu
