#pragma once

#include <cstdint>
#include <utility>

#include "mvu/problem.hpp"

namespace mvu {

// Deterministic normal stream keyed by (seed, stream index). SplitMix64
// streams with Box-Muller on top, so path i's draws depend only on
// (seed, i) and never on scheduling.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream);
    double next();

private:
    std::uint64_t next_u64();
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct SimConfig {
    long n_paths = 200000;
    double dt = 0.005;
    std::uint64_t seed = 42;
    bool antithetic = true;
    double start_time = 0.0;
    double start_wealth = -1.0;  // < 0 means "use spec.x0"
    int n_threads = 0;           // 0 = hardware concurrency
};

// Monte Carlo estimates of the (y, z, w) functionals with standard errors.
//
// se_* follow the estimator contract sample-std/sqrt(n) over per-path
// observations. Under antithetic pairing that formula is conservative (the
// pair anticorrelation is ignored); the pair-level standard errors of the
// actual estimator are reported separately as estimator_se_*.
struct EstimateTriple {
    double y_hat = 0.0, z_hat = 0.0, w_hat = 0.0;
    double se_y = 0.0, se_z = 0.0, se_w = 0.0;
    long n_paths = 0;
    long n_units = 0;  // antithetic pairs, or paths when plain
    // Per-path sample covariances of (y, z, w), for delta-method propagation.
    double var_y = 0.0, var_z = 0.0, var_w = 0.0;
    double cov_yz = 0.0, cov_yw = 0.0, cov_zw = 0.0;
    // Standard errors of the antithetic estimator itself (pair means as the
    // iid unit); equal to se_* for plain sampling.
    double estimator_se_y = 0.0, estimator_se_z = 0.0, estimator_se_w = 0.0;
    // Mean of the per-path int pi^2 X^2 dt, an L2-admissibility proxy.
    double dollar_l2_hat = 0.0;
};

// Euler-Maruyama simulation of the wealth SDE under `policy`, estimating
//   y = E[e^{-delta(T-t)} X(T)], z = E[(e^{-delta(T-t)} X(T))^2],
//   w = E[int_t^T e^{-rho s} U(c(s)) ds]  (left-rectangle on the step grid).
// Results are bit-identical for fixed (seed, n_paths, dt) at any thread
// count. Throws NonFinitePath when a path leaves the finite range.
EstimateTriple simulate_estimates(const ProblemSpec& spec, const Policy& policy,
                                  const SimConfig& cfg);

// Variance estimate z_hat - y_hat^2 with a delta-method standard error.
std::pair<double, double> variance_estimate(const EstimateTriple& est);

// Objective estimate f(y_hat, z_hat, w_hat) with a delta-method standard error.
std::pair<double, double> estimate_objective(const ProblemSpec& spec, const Policy& policy,
                                             const SimConfig& cfg);
std::pair<double, double> objective_from_triple(const EstimateTriple& est,
                                                const Preferences& prefs);

}  // namespace mvu
