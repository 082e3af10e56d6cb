#include "mvu/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

namespace mvu {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

}  // namespace

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t stream) {
    state_ = mix64(seed + kGolden * (2 * stream + 1));
}

std::uint64_t NormalStream::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 in (0, 1] keeps the log finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

namespace {

struct UnitObservation {
    double y, z, w, dollar_l2;
};

struct PathFailure {
    long path;
    long step;
};

// Deterministic pairwise sum over [lo, hi) of proj(values[i]).
template <typename Proj>
double pairwise_sum(const std::vector<UnitObservation>& values, std::size_t lo, std::size_t hi,
                    Proj proj) {
    const std::size_t count = hi - lo;
    if (count <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += proj(values[i]);
        return s;
    }
    const std::size_t mid = lo + count / 2;
    return pairwise_sum(values, lo, mid, proj) + pairwise_sum(values, mid, hi, proj);
}

}  // namespace

EstimateTriple simulate_estimates(const ProblemSpec& spec, const Policy& policy,
                                  const SimConfig& cfg) {
    const double T = spec.horizon;
    const double t0 = cfg.start_time;
    const double x_start = cfg.start_wealth < 0.0 ? spec.x0 : cfg.start_wealth;
    const double span = T - t0;

    if (cfg.n_paths < 2) throw InvalidParameter("mc.paths", double(cfg.n_paths), "n_paths >= 2");
    if (cfg.antithetic && cfg.n_paths % 2 != 0) {
        throw InvalidParameter("mc.paths", double(cfg.n_paths), "even path count when antithetic");
    }
    if (!(cfg.dt > 0.0) || cfg.dt > span / 10.0) {
        throw InvalidParameter("mc.dt", cfg.dt, "0 < dt <= (T - t)/10");
    }

    const long n_steps = std::max<long>(1, std::llround(span / cfg.dt));
    const double dt = span / static_cast<double>(n_steps);
    const double sqrt_dt = std::sqrt(dt);

    const auto& mkt = spec.market;
    const auto& prefs = spec.prefs;
    const double excess = mkt.mu - mkt.r;
    const double disc_T = std::exp(-prefs.delta * span);
    const bool has_utility = prefs.beta > 0.0;

    // Consumption is a function of time only; hoist the per-step rates and
    // discounted utility increments out of the path loop.
    std::vector<double> c_at(n_steps), l_minus_c(n_steps), util_inc(n_steps), t_at(n_steps);
    for (long k = 0; k < n_steps; ++k) {
        const double t = t0 + dt * static_cast<double>(k);
        t_at[k] = t;
        const double c = policy.consumption(t);
        c_at[k] = c;
        l_minus_c[k] = spec.income.rate_at(t) - c;
        util_inc[k] =
            has_utility ? std::exp(-prefs.rho * t) * spec.utility.eval(c) * dt : 0.0;
    }

    const long n_units = cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths;
    std::vector<UnitObservation> paths(static_cast<std::size_t>(cfg.n_paths));

    std::atomic<long> failed_path{-1};
    std::atomic<long> failed_step{0};

    auto run_range = [&](long unit_lo, long unit_hi) {
        for (long u = unit_lo; u < unit_hi; ++u) {
            NormalStream rng(cfg.seed, static_cast<std::uint64_t>(u));
            const int legs = cfg.antithetic ? 2 : 1;
            // Antithetic legs share draws with opposite signs; draws are
            // regenerated per leg from the same unit stream.
            for (int leg = 0; leg < legs; ++leg) {
                NormalStream leg_rng = rng;
                const double sign = (leg == 0) ? 1.0 : -1.0;
                double x = x_start;
                double w_path = 0.0;
                double l2_path = 0.0;
                for (long k = 0; k < n_steps; ++k) {
                    const double dollar = policy.dollar(t_at[k], x);
                    const double drift = mkt.r * x + dollar * excess + l_minus_c[k];
                    const double xi = sign * leg_rng.next();
                    x += drift * dt + mkt.sigma * dollar * sqrt_dt * xi;
                    w_path += util_inc[k];
                    l2_path += dollar * dollar * dt;
                    if (!std::isfinite(x)) {
                        long expect = -1;
                        const long path_index = cfg.antithetic ? 2 * u + leg : u;
                        failed_path.compare_exchange_strong(expect, path_index);
                        failed_step.store(k);
                        return;
                    }
                }
                const double xd = disc_T * x;
                const long path_index = cfg.antithetic ? 2 * u + leg : u;
                paths[static_cast<std::size_t>(path_index)] = {xd, xd * xd, w_path, l2_path};
            }
        }
    };

    int threads = cfg.n_threads > 0 ? cfg.n_threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, 64);
    if (threads == 1 || n_units < 256) {
        run_range(0, n_units);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (n_units + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const long lo = w * chunk;
            const long hi = std::min<long>(n_units, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    if (failed_path.load() >= 0) throw NonFinitePath(failed_path.load(), failed_step.load());

    // Single-threaded pairwise reduction in path order: the estimate does not
    // depend on how the paths were computed above.
    const auto n = static_cast<std::size_t>(cfg.n_paths);
    const double inv_n = 1.0 / static_cast<double>(cfg.n_paths);
    EstimateTriple est;
    est.n_paths = cfg.n_paths;
    est.n_units = n_units;
    est.y_hat = pairwise_sum(paths, 0, n, [](const UnitObservation& o) { return o.y; }) * inv_n;
    est.z_hat = pairwise_sum(paths, 0, n, [](const UnitObservation& o) { return o.z; }) * inv_n;
    est.w_hat = pairwise_sum(paths, 0, n, [](const UnitObservation& o) { return o.w; }) * inv_n;
    est.dollar_l2_hat =
        pairwise_sum(paths, 0, n, [](const UnitObservation& o) { return o.dollar_l2; }) * inv_n;

    // A constant sample column has zero sample deviation by definition; skip
    // the shifted-moment arithmetic that would otherwise leave roundoff dust.
    bool const_y = true, const_z = true, const_w = true;
    for (const auto& o : paths) {
        const_y = const_y && o.y == paths[0].y;
        const_z = const_z && o.z == paths[0].z;
        const_w = const_w && o.w == paths[0].w;
    }

    const double my = est.y_hat, mz = est.z_hat, mw = est.w_hat;
    const double denom = cfg.n_paths > 1 ? static_cast<double>(cfg.n_paths - 1) : 1.0;
    est.var_y = const_y ? 0.0
                        : pairwise_sum(paths, 0, n, [&](const UnitObservation& o) {
                              return (o.y - my) * (o.y - my);
                          }) / denom;
    est.var_z = const_z ? 0.0
                        : pairwise_sum(paths, 0, n, [&](const UnitObservation& o) {
                              return (o.z - mz) * (o.z - mz);
                          }) / denom;
    est.var_w = const_w ? 0.0
                        : pairwise_sum(paths, 0, n, [&](const UnitObservation& o) {
                              return (o.w - mw) * (o.w - mw);
                          }) / denom;
    est.cov_yz = (const_y || const_z) ? 0.0
                                      : pairwise_sum(paths, 0, n, [&](const UnitObservation& o) {
                                            return (o.y - my) * (o.z - mz);
                                        }) / denom;
    est.cov_yw = (const_y || const_w) ? 0.0
                                      : pairwise_sum(paths, 0, n, [&](const UnitObservation& o) {
                                            return (o.y - my) * (o.w - mw);
                                        }) / denom;
    est.cov_zw = (const_z || const_w) ? 0.0
                                      : pairwise_sum(paths, 0, n, [&](const UnitObservation& o) {
                                            return (o.z - mz) * (o.w - mw);
                                        }) / denom;
    est.se_y = std::sqrt(est.var_y * inv_n);
    est.se_z = std::sqrt(est.var_z * inv_n);
    est.se_w = std::sqrt(est.var_w * inv_n);

    if (!cfg.antithetic) {
        est.estimator_se_y = est.se_y;
        est.estimator_se_z = est.se_z;
        est.estimator_se_w = est.se_w;
    } else {
        // Pair means are the iid units of the antithetic estimator.
        std::vector<UnitObservation> pairs(static_cast<std::size_t>(n_units));
        for (long j = 0; j < n_units; ++j) {
            const auto& a = paths[static_cast<std::size_t>(2 * j)];
            const auto& b = paths[static_cast<std::size_t>(2 * j + 1)];
            pairs[static_cast<std::size_t>(j)] = {0.5 * (a.y + b.y), 0.5 * (a.z + b.z),
                                                  0.5 * (a.w + b.w), 0.0};
        }
        const auto m = static_cast<std::size_t>(n_units);
        const double denom_p = n_units > 1 ? static_cast<double>(n_units - 1) : 1.0;
        const double inv_m = 1.0 / static_cast<double>(n_units);
        auto pair_se = [&](auto proj, double mean) {
            const double var = pairwise_sum(pairs, 0, m, [&](const UnitObservation& o) {
                                   const double d = proj(o) - mean;
                                   return d * d;
                               }) / denom_p;
            return std::sqrt(var * inv_m);
        };
        est.estimator_se_y =
            const_y ? 0.0 : pair_se([](const UnitObservation& o) { return o.y; }, my);
        est.estimator_se_z =
            const_z ? 0.0 : pair_se([](const UnitObservation& o) { return o.z; }, mz);
        est.estimator_se_w =
            const_w ? 0.0 : pair_se([](const UnitObservation& o) { return o.w; }, mw);
    }
    return est;
}

std::pair<double, double> variance_estimate(const EstimateTriple& est) {
    const double value = est.z_hat - est.y_hat * est.y_hat;
    // Delta method for g(y, z) = z - y^2: grad = (-2y, 1).
    const double gy = -2.0 * est.y_hat;
    const double var =
        (gy * gy * est.var_y + est.var_z + 2.0 * gy * est.cov_yz) / static_cast<double>(est.n_paths);
    return {value, std::sqrt(std::max(var, 0.0))};
}

std::pair<double, double> objective_from_triple(const EstimateTriple& est,
                                                const Preferences& prefs) {
    const double value = objective_of_triple(est.y_hat, est.z_hat, est.w_hat, prefs);
    // grad f = (1 + gamma y, -gamma/2, beta).
    const double gy = 1.0 + prefs.gamma * est.y_hat;
    const double gz = -0.5 * prefs.gamma;
    const double gw = prefs.beta;
    const double var = (gy * gy * est.var_y + gz * gz * est.var_z + gw * gw * est.var_w +
                        2.0 * gy * gz * est.cov_yz + 2.0 * gy * gw * est.cov_yw +
                        2.0 * gz * gw * est.cov_zw) /
                       static_cast<double>(est.n_paths);
    return {value, std::sqrt(std::max(var, 0.0))};
}

std::pair<double, double> estimate_objective(const ProblemSpec& spec, const Policy& policy,
                                             const SimConfig& cfg) {
    return objective_from_triple(simulate_estimates(spec, policy, cfg), spec.prefs);
}

}  // namespace mvu
