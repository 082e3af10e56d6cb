#include "mvu/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mvu/closed_form.hpp"
#include "mvu/equilibrium_audit.hpp"
#include "mvu/verifier.hpp"

namespace mvu {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kArtifactVersion = "1.0.0";

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string utility_kind(const UtilityModel& u) {
    switch (u.family()) {
        case UtilityFamily::log: return "log";
        case UtilityFamily::power: return "power";
        case UtilityFamily::exponential: return "exp";
        case UtilityFamily::custom: return "custom";
    }
    return "?";
}

json parameters_json(const RunConfig& config) {
    const ProblemSpec& spec = config.spec;
    json j;
    j["market"] = {{"r", spec.market.r}, {"mu", spec.market.mu}, {"sigma", spec.market.sigma}};
    j["prefs"] = {{"gamma", spec.prefs.gamma},
                  {"beta", spec.prefs.beta},
                  {"rho", spec.prefs.rho},
                  {"delta", spec.prefs.delta}};
    j["horizon"] = {{"T", spec.horizon}};
    j["init"] = {{"x0", spec.x0}};
    json segments = json::array();
    for (const auto& s : spec.income.segments()) {
        segments.push_back({{"start", s.start}, {"rate", s.rate}});
    }
    j["income"] = {{"segments", segments}};
    j["utility"] = {{"kind", utility_kind(spec.utility)}};
    if (spec.utility.family() == UtilityFamily::power) j["utility"]["theta"] = spec.utility.theta();
    if (spec.utility.family() == UtilityFamily::exponential) j["utility"]["eta"] = spec.utility.eta();
    j["mode"] = {{"consumption",
                  spec.consumption_mode == ConsumptionMode::paper_literal ? "paper" : "foc"},
                 {"clamp", spec.clamp_consumption}};
    j["grid"] = {{"n", config.settings.grid_n}};
    j["mc"] = {{"paths", config.settings.mc_paths},
               {"dt", config.settings.mc_dt},
               {"seed", config.settings.mc_seed},
               {"antithetic", config.settings.mc_antithetic}};
    return j;
}

// The manifest carries the run's resolved parameters, any warnings, verdicts
// from the command, and a content hash per emitted file. The hash of the
// manifest body (timestamp excluded) identifies the run.
void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    const RunConfig& config, const json& checks,
                    const std::vector<std::pair<std::string, std::string>>& outputs) {
    json j;
    j["artifact"] = "mvu";
    j["version"] = kArtifactVersion;
    j["command"] = command;
    j["parameters"] = parameters_json(config);
    j["warnings"] = config.warnings;
    j["checks"] = checks;
    json out = json::object();
    for (const auto& [name, hash] : outputs) out[name] = {{"content_hash", hash}};
    j["outputs"] = out;
    j["manifest_content_hash"] = content_hash(j.dump());
    j["timestamp"] = utc_timestamp();
    write_file(out_dir / "manifest.json", j.dump(2) + "\n");
}

void emit_csv(const std::filesystem::path& out_dir, const std::string& name,
              const std::string& header, const std::vector<std::vector<double>>& rows,
              std::vector<std::pair<std::string, std::string>>& outputs) {
    std::string text = header + "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) text += ',';
            text += format_number(row[i]);
        }
        text += '\n';
    }
    write_file(out_dir / name, text);
    outputs.emplace_back(name, content_hash(text));
}

void ensure_out_dir(const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());
}

json check_entry(const ResidualCheck& c) {
    json j;
    j["name"] = c.name;
    j["grid"] = c.grid;
    j["max_abs_residual"] = c.max_abs;
    j["location"] = c.location;
    j["threshold"] = c.threshold;
    j["verdict"] = c.pass ? "pass" : "fail";
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string content_hash(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<FigurePanel> figure_curves(const RunConfig& config, int fig,
                                       const std::optional<std::vector<double>>& sweep) {
    const int n = config.settings.grid_n;
    std::vector<double> t_grid(n + 1);
    const double h = config.spec.horizon / n;
    for (int i = 0; i <= n; ++i) t_grid[i] = h * i;

    auto curve_for = [&](const ProblemSpec& spec) {
        std::vector<double> c(t_grid.size());
        for (std::size_t i = 0; i < t_grid.size(); ++i) c[i] = consumption_star(spec, t_grid[i]);
        return c;
    };
    auto label = [](const std::string& name, double v) {
        std::ostringstream os;
        os << name << "_" << v;
        return os.str();
    };

    std::vector<FigurePanel> panels;
    switch (fig) {
        case 1: {
            FigurePanel panel{"figure1", t_grid, {}};
            const std::vector<double> betas = sweep.value_or(std::vector<double>{0.5, 1.0, 2.0});
            for (double beta : betas) {
                ProblemSpec s = config.spec;
                s.utility = UtilityModel::log_utility();
                s.prefs.beta = beta;
                panel.curves.emplace_back(label("c_star_beta", beta), curve_for(s));
            }
            panels.push_back(std::move(panel));
            break;
        }
        case 2: {
            // --sweep overrides the left panel's beta set; the parameter
            // sweep on the right keeps its documented default.
            FigurePanel left{"figure2_left", t_grid, {}};
            const std::vector<double> betas = sweep.value_or(std::vector<double>{0.5, 1.0, 2.0});
            for (double beta : betas) {
                ProblemSpec s = config.spec;
                s.utility = UtilityModel::power_utility(0.1);
                s.prefs.beta = beta;
                left.curves.emplace_back(label("c_star_beta", beta), curve_for(s));
            }
            FigurePanel right{"figure2_right", t_grid, {}};
            const std::vector<double> thetas{0.1, 0.3, 0.5, 0.7};
            for (double theta : thetas) {
                ProblemSpec s = config.spec;
                s.utility = UtilityModel::power_utility(theta);
                s.prefs.beta = 1.0;
                right.curves.emplace_back(label("c_star_theta", theta), curve_for(s));
            }
            panels.push_back(std::move(left));
            panels.push_back(std::move(right));
            break;
        }
        case 3: {
            FigurePanel left{"figure3_left", t_grid, {}};
            const std::vector<double> betas = sweep.value_or(std::vector<double>{5.0, 10.0, 20.0});
            for (double beta : betas) {
                ProblemSpec s = config.spec;
                s.utility = UtilityModel::exponential_utility(3.0);
                s.prefs.beta = beta;
                left.curves.emplace_back(label("c_star_beta", beta), curve_for(s));
            }
            FigurePanel right{"figure3_right", t_grid, {}};
            const std::vector<double> etas{1.0, 3.0, 5.0};
            for (double eta : etas) {
                ProblemSpec s = config.spec;
                s.utility = UtilityModel::exponential_utility(eta);
                s.prefs.beta = 10.0;
                right.curves.emplace_back(label("c_star_eta", eta), curve_for(s));
            }
            panels.push_back(std::move(left));
            panels.push_back(std::move(right));
            break;
        }
        case 4: {
            FigurePanel panel{"figure4", t_grid, {}};
            {
                ProblemSpec s = config.spec;
                s.utility = UtilityModel::power_utility(0.5);
                s.prefs.beta = 1.0;
                panel.curves.emplace_back("c_star_power_theta_0.5_beta_1", curve_for(s));
            }
            {
                ProblemSpec s = config.spec;
                s.utility = UtilityModel::exponential_utility(1.0);
                s.prefs.beta = 10.0;
                panel.curves.emplace_back("c_star_exp_eta_1_beta_10", curve_for(s));
            }
            panels.push_back(std::move(panel));
            break;
        }
        default:
            throw InvalidParameter("fig", fig, "figure index in {1, 2, 3, 4}");
    }
    return panels;
}

int cmd_solve(const RunConfig& config, const std::filesystem::path& out_dir) {
    ensure_out_dir(out_dir);
    const ProblemSpec& spec = config.spec;
    const CoefficientTable coeffs = build_coefficients(spec, config.settings.grid_n);

    std::vector<std::vector<double>> rows;
    rows.reserve(config.settings.grid_n + 1);
    for (int i = 0; i <= config.settings.grid_n; ++i) {
        const double t = coeffs.node_time(i);
        const double c = consumption_star(spec, t);
        const double dollar = dollar_star(spec, t);
        rows.push_back({t, c, dollar / spec.x0, dollar, coeffs.A(t), coeffs.a(t),
                        coeffs.b_node(i), coeffs.B_node(i), coeffs.q_node(i),
                        value_function(coeffs, t, spec.x0), terminal_mean(coeffs, t, spec.x0),
                        terminal_variance(coeffs, t, spec.x0)});
    }

    std::vector<std::pair<std::string, std::string>> outputs;
    emit_csv(out_dir, "strategy.csv",
             "t,c_star,pi_star_at_x0,dollar_amount,A,a,b,B,q,V_at_x0,mean,variance", rows,
             outputs);

    RunConfig annotated = config;
    for (const auto& note : coeffs.notes()) annotated.warnings.push_back(note);
    json checks;
    checks["rows"] = rows.size();
    write_manifest(out_dir, "solve", annotated, checks, outputs);
    return kExitOk;
}

int cmd_figures(const RunConfig& config, int fig, const std::optional<std::vector<double>>& sweep,
                const std::filesystem::path& out_dir) {
    ensure_out_dir(out_dir);
    const auto panels = figure_curves(config, fig, sweep);

    std::vector<std::pair<std::string, std::string>> outputs;
    json checks;
    for (const auto& panel : panels) {
        std::string header = "t";
        for (const auto& [name, _] : panel.curves) header += "," + name;
        std::vector<std::vector<double>> rows(panel.t.size());
        for (std::size_t i = 0; i < panel.t.size(); ++i) {
            rows[i].push_back(panel.t[i]);
            for (const auto& [_, values] : panel.curves) rows[i].push_back(values[i]);
        }
        emit_csv(out_dir, panel.file_stem + ".csv", header, rows, outputs);
    }

    if (fig == 4) {
        // Continuity certificate in place of the external comparison curve:
        // adjacent-point jumps of a continuous c*(t) shrink with the grid
        // step, while a genuine discontinuity would not.
        const double dt = config.spec.horizon / config.settings.grid_n;
        double max_jump = 0.0, max_rate = 0.0;
        for (const auto& panel : panels) {
            for (const auto& [_, values] : panel.curves) {
                double peak = 0.0;
                for (double v : values) peak = std::max(peak, std::abs(v));
                for (std::size_t i = 0; i + 1 < values.size(); ++i) {
                    max_jump = std::max(max_jump, std::abs(values[i + 1] - values[i]));
                }
                max_rate = std::max(
                    max_rate, 5.0 * (config.spec.market.r + config.spec.prefs.rho + 1.0 /
                                     config.spec.horizon) * (peak + 1.0));
            }
        }
        const double threshold = max_rate * dt;
        checks["continuity_certificate"] = {{"max_adjacent_jump", max_jump},
                                            {"threshold", threshold},
                                            {"verdict", max_jump <= threshold ? "pass" : "fail"}};
        if (max_jump > threshold) {
            write_manifest(out_dir, "figures", config, checks, outputs);
            return kExitNumeric;
        }
    }
    write_manifest(out_dir, "figures", config, checks, outputs);
    return kExitOk;
}

int cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir,
                 const std::optional<Policy>& override_policy) {
    ensure_out_dir(out_dir);
    const ProblemSpec& spec = config.spec;
    const CoefficientTable coeffs = build_coefficients(spec, config.settings.grid_n);

    Policy policy = override_policy ? *override_policy : equilibrium_policy(spec);

    SimConfig sim;
    sim.n_paths = config.settings.mc_paths;
    sim.dt = config.settings.mc_dt;
    sim.seed = config.settings.mc_seed;
    sim.antithetic = config.settings.mc_antithetic;

    const EstimateTriple est = simulate_estimates(spec, policy, sim);
    const auto [var_hat, var_se] = variance_estimate(est);
    const auto [obj_hat, obj_se] = objective_from_triple(est, spec.prefs);

    const double y_cf = terminal_mean(coeffs, 0.0, spec.x0);
    const double var_cf = terminal_variance(coeffs, 0.0, spec.x0);
    const double z_cf = terminal_second_moment(coeffs, 0.0, spec.x0);
    const double w_cf = accumulated_utility(coeffs, 0.0);
    const double v_cf = value_function(coeffs, 0.0, spec.x0);

    auto z_score = [](double est_v, double cf, double se) {
        return se > 0.0 ? (est_v - cf) / se : (est_v == cf ? 0.0 : INFINITY);
    };
    const double zy = z_score(est.y_hat, y_cf, est.se_y);
    const double zvar = z_score(var_hat, var_cf, var_se);
    const double w_err = std::abs(est.w_hat - w_cf);
    const double w_tol = std::max(3.0 * est.se_w, 1e-3);
    const double zobj = z_score(obj_hat, v_cf, obj_se);

    const bool pass = std::abs(zy) <= 3.0 && std::abs(zvar) <= 3.0 && w_err <= w_tol &&
                      std::abs(zobj) <= 3.0;

    json j;
    j["estimates"] = {{"y_hat", est.y_hat},   {"z_hat", est.z_hat},   {"w_hat", est.w_hat},
                      {"se_y", est.se_y},     {"se_z", est.se_z},     {"se_w", est.se_w},
                      {"n_paths", est.n_paths}, {"n_units", est.n_units}};
    j["variance"] = {{"estimate", var_hat}, {"se", var_se}};
    j["objective"] = {{"estimate", obj_hat}, {"se", obj_se}};
    j["closed_form"] = {{"mean", y_cf},
                        {"second_moment", z_cf},
                        {"variance", var_cf},
                        {"accumulated_utility", w_cf},
                        {"value", v_cf}};
    j["z_scores"] = {{"mean", zy}, {"variance", zvar}, {"objective", zobj}};
    j["w_abs_error"] = w_err;
    j["w_tolerance"] = w_tol;
    j["dollar_l2_hat"] = est.dollar_l2_hat;
    j["verdict"] = pass ? "pass" : "fail";

    write_file(out_dir / "mc_report.json", j.dump(2) + "\n");
    std::vector<std::pair<std::string, std::string>> outputs;
    outputs.emplace_back("mc_report.json", content_hash(j.dump(2) + "\n"));
    write_manifest(out_dir, "simulate", config, json{{"verdict", j["verdict"]}}, outputs);
    return pass ? kExitOk : kExitNumeric;
}

int cmd_equilibrium(const RunConfig& config, const std::filesystem::path& out_dir, bool falsify) {
    ensure_out_dir(out_dir);
    const std::vector<double> t_list{0.0, 2.0, 4.0, 6.0, 8.0};
    const std::vector<double> x_list{0.5, 1.0, 2.0};
    const std::vector<double> c_factors{0.5, 1.0, 1.5};
    const std::vector<double> pi_offsets{-1.0, 0.0, 1.0};
    const std::vector<double> h_list{0.2, 0.1, 0.05, 0.01};

    auto run_mode = [&](ConsumptionMode mode) {
        ProblemSpec spec = config.spec;
        spec.consumption_mode = mode;
        if (falsify) {
            const ContinuationTable cont =
                ContinuationTable::scaled_dollar(spec, 2.0, config.settings.grid_n);
            return audit_report(spec, cont, t_list, x_list, c_factors, pi_offsets, h_list);
        }
        const CoefficientTable coeffs = build_coefficients(spec, config.settings.grid_n);
        return audit_report(spec, coeffs, t_list, x_list, c_factors, pi_offsets, h_list);
    };

    const AuditReport paper = run_mode(ConsumptionMode::paper_literal);
    const AuditReport foc = run_mode(ConsumptionMode::foc_derived);
    const AuditReport& configured =
        config.spec.consumption_mode == ConsumptionMode::paper_literal ? paper : foc;

    auto mode_json = [](const AuditReport& r) {
        json j;
        j["min_gap"] = r.min_gap;
        j["min_gap_at"] = {{"t", r.min_entry.t}, {"x", r.min_entry.x}, {"c", r.min_entry.c},
                           {"pi", r.min_entry.pi}, {"h", r.min_entry.h}};
        j["entries"] = r.entries.size();
        j["tolerance"] = r.tol;
        j["verdict"] = r.pass ? "pass" : "fail";
        j["note"] = r.note;
        return j;
    };

    json j;
    j["falsify"] = falsify;
    j["modes"] = {{"paper", mode_json(paper)}, {"foc", mode_json(foc)}};
    j["min_gap"] = configured.min_gap;
    j["verdict"] = configured.pass ? "pass" : "fail";

    write_file(out_dir / "equilibrium_report.json", j.dump(2) + "\n");
    std::vector<std::pair<std::string, std::string>> outputs;
    outputs.emplace_back("equilibrium_report.json", content_hash(j.dump(2) + "\n"));
    write_manifest(out_dir, "equilibrium", config, json{{"verdict", j["verdict"]}}, outputs);
    return configured.pass ? kExitOk : kExitNumeric;
}

int cmd_verify(const RunConfig& config, const std::filesystem::path& out_dir) {
    ensure_out_dir(out_dir);
    const ProblemSpec& spec = config.spec;
    const CoefficientTable coeffs = build_coefficients(spec, config.settings.grid_n);

    json j;
    bool all_pass = true;
    bool has_notes = false;

    {
        const ResidualReport ode = ode_residuals(coeffs);
        json checks = json::array();
        for (const auto& c : ode.checks) checks.push_back(check_entry(c));
        j["ode_residuals"] = {{"checks", checks},
                              {"max_residual", ode.max_residual()},
                              {"verdict", ode.pass ? "pass" : "fail"}};
        all_pass = all_pass && ode.pass;
    }
    {
        json foc_all = json::array();
        for (double t : {0.0, spec.horizon / 2.0}) {
            for (double x : {spec.x0 / 2.0, spec.x0, 2.0 * spec.x0}) {
                const ResidualReport rep = foc_residuals(spec, coeffs, t, x);
                json entry;
                entry["t"] = t;
                entry["x"] = x;
                json checks = json::array();
                for (const auto& c : rep.checks) checks.push_back(check_entry(c));
                entry["checks"] = checks;
                entry["verdict"] = rep.pass ? "pass" : "fail";
                if (!rep.note.empty()) {
                    entry["note"] = rep.note;
                    has_notes = true;
                }
                foc_all.push_back(entry);
                all_pass = all_pass && rep.pass;
            }
        }
        j["foc_residuals"] = foc_all;
    }
    {
        json hjb_all = json::array();
        const std::vector<std::pair<double, double>> points{
            {0.0, spec.x0}, {spec.horizon / 2.0, spec.x0 / 2.0}, {0.8 * spec.horizon, 2.0 * spec.x0}};
        for (const auto& [t, x] : points) {
            const double c_star = consumption_star(spec, t);
            const double pi_star = investment_star(spec, t, x);
            std::vector<double> grid_c(101), grid_pi(101);
            for (int i = 0; i < 101; ++i) {
                grid_c[i] = c_star * (0.5 + i * 0.01);
                grid_pi[i] = pi_star * (0.5 + i * 0.01);
            }
            ArgminResult arg;
            const ResidualReport rep = hjb_argmin_check(spec, coeffs, t, x, grid_c, grid_pi, &arg);
            json entry;
            entry["t"] = t;
            entry["x"] = x;
            entry["orientation"] = arg.orientation;
            json checks = json::array();
            for (const auto& c : rep.checks) checks.push_back(check_entry(c));
            entry["checks"] = checks;
            entry["verdict"] = rep.pass ? "pass" : "fail";
            if (rep.note.find("mode discrepancy") != std::string::npos) {
                entry["note"] = rep.note;
                has_notes = true;
            }
            hjb_all.push_back(entry);
            all_pass = all_pass && rep.pass;
        }
        j["hjb_argmin"] = hjb_all;
    }
    {
        FDGrid grid;
        const FDResult fd = fd_solve_pdes(spec, coeffs, grid);
        json checks = json::array();
        for (const auto& c : fd.report.checks) checks.push_back(check_entry(c));
        j["fd_pdes"] = {{"checks", checks},
                        {"err_Y", fd.err_Y},
                        {"err_Z", fd.err_Z},
                        {"err_W", fd.err_W},
                        {"refinement_ratio", fd.refinement_ratio},
                        {"verdict", fd.report.pass ? "pass" : "fail"}};
        all_pass = all_pass && fd.report.pass;
    }

    j["verdict"] = all_pass ? (has_notes ? "pass-with-notes" : "pass") : "fail";
    write_file(out_dir / "verify_report.json", j.dump(2) + "\n");
    std::vector<std::pair<std::string, std::string>> outputs;
    outputs.emplace_back("verify_report.json", content_hash(j.dump(2) + "\n"));
    write_manifest(out_dir, "verify", config, json{{"verdict", j["verdict"]}}, outputs);
    return all_pass ? kExitOk : kExitNumeric;
}

int cmd_sensitivity(const RunConfig& config, const std::optional<std::vector<double>>& sweep,
                    const std::filesystem::path& out_dir) {
    ensure_out_dir(out_dir);
    const ProblemSpec& spec = config.spec;
    if (spec.utility.family() != UtilityFamily::log) {
        throw UtilityMismatch("sensitivity requires the logarithmic utility");
    }
    std::vector<double> betas;
    if (sweep) {
        betas = *sweep;
    } else {
        for (double b = 0.5; b <= 2.0 + 1e-12; b += 0.25) betas.push_back(b);
    }

    std::vector<std::vector<double>> rows;
    for (double beta : betas) {
        ProblemSpec s = spec;
        s.prefs.beta = beta;
        const CoefficientTable coeffs = build_coefficients(s, config.settings.grid_n);
        const BetaSensitivity sens = sensitivity_beta(s, coeffs, 0.0, spec.x0);
        const double v = value_function(coeffs, 0.0, spec.x0);
        rows.push_back({beta, v, sens.dV_fd, sens.d2V_fd, sens.M_paper, sens.dV_paper,
                        sens.dV_paper - sens.dV_fd});
    }
    std::vector<std::pair<std::string, std::string>> outputs;
    emit_csv(out_dir, "sensitivity.csv", "beta,V,dV_fd,d2V_fd,M_paper,dV_paper,discrepancy", rows,
             outputs);
    json checks;
    checks["rows"] = rows.size();
    write_manifest(out_dir, "sensitivity", config, checks, outputs);
    return kExitOk;
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const UtilityMismatch& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidParameter& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return kExitConfig;
    } catch (const GridTooCoarse& e) {
        std::cerr << "numerical check failed: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace mvu
