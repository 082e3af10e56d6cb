#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvu/closed_form.hpp"
#include "mvu/config.hpp"
#include "mvu/runner.hpp"

using namespace mvu;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("mvu_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> cells;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return static_cast<int>(i);
        }
        return -1;
    }
    double value(std::size_t row, const std::string& name) const {
        return std::stod(cells[row][static_cast<std::size_t>(column(name))]);
    }
};

Csv read_csv(const fs::path& path) {
    Csv csv;
    std::istringstream in(slurp(path));
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        if (first) {
            csv.header = row;
            first = false;
        } else if (!row.empty()) {
            csv.cells.push_back(row);
        }
    }
    return csv;
}

}  // namespace

TEST_CASE("minimal config applies the documented defaults") {
    const RunConfig config = parse_config_text("utility.kind = log\n");
    CHECK(config.spec.market.r == 0.01);
    CHECK(config.spec.market.mu == 0.05);
    CHECK(config.spec.market.sigma == 0.2);
    CHECK(config.spec.prefs.gamma == 1.0);
    CHECK(config.spec.prefs.beta == 1.0);
    CHECK(config.spec.prefs.rho == 0.0);
    CHECK(config.spec.prefs.delta == 0.0);
    CHECK(config.spec.horizon == 10.0);
    CHECK(config.spec.x0 == 1.0);
    CHECK(config.spec.income.is_zero());
    CHECK(config.spec.consumption_mode == ConsumptionMode::paper_literal);
    CHECK_FALSE(config.spec.clamp_consumption);
    CHECK(config.settings.grid_n == 2000);
    CHECK(config.settings.mc_paths == 200000);
    CHECK(config.settings.mc_dt == 0.005);
    CHECK(config.settings.mc_seed == 42);
    CHECK(config.settings.mc_antithetic);
}

TEST_CASE("config parsing errors") {
    SUBCASE("unknown key") {
        try {
            parse_config_text("market.q = 1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.kind() == ConfigError::Kind::unknown_key);
            CHECK(e.line() == 1);
        }
    }
    SUBCASE("power utility requires theta") {
        try {
            parse_config_text("utility.kind = power\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.kind() == ConfigError::Kind::missing_key);
            CHECK(std::string(e.what()).find("utility.theta") != std::string::npos);
        }
    }
    SUBCASE("exp utility requires eta") {
        CHECK_THROWS_AS(parse_config_text("utility.kind = exp\n"), ConfigError);
    }
    SUBCASE("malformed line") {
        CHECK_THROWS_AS(parse_config_text("just words\n"), ConfigError);
    }
    SUBCASE("bad number") {
        CHECK_THROWS_AS(parse_config_text("market.r = fast\n"), ConfigError);
    }
    SUBCASE("duplicate key") {
        CHECK_THROWS_AS(parse_config_text("market.r = 0.01\nmarket.r = 0.02\n"), ConfigError);
    }
    SUBCASE("validation errors propagate") {
        CHECK_THROWS_AS(parse_config_text("market.mu = 0.01\n"), ValidationError);
    }
    SUBCASE("comments and blanks are fine") {
        CHECK_NOTHROW(parse_config_text("# comment\n\nmarket.r = 0.01\n"));
    }
}

TEST_CASE("config round-trips the documented keys") {
    const RunConfig config = parse_config_text(
        "market.r = 0.02\n"
        "market.mu = 0.07\n"
        "market.sigma = 0.3\n"
        "prefs.gamma = 2\n"
        "prefs.beta = 0.5\n"
        "prefs.rho = 0.01\n"
        "prefs.delta = 0.005\n"
        "horizon.T = 5\n"
        "init.x0 = 2\n"
        "income.segments = 0:1.0; 2.5:0.5\n"
        "utility.kind = power\n"
        "utility.theta = 0.4\n"
        "mode.consumption = foc\n"
        "mode.clamp = true\n"
        "grid.n = 500\n"
        "mc.paths = 1000\n"
        "mc.dt = 0.002\n"
        "mc.seed = 7\n"
        "mc.antithetic = false\n");
    CHECK(config.spec.market.mu == 0.07);
    CHECK(config.spec.utility.family() == UtilityFamily::power);
    CHECK(config.spec.utility.theta() == 0.4);
    CHECK(config.spec.consumption_mode == ConsumptionMode::foc_derived);
    CHECK(config.spec.clamp_consumption);
    CHECK(config.spec.income.rate_at(2.5) == 0.5);
    CHECK(config.spec.income.rate_at(2.4) == 1.0);
    CHECK(config.settings.grid_n == 500);
    CHECK(config.settings.mc_paths == 1000);
    CHECK_FALSE(config.settings.mc_antithetic);
}

TEST_CASE("cmd_solve emits the strategy table and manifest") {
    const fs::path out = temp_dir("solve");
    RunConfig config = parse_config_text("utility.kind = log\ngrid.n = 400\n");
    REQUIRE(cmd_solve(config, out) == kExitOk);

    const Csv csv = read_csv(out / "strategy.csv");
    CHECK(csv.header ==
          std::vector<std::string>{"t", "c_star", "pi_star_at_x0", "dollar_amount", "A", "a", "b",
                                   "B", "q", "V_at_x0", "mean", "variance"});
    REQUIRE(csv.cells.size() == 401);

    CHECK(csv.value(0, "c_star") == doctest::Approx(0.904837418).epsilon(1e-9));
    CHECK(csv.value(0, "pi_star_at_x0") == doctest::Approx(0.904837418).epsilon(1e-9));
    CHECK(csv.value(0, "V_at_x0") == doctest::Approx(-9.194829).epsilon(1e-6));
    CHECK(csv.value(0, "variance") == doctest::Approx(0.4).epsilon(1e-8));
    CHECK(csv.value(0, "mean") == doctest::Approx(-8.494829).epsilon(1e-6));

    const std::size_t last = csv.cells.size() - 1;
    CHECK(csv.value(last, "c_star") == doctest::Approx(1.0));
    CHECK(csv.value(last, "variance") == doctest::Approx(0.0));
    CHECK(csv.value(last, "V_at_x0") == doctest::Approx(1.0));

    // 9-significant-digit rendering
    CHECK(csv.cells[0][csv.column("c_star")] == "0.904837418");

    const json manifest = json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["command"] == "solve");
    CHECK(manifest["parameters"]["market"]["r"] == 0.01);
    CHECK(manifest["outputs"].contains("strategy.csv"));
    // manifest hash matches the emitted bytes
    const std::string expected_hash = content_hash(slurp(out / "strategy.csv"));
    CHECK(manifest["outputs"]["strategy.csv"]["content_hash"] == expected_hash);
}

TEST_CASE("cmd_solve with beta = 0 zeroes consumption and warns") {
    const fs::path out = temp_dir("solve_beta0");
    RunConfig config = parse_config_text("utility.kind = log\nprefs.beta = 0\ngrid.n = 400\n");
    REQUIRE(cmd_solve(config, out) == kExitOk);
    const Csv csv = read_csv(out / "strategy.csv");
    for (const auto& row : csv.cells) CHECK(std::stod(row[1]) == 0.0);
    const json manifest = json::parse(slurp(out / "manifest.json"));
    bool warned = false;
    for (const auto& w : manifest["warnings"]) {
        warned = warned || std::string(w).find("beta = 0") != std::string::npos;
    }
    CHECK(warned);
}

TEST_CASE("re-running a command produces byte-identical CSV") {
    const fs::path out_a = temp_dir("repeat_a");
    const fs::path out_b = temp_dir("repeat_b");
    RunConfig config = parse_config_text("utility.kind = log\ngrid.n = 300\n");
    REQUIRE(cmd_solve(config, out_a) == kExitOk);
    REQUIRE(cmd_solve(config, out_b) == kExitOk);
    CHECK(slurp(out_a / "strategy.csv") == slurp(out_b / "strategy.csv"));
}

TEST_CASE("figure curves reproduce the closed forms") {
    RunConfig config = parse_config_text("utility.kind = log\ngrid.n = 200\n");
    SUBCASE("figure 1 beta sweep at t = 0") {
        const auto panels = figure_curves(config, 1, std::nullopt);
        REQUIRE(panels.size() == 1);
        REQUIRE(panels[0].curves.size() == 3);
        CHECK(panels[0].curves[0].second[0] == doctest::Approx(0.452419).epsilon(1e-6));
        CHECK(panels[0].curves[1].second[0] == doctest::Approx(0.904837).epsilon(1e-6));
        CHECK(panels[0].curves[2].second[0] == doctest::Approx(1.809675).epsilon(1e-6));
    }
    SUBCASE("figure 2 left at theta = 0.1, beta = 1") {
        const auto panels = figure_curves(config, 2, std::nullopt);
        REQUIRE(panels.size() == 2);
        CHECK(panels[0].curves[1].second[0] == doctest::Approx(0.894839).epsilon(1e-6));
    }
    SUBCASE("figure 3 left at eta = 3, beta = 10") {
        const auto panels = figure_curves(config, 3, std::nullopt);
        REQUIRE(panels.size() == 2);
        CHECK(panels[0].curves[1].second[0] == doctest::Approx(0.734195).epsilon(1e-6));
    }
    SUBCASE("figure 4 includes the continuity certificate") {
        const fs::path out = temp_dir("fig4");
        REQUIRE(cmd_figures(config, 4, std::nullopt, out) == kExitOk);
        const json manifest = json::parse(slurp(out / "manifest.json"));
        CHECK(manifest["checks"]["continuity_certificate"]["verdict"] == "pass");
        CHECK(fs::exists(out / "figure4.csv"));
    }
}

TEST_CASE("cmd_sensitivity emits the documented columns") {
    const fs::path out = temp_dir("sens");
    RunConfig config = parse_config_text("utility.kind = log\nprefs.rho = 0.02\ngrid.n = 500\n");
    REQUIRE(cmd_sensitivity(config, std::nullopt, out) == kExitOk);
    const Csv csv = read_csv(out / "sensitivity.csv");
    CHECK(csv.header == std::vector<std::string>{"beta", "V", "dV_fd", "d2V_fd", "M_paper",
                                                 "dV_paper", "discrepancy"});
    REQUIRE(csv.cells.size() == 7);  // beta = 0.5 .. 2.0 step 0.25
    for (std::size_t i = 0; i < csv.cells.size(); ++i) {
        CHECK(csv.value(i, "d2V_fd") > 0.0);
    }
    // at beta = 1, dV_paper = M_paper exactly (ln 1 = 0)
    CHECK(csv.value(2, "beta") == doctest::Approx(1.0));
    CHECK(csv.value(2, "dV_paper") == doctest::Approx(csv.value(2, "M_paper")).epsilon(1e-12));
    // the discrepancy column is dV_paper - dV_fd
    CHECK(csv.value(3, "discrepancy") ==
          doctest::Approx(csv.value(3, "dV_paper") - csv.value(3, "dV_fd")).epsilon(1e-9));

    ProblemSpec power;
    power.utility = UtilityModel::power_utility(0.5);
    RunConfig bad;
    bad.spec = power;
    CHECK_THROWS_AS(cmd_sensitivity(bad, std::nullopt, out), UtilityMismatch);
}

TEST_CASE("cmd_simulate writes the oracle report") {
    const fs::path out = temp_dir("sim");
    RunConfig config = parse_config_text(
        "utility.kind = log\ngrid.n = 400\nmc.paths = 20000\nmc.dt = 0.01\nmc.seed = 11\n");
    REQUIRE(cmd_simulate(config, out) == kExitOk);
    const json report = json::parse(slurp(out / "mc_report.json"));
    CHECK(report["verdict"] == "pass");
    CHECK(std::abs(double(report["z_scores"]["mean"])) <= 3.0);
    CHECK(std::abs(double(report["z_scores"]["variance"])) <= 3.0);
    CHECK(double(report["w_abs_error"]) <= double(report["w_tolerance"]));
    CHECK(report["estimates"]["n_paths"] == 20000);
}

TEST_CASE("cmd_simulate reports zero standard error for a riskless override policy") {
    const fs::path out = temp_dir("sim_zero");
    RunConfig config = parse_config_text(
        "utility.kind = log\nprefs.beta = 0\ngrid.n = 400\nmc.paths = 1000\nmc.dt = 0.01\n");
    Policy zero;
    zero.consumption = [](double) { return 0.0; };
    zero.investment = [](double, double) { return 0.0; };
    zero.dollar_position = [](double, double) { return 0.0; };
    // the report is emitted (exit may be nonzero: closed form assumes pi*)
    cmd_simulate(config, out, zero);
    const json report = json::parse(slurp(out / "mc_report.json"));
    CHECK(double(report["estimates"]["se_y"]) == 0.0);
}

TEST_CASE("tiny path counts produce a report with wide errors, no crash") {
    const fs::path out = temp_dir("sim_tiny");
    RunConfig config = parse_config_text(
        "utility.kind = log\ngrid.n = 400\nmc.paths = 100\nmc.dt = 0.01\nmc.seed = 3\n");
    const int code = cmd_simulate(config, out);
    CHECK((code == kExitOk || code == kExitNumeric));
    const json report = json::parse(slurp(out / "mc_report.json"));
    CHECK(double(report["estimates"]["se_y"]) > 0.0);
}

TEST_CASE("cmd_equilibrium passes on P0 and fails under --falsify") {
    RunConfig config = parse_config_text("utility.kind = log\ngrid.n = 400\n");
    const fs::path out = temp_dir("eq");
    REQUIRE(cmd_equilibrium(config, out, false) == kExitOk);
    const json report = json::parse(slurp(out / "equilibrium_report.json"));
    CHECK(report["verdict"] == "pass");
    CHECK(double(report["min_gap"]) >= -1e-6);
    CHECK(report["modes"]["paper"]["verdict"] == "pass");
    CHECK(report["modes"]["foc"]["verdict"] == "pass");
    // identical audits in both modes at rho = delta = 0
    CHECK(double(report["modes"]["paper"]["min_gap"]) ==
          doctest::Approx(double(report["modes"]["foc"]["min_gap"])).epsilon(1e-12));

    const fs::path out_bad = temp_dir("eq_bad");
    CHECK(cmd_equilibrium(config, out_bad, true) == kExitNumeric);
    const json bad = json::parse(slurp(out_bad / "equilibrium_report.json"));
    CHECK(bad["verdict"] == "fail");
    CHECK(double(bad["min_gap"]) < 0.0);
}

TEST_CASE("cmd_verify on P0 passes all checks") {
    RunConfig config = parse_config_text("utility.kind = log\ngrid.n = 2000\n");
    const fs::path out = temp_dir("verify");
    REQUIRE(cmd_verify(config, out) == kExitOk);
    const json report = json::parse(slurp(out / "verify_report.json"));
    CHECK(report["verdict"] == "pass");
    CHECK(double(report["ode_residuals"]["max_residual"]) <= 1e-8);
    CHECK(report["fd_pdes"]["verdict"] == "pass");
}

TEST_CASE("cmd_verify annotates the paper-mode discrepancy at rho != 0") {
    RunConfig config =
        parse_config_text("utility.kind = log\nprefs.rho = 0.05\ngrid.n = 2000\n");
    const fs::path out = temp_dir("verify_rho");
    REQUIRE(cmd_verify(config, out) == kExitOk);
    const json report = json::parse(slurp(out / "verify_report.json"));
    CHECK(report["verdict"] == "pass-with-notes");
}

TEST_CASE("grid below minimum surfaces as the numeric exit code") {
    RunConfig config = parse_config_text("utility.kind = log\ngrid.n = 50\n");
    const int code = run_guarded([&]() { return cmd_verify(config, temp_dir("verify_small")); });
    CHECK(code == kExitNumeric);
}

TEST_CASE("run_guarded maps error types to the exit-code contract") {
    CHECK(run_guarded([]() -> int { throw ConfigError(ConfigError::Kind::parse, 1, "x"); }) ==
          kExitConfig);
    CHECK(run_guarded([]() -> int {
              throw ValidationError({InvalidParameter("x", 0, "x > 0")});
          }) == kExitConfig);
    CHECK(run_guarded([]() -> int { throw UtilityMismatch("log only"); }) == kExitConfig);
    CHECK(run_guarded([]() -> int { throw GridTooCoarse("n"); }) == kExitNumeric);
    CHECK(run_guarded([]() -> int { throw NegativeVariance("v"); }) == kExitNumeric);
    CHECK(run_guarded([]() -> int { throw IoError("disk"); }) == kExitIo);
    CHECK(run_guarded([]() -> int { return kExitOk; }) == kExitOk);
}

TEST_CASE("degeneration: beta sweep keeps pi columns bit-identical") {
    std::vector<std::string> pi_columns;
    std::vector<std::vector<double>> c_columns;
    for (const char* beta : {"1e-2", "1e-4", "1e-6"}) {
        const fs::path out = temp_dir(std::string("degen_") + beta);
        RunConfig config = parse_config_text(std::string("utility.kind = log\nprefs.beta = ") +
                                             beta + "\ngrid.n = 200\n");
        REQUIRE(cmd_solve(config, out) == kExitOk);
        const Csv csv = read_csv(out / "strategy.csv");
        std::string pi_col;
        std::vector<double> c_col;
        for (const auto& row : csv.cells) {
            pi_col += row[static_cast<std::size_t>(csv.column("pi_star_at_x0"))] + ";";
            c_col.push_back(std::stod(row[1]));
        }
        pi_columns.push_back(pi_col);
        c_columns.push_back(c_col);
    }
    CHECK(pi_columns[0] == pi_columns[1]);
    CHECK(pi_columns[1] == pi_columns[2]);
    for (std::size_t i = 0; i < c_columns[0].size(); ++i) {
        CHECK(c_columns[0][i] > c_columns[1][i]);
        CHECK(c_columns[1][i] > c_columns[2][i]);
    }
}
