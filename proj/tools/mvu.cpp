#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvu/config.hpp"
#include "mvu/runner.hpp"

namespace {

std::optional<std::vector<double>> parse_sweep(const std::string& sweep) {
    if (sweep.empty()) return std::nullopt;
    std::vector<double> values;
    std::istringstream stream(sweep);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw mvu::ConfigError(mvu::ConfigError::Kind::parse, 0,
                                   "--sweep entry '" + item + "' is not a number");
        }
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibrium consumption/investment strategies for the "
                 "mean-variance-utility portfolio problem"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string sweep;
    int fig = 1;
    bool falsify = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "path to a key = value config file")->required();
        cmd->add_option("--out", out_dir, "output directory (default: current)");
    };

    auto* solve = app.add_subcommand("solve", "tabulate the equilibrium strategy and value");
    add_common(solve);
    auto* figures = app.add_subcommand("figures", "emit consumption-curve data");
    add_common(figures);
    figures->add_option("--fig", fig, "figure index 1..4")->check(CLI::Range(1, 4));
    figures->add_option("--sweep", sweep, "comma-separated sweep values");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the closed forms");
    add_common(simulate);
    auto* equilibrium = app.add_subcommand("equilibrium", "perturbation audit of the strategy");
    add_common(equilibrium);
    equilibrium->add_flag("--falsify", falsify, "audit a deliberately corrupted policy");
    auto* verify = app.add_subcommand("verify", "ODE/FOC/HJB/PDE residual checks");
    add_common(verify);
    auto* sensitivity = app.add_subcommand("sensitivity", "value sensitivity over beta");
    add_common(sensitivity);
    sensitivity->add_option("--sweep", sweep, "comma-separated beta values");

    CLI11_PARSE(app, argc, argv);

    return mvu::run_guarded([&]() -> int {
        const mvu::RunConfig config = mvu::parse_config(config_path);
        if (solve->parsed()) return mvu::cmd_solve(config, out_dir);
        if (figures->parsed()) return mvu::cmd_figures(config, fig, parse_sweep(sweep), out_dir);
        if (simulate->parsed()) return mvu::cmd_simulate(config, out_dir);
        if (equilibrium->parsed()) return mvu::cmd_equilibrium(config, out_dir, falsify);
        if (verify->parsed()) return mvu::cmd_verify(config, out_dir);
        if (sensitivity->parsed()) return mvu::cmd_sensitivity(config, parse_sweep(sweep), out_dir);
        return mvu::kExitConfig;
    });
}
