#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mvu/config.hpp"
#include "mvu/monte_carlo.hpp"
#include "mvu/problem.hpp"

namespace mvu {

// Stable CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

// One panel of figure data: a shared time grid plus one labelled c*(t)
// column per sweep value.
struct FigurePanel {
    std::string file_stem;
    std::vector<double> t;
    std::vector<std::pair<std::string, std::vector<double>>> curves;
};

// The consumption curves behind each figure, computed at full precision
// (the CSV rendering is 9 significant digits).
std::vector<FigurePanel> figure_curves(const RunConfig& config, int fig,
                                       const std::optional<std::vector<double>>& sweep);

int cmd_solve(const RunConfig& config, const std::filesystem::path& out_dir);
int cmd_figures(const RunConfig& config, int fig, const std::optional<std::vector<double>>& sweep,
                const std::filesystem::path& out_dir);
int cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir,
                 const std::optional<Policy>& override_policy = std::nullopt);
int cmd_equilibrium(const RunConfig& config, const std::filesystem::path& out_dir, bool falsify);
int cmd_verify(const RunConfig& config, const std::filesystem::path& out_dir);
int cmd_sensitivity(const RunConfig& config, const std::optional<std::vector<double>>& sweep,
                    const std::filesystem::path& out_dir);

// Maps thrown errors to the exit-code contract and prints the message.
int run_guarded(const std::function<int()>& body);

// 9-significant-digit float rendering used by every CSV.
std::string format_number(double v);

// FNV-1a 64-bit content hash, hex encoded.
std::string content_hash(std::string_view bytes);

}  // namespace mvu
