#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mvu/problem.hpp"

namespace mvu {

struct RunSettings {
    int grid_n = 2000;
    long mc_paths = 200000;
    double mc_dt = 0.005;
    std::uint64_t mc_seed = 42;
    bool mc_antithetic = true;
};

struct RunConfig {
    ProblemSpec spec;
    RunSettings settings;
    std::vector<std::string> warnings;
};

// Line-based `key = value` config. Blank lines and lines starting with '#'
// are skipped; unknown keys are errors; missing keys take the documented
// defaults. Throws ConfigError, then ValidationError from validate_spec.
RunConfig parse_config_text(std::string_view text);
RunConfig parse_config(const std::string& path);

}  // namespace mvu
