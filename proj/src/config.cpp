#include "mvu/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace mvu {

namespace {

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto begin = s.find_first_not_of(ws);
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(ws);
    return std::string(s.substr(begin, end - begin + 1));
}

double parse_double(const std::string& value, int line) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError(ConfigError::Kind::parse, line, "expected a number, got '" + value + "'");
    }
    if (pos != value.size()) {
        throw ConfigError(ConfigError::Kind::parse, line, "trailing characters in '" + value + "'");
    }
    return out;
}

long parse_long(const std::string& value, int line) {
    const double d = parse_double(value, line);
    const long l = static_cast<long>(d);
    if (static_cast<double>(l) != d) {
        throw ConfigError(ConfigError::Kind::parse, line, "expected an integer, got '" + value + "'");
    }
    return l;
}

bool parse_bool(const std::string& value, int line) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError(ConfigError::Kind::parse, line, "expected true/false, got '" + value + "'");
}

std::vector<IncomeSegment> parse_segments(const std::string& value, int line) {
    std::vector<IncomeSegment> segments;
    std::istringstream stream(value);
    std::string item;
    while (std::getline(stream, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ConfigError(ConfigError::Kind::parse, line,
                              "income segment '" + item + "' is not start:rate");
        }
        IncomeSegment seg;
        seg.start = parse_double(trim(item.substr(0, colon)), line);
        seg.rate = parse_double(trim(item.substr(colon + 1)), line);
        segments.push_back(seg);
    }
    return segments;
}

const std::vector<std::string> kKnownKeys = {
    "market.r",        "market.mu",   "market.sigma", "prefs.gamma",  "prefs.beta",
    "prefs.rho",       "prefs.delta", "horizon.T",    "init.x0",      "income.segments",
    "utility.kind",    "utility.theta", "utility.eta", "mode.consumption", "mode.clamp",
    "grid.n",          "mc.paths",    "mc.dt",        "mc.seed",      "mc.antithetic",
};

}  // namespace

RunConfig parse_config_text(std::string_view text) {
    std::map<std::string, std::pair<std::string, int>> entries;
    {
        std::istringstream stream{std::string(text)};
        std::string raw;
        int line_no = 0;
        while (std::getline(stream, raw)) {
            ++line_no;
            const std::string line = trim(raw);
            if (line.empty() || line.front() == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(ConfigError::Kind::parse, line_no, "expected key = value");
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty()) {
                throw ConfigError(ConfigError::Kind::parse, line_no, "empty key or value");
            }
            if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
                throw ConfigError(ConfigError::Kind::unknown_key, line_no, key);
            }
            if (entries.count(key)) {
                throw ConfigError(ConfigError::Kind::parse, line_no, "duplicate key " + key);
            }
            entries[key] = {value, line_no};
        }
    }

    auto lookup = [&](const char* key) -> std::optional<std::pair<std::string, int>> {
        auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        return it->second;
    };
    auto number = [&](const char* key, double fallback) {
        auto e = lookup(key);
        return e ? parse_double(e->first, e->second) : fallback;
    };

    RunConfig config;
    ProblemSpec& spec = config.spec;
    spec.market.r = number("market.r", 0.01);
    spec.market.mu = number("market.mu", 0.05);
    spec.market.sigma = number("market.sigma", 0.2);
    spec.prefs.gamma = number("prefs.gamma", 1.0);
    spec.prefs.beta = number("prefs.beta", 1.0);
    spec.prefs.rho = number("prefs.rho", 0.0);
    spec.prefs.delta = number("prefs.delta", 0.0);
    spec.horizon = number("horizon.T", 10.0);
    spec.x0 = number("init.x0", 1.0);

    if (auto e = lookup("income.segments")) {
        spec.income = IncomeSchedule(parse_segments(e->first, e->second));
    }

    std::string kind = "log";
    if (auto e = lookup("utility.kind")) {
        kind = e->first;
        if (kind != "log" && kind != "power" && kind != "exp") {
            throw ConfigError(ConfigError::Kind::parse, e->second,
                              "utility.kind must be log, power or exp");
        }
    }
    if (kind == "log") {
        spec.utility = UtilityModel::log_utility();
    } else if (kind == "power") {
        auto theta = lookup("utility.theta");
        if (!theta) throw ConfigError(ConfigError::Kind::missing_key, 0, "utility.theta");
        spec.utility = UtilityModel::power_utility(parse_double(theta->first, theta->second));
    } else {
        auto eta = lookup("utility.eta");
        if (!eta) throw ConfigError(ConfigError::Kind::missing_key, 0, "utility.eta");
        spec.utility = UtilityModel::exponential_utility(parse_double(eta->first, eta->second));
    }

    if (auto e = lookup("mode.consumption")) {
        if (e->first == "paper") {
            spec.consumption_mode = ConsumptionMode::paper_literal;
        } else if (e->first == "foc") {
            spec.consumption_mode = ConsumptionMode::foc_derived;
        } else {
            throw ConfigError(ConfigError::Kind::parse, e->second,
                              "mode.consumption must be paper or foc");
        }
    }
    if (auto e = lookup("mode.clamp")) spec.clamp_consumption = parse_bool(e->first, e->second);

    RunSettings& settings = config.settings;
    if (auto e = lookup("grid.n")) settings.grid_n = static_cast<int>(parse_long(e->first, e->second));
    if (auto e = lookup("mc.paths")) settings.mc_paths = parse_long(e->first, e->second);
    settings.mc_dt = number("mc.dt", settings.mc_dt);
    if (auto e = lookup("mc.seed")) {
        settings.mc_seed = static_cast<std::uint64_t>(parse_long(e->first, e->second));
    }
    if (auto e = lookup("mc.antithetic")) settings.mc_antithetic = parse_bool(e->first, e->second);

    config.spec = validate_spec(config.spec);
    if (spec.prefs.beta == 0.0) {
        config.warnings.push_back("beta = 0: degenerate classical mean-variance mode, "
                                  "consumption forced to 0");
    }
    return config;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(ConfigError::Kind::parse, 0, "cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

}  // namespace mvu
