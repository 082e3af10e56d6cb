#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mvu {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A single violated type invariant (name, offending value, constraint text).
class InvalidParameter : public Error {
public:
    InvalidParameter(std::string name, double value, std::string constraint)
        : Error(name + " = " + std::to_string(value) + " violates: " + constraint),
          name_(std::move(name)), value_(value), constraint_(std::move(constraint)) {}

    const std::string& name() const { return name_; }
    double value() const { return value_; }
    const std::string& constraint() const { return constraint_; }

private:
    std::string name_;
    double value_;
    std::string constraint_;
};

// All violations found by validate_spec, reported together.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<InvalidParameter> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<InvalidParameter>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<InvalidParameter>& v) {
        std::ostringstream os;
        os << v.size() << " invalid parameter(s):";
        for (const auto& p : v) os << "\n  " << p.what();
        return os.str();
    }
    std::vector<InvalidParameter> violations_;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class OutOfHorizon : public Error {
public:
    using Error::Error;
};

class ZeroWealth : public Error {
public:
    using Error::Error;
};

class BetaZero : public Error {
public:
    using Error::Error;
};

class NegativeVariance : public Error {
public:
    using Error::Error;
};

class UtilityMismatch : public Error {
public:
    using Error::Error;
};

class GridTooCoarse : public Error {
public:
    using Error::Error;
};

class NonFinitePath : public Error {
public:
    NonFinitePath(long path, long step)
        : Error("non-finite wealth on path " + std::to_string(path) +
                " at step " + std::to_string(step)),
          path_(path), step_(step) {}
    long path() const { return path_; }
    long step() const { return step_; }

private:
    long path_;
    long step_;
};

// Config-file problems: bad line, unknown key, or a required key left unset.
class ConfigError : public Error {
public:
    enum class Kind { parse, unknown_key, missing_key };

    ConfigError(Kind kind, int line, std::string detail)
        : Error(describe(kind, line, detail)), kind_(kind), line_(line) {}

    Kind kind() const { return kind_; }
    int line() const { return line_; }

private:
    static std::string describe(Kind kind, int line, const std::string& detail) {
        std::ostringstream os;
        switch (kind) {
            case Kind::parse: os << "parse error"; break;
            case Kind::unknown_key: os << "unknown key"; break;
            case Kind::missing_key: os << "missing key"; break;
        }
        if (line > 0) os << " at line " << line;
        os << ": " << detail;
        return os.str();
    }
    Kind kind_;
    int line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace mvu
