#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spindd {

/// Malformed or inconsistent run configuration. Carries the offending
/// line (1-based, -1 if not tied to a line) and field/section name.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line = -1, std::string field = {})
        : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + msg
                                      : "config: " + msg),
          line_(line),
          field_(std::move(field)) {}

    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

/// Nonlinear solver failure (Gummel non-convergence, negative density,
/// step below dt_min). Carries the residual history when available.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg, std::vector<double> residual_history = {})
        : std::runtime_error(msg), residual_history_(std::move(residual_history)) {}

    const std::vector<double>& residual_history() const { return residual_history_; }

private:
    std::vector<double> residual_history_;
};

/// Violated precondition on data passed to a library operation.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace spindd
