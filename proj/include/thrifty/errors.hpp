#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace thrifty {

/// Input outside its documented domain (negative counts, out-of-boundary parameters, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A closed-form denominator fell below the division guard.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The design matrix of a least-squares problem lacks full column rank.
class RankDeficientError : public std::runtime_error {
public:
    RankDeficientError(std::string what, std::vector<std::string> columns)
        : std::runtime_error(std::move(what)), columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const noexcept { return columns_; }

private:
    std::vector<std::string> columns_;
};

/// Scenario configuration failed validation; carries every violation found.
class ConfigError : public ValidationError {
public:
    explicit ConfigError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

}  // namespace thrifty
