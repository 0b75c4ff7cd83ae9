#pragma once

#include <stdexcept>
#include <string>

namespace mecopt {

// Invalid configuration value. `field()` names the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A caller broke a documented precondition (e.g. evaluating an unprojected solution).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file; `column()` is empty when the problem is not column-specific.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string column, const std::string& what)
        : std::runtime_error(column.empty() ? what : column + ": " + what), column_(std::move(column)) {}

    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

} // namespace mecopt
