#pragma once

#include <stdexcept>
#include <string>

namespace sopma {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input files (CSV, JSON, config syntax).
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line = -1)
        : Error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Arguments outside an operation's stated domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Input data that parses but cannot be analyzed (empty after
// complete-case deletion, degenerate item, insufficient coverage...).
class DataError : public Error {
public:
    using Error::Error;
};

// Invalid configuration values or unknown names in a config file.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A stage invoked without the artifacts its producer stage writes.
class DependencyError : public Error {
public:
    using Error::Error;
};

}  // namespace sopma
