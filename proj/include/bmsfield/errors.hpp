#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bms {

// Array length or truncation order does not match what the operation expects.
class InputShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A parameter lies outside the domain of the operation (k <= 1, m <= 0, a = 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A supertranslation direction is not in the span of the configured chaos directions.
class UnsupportedDirectionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An operator would raise a series past its degree cap under the strict policy.
class DegreeCapError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// A field does not satisfy a required constraint (e.g. T4 support).
class ConstraintError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Orbit nodes mapped outside the sampled window.
class CoverageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// JSON document does not follow the expected schema; message carries the field path.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace bms
