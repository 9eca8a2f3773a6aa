#pragma once

#include <stdexcept>
#include <string>

namespace igbs {

/// Invalid configuration, flags or method parameters. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed, inconsistent or unreadable data. CLI exit code 3.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A selection or classification stage failed to produce a result. CLI exit code 4.
class MethodError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace igbs
