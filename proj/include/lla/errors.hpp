#pragma once

#include <stdexcept>
#include <string>

namespace lla {

/// Invalid user-facing configuration (bad problem name, bad dimension, bad key).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string &what) : std::invalid_argument(what) {}
};

/// The requested operation has no analytic oracle for this problem.
class UnsupportedProblemError : public std::logic_error {
public:
    explicit UnsupportedProblemError(const std::string &what) : std::logic_error(what) {}
};

class NumericError : public std::domain_error {
public:
    explicit NumericError(const std::string &what) : std::domain_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace lla
