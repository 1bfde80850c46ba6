#pragma once

#include <stdexcept>
#include <string>

namespace wavedamp {

/// Raised for malformed or semantically invalid configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numerical routine cannot deliver its contract (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A separating-curve residual turned out non-monotone on the search bracket.
/// Carries the offending bracket so the caller can report the layout/profile
/// mismatch precisely.
class BracketError : public NumericalError {
public:
    BracketError(const std::string& what, double lo, double hi)
        : NumericalError(what), lo(lo), hi(hi) {}
    double lo;
    double hi;
};

} // namespace wavedamp
