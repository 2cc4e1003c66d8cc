#pragma once

#include <stdexcept>
#include <string>

namespace pwlab {

// Raised when an input fails a documented precondition: malformed files,
// matrices outside the required class, domain violations, or borderline
// numerical situations that must be reported rather than silently resolved.
// The CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an internal consistency check fails on data that passed
// validation: a result that violates its own contract. The CLI maps this to
// exit code 1.
class invariant_error : public std::runtime_error {
public:
    explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pwlab
