#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gpslab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric domain problems: divergent MGF, recursion outside its region, bad tilt.
// `param` names the offending parameter so the CLI can report it.
struct DomainError : Error {
    std::string param;
    DomainError(std::string param_, const std::string& what)
        : Error(what), param(std::move(param_)) {}
};

struct RangeError : Error {
    using Error::Error;
};

struct UnsupportedLawError : Error {
    using Error::Error;
};

struct EnumerationCapError : Error {
    using Error::Error;
};

struct SearchError : Error {
    using Error::Error;
};

struct FitQualityError : Error {
    using Error::Error;
};

struct RejectionBudgetError : Error {
    std::uint64_t attempts;
    explicit RejectionBudgetError(std::uint64_t n)
        : Error("constrained sampling: rejection budget exhausted after " + std::to_string(n) + " attempts"),
          attempts(n) {}
};

}  // namespace gpslab
