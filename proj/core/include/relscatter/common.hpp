#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace relscatter {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;

// Sign of a boundary value. Plus means lambda + i0.
enum class Sign { plus = 1, minus = -1 };

inline double sgn(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }
inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
inline const char* to_string(Sign s) { return s == Sign::plus ? "+" : "-"; }

// Error taxonomy. Everything derives from a std exception so callers can
// catch broadly.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct BranchError : DomainError {
    using DomainError::DomainError;
};
struct SingularityError : DomainError {
    using DomainError::DomainError;
};
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// <x> = sqrt(1 + |x|^2)
inline double japanese(double r) { return std::sqrt(1.0 + r * r); }

}  // namespace relscatter
