#pragma once

#include <stdexcept>
#include <string>

namespace gelfand {

/// Invalid argument or parameter outside the documented range.
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Warping function violates the structural hypotheses (positivity, psi'(0+) > 0, ...).
class GeometryError : public std::runtime_error {
public:
  explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Nonlinearity fails its validity predicate (positivity, monotonicity, exponent range).
class ValidityError : public std::runtime_error {
public:
  explicit ValidityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iterative method exhausted its iteration budget.
class NoConvergence : public std::runtime_error {
public:
  explicit NoConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

/// Tridiagonal factorization met a pivot below 1e-14 * row scale.
class SingularJacobian : public std::runtime_error {
public:
  explicit SingularJacobian(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parameters violate the hypotheses of a closed-form result.
class HypothesisError : public std::runtime_error {
public:
  explicit HypothesisError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Evaluation would overflow double precision (exp argument guard).
class OverflowError : public std::runtime_error {
public:
  explicit OverflowError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gelfand
