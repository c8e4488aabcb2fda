// errors.hpp: exception types shared by every qmi module.

#pragma once

#include <stdexcept>
#include <string>

namespace qmi {

// Input failed a structural or numerical check (non-Hermitian entry,
// completeness residual, malformed file field, ...).
class ValidationError : public std::invalid_argument {
public:
  ValidationError(const std::string& what, std::string field = {}, double residual = 0.0)
      : std::invalid_argument(what), field_(std::move(field)), residual_(residual) {}

  const std::string& field() const noexcept { return field_; }
  double residual() const noexcept { return residual_; }

private:
  std::string field_;
  double residual_;
};

// A scalar function was evaluated outside its domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Gradient requested at a point whose spectrum is below the interior floor.
class InteriorPointError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class InfeasibleError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class NotReversibleError : public std::runtime_error {
public:
  NotReversibleError(const std::string& what, double gap)
      : std::runtime_error(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

private:
  double gap_;
};

} // namespace qmi
