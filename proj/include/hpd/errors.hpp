#pragma once

#include <stdexcept>
#include <string>

namespace hpd {

// An argument lies outside the domain of the function being evaluated.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// The function has a genuine singularity at the requested point (K_a(1) = inf).
class PoleError : public DomainError {
 public:
  explicit PoleError(const std::string& what) : DomainError(what) {}
};

// An iterative method exhausted its iteration or term budget.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hpd
