#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fso {

/// An argument is outside the operation's domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Matrix is not symmetric or not positive semidefinite within tolerance.
class FactorizationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A request would exceed a hard computational limit (e.g. tensor rule size).
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The sigma_x = 0 channel is a point mass and has no density.
class DegenerateDistributionError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// The BER curve does not cross the requested target inside the bracket.
class NotAchievableError : public std::runtime_error {
public:
  NotAchievableError(const std::string& what, double ber_low, double ber_high)
      : std::runtime_error(what), ber_low_(ber_low), ber_high_(ber_high) {}
  double ber_at_low() const noexcept { return ber_low_; }
  double ber_at_high() const noexcept { return ber_high_; }

private:
  double ber_low_;
  double ber_high_;
};

/// Structured configuration failure; carries every violation found.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
  std::vector<std::string> violations_;
};

}  // namespace fso
