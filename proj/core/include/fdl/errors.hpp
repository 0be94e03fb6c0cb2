#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace fdl {

// Thrown when an argument lies outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A documented precondition of the operation does not hold.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative or truncated computation could not reach its tolerance.
class tolerance_failure : public std::runtime_error {
 public:
  tolerance_failure(const std::string& what, double achieved, double requested)
      : std::runtime_error(describe(what, achieved, requested)),
        achieved_(achieved),
        requested_(requested) {}

  [[nodiscard]] double achieved() const noexcept { return achieved_; }
  [[nodiscard]] double requested() const noexcept { return requested_; }

 private:
  static std::string describe(const std::string& what, double achieved, double requested) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << what << " (achieved " << achieved << ", requested " << requested << ")";
    return os.str();
  }

  double achieved_;
  double requested_;
};

// A constructed object failed its own verification.
class certificate_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data is self-contradictory (e.g. u_j = 0 but Lu_j != 0).
class inconsistency_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fdl
