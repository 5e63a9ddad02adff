#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include "triprod/error.hpp"

namespace triprod {

using Complex = std::complex<double>;

/// A numerically obtained value together with how much to trust it.
///
/// error_bound is method specific: an a-posteriori refinement difference
/// (times a safety factor) for quadrature, three standard errors for Monte
/// Carlo, and the Gamma tolerance for closed forms.
struct Estimate {
  Complex value{};
  double error_bound = 0.0;
  std::string method;
  std::int64_t cost = 0;  // integrand evaluations

  double relative_error_bound() const {
    const double m = std::abs(value);
    return m > 0.0 ? error_bound / m : error_bound;
  }
};

/// Raised when a refinement sequence stops short of its target.  The best
/// estimate reached so far stays available so that reports can still show it.
class NonConvergentError : public Error {
 public:
  NonConvergentError(const std::string& what, Estimate best)
      : Error(ErrorKind::NonConvergent, what), best_(std::move(best)) {}

  const Estimate& best() const noexcept { return best_; }

 private:
  Estimate best_;
};

}  // namespace triprod
