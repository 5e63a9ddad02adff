#pragma once

#include <complex>
#include <span>

#include "triprod/estimate.hpp"

namespace triprod {

/// log Γ(z) split into log|Γ(z)| and a phase.
///
/// The phase is not reduced modulo 2π.  It is the branch that is continuous
/// along vertical lines Re z = const (away from the poles), which for
/// Re z > 0 coincides with the usual principal log-gamma.
struct LogGammaResult {
  double log_modulus = 0.0;
  double phase = 0.0;

  Complex log_value() const { return {log_modulus, phase}; }
  double modulus() const;
  Complex value() const;
};

/// Stirling series with ten Bernoulli terms, applied after shifting the
/// argument to Re z >= 12 by the recurrence Γ(z+1) = zΓ(z).
///
/// Relative error of exp(log_gamma(z)) stays below 1e-12 on the strip
/// |z| <= 50, Re z in [-10, 50] (checked in tests against reflection and
/// recurrence identities).  Throws Error{PoleArgument} at non-positive
/// integers (tolerance 1e-14).
LogGammaResult log_gamma(Complex z);

/// √(2π) e^{-π|t|/2} |t|^{σ-1/2}, the leading Stirling term for |Γ(σ+it)|.
/// Throws Error{DomainTooSmall} for |t| < 1.
double stirling_modulus(double sigma, double t);

/// log of stirling_modulus, usable when the modulus itself underflows.
double log_stirling_modulus(double sigma, double t);

/// Σ log Γ(num_i) - Σ log Γ(den_j), accumulated without exponentiating.
LogGammaResult gamma_product_log(std::span<const Complex> numerator,
                                 std::span<const Complex> denominator);

/// True when z is within 1e-14 of 0, -1, -2, ...
bool is_gamma_pole(Complex z) noexcept;

}  // namespace triprod
