#pragma once

#include <complex>

#include "triprod/estimate.hpp"

namespace triprod {

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;
};

enum class SeriesClass { principal, complementary, general };

/// Spectral parameter λ of the representation on even homogeneous functions
/// of degree λ-1.  Purely imaginary λ is the principal series, real λ in
/// (-1, 1) the complementary series.
class SeriesParam {
 public:
  constexpr SeriesParam() = default;
  constexpr SeriesParam(Complex lambda) : lambda_(lambda) {}  // NOLINT: implicit on purpose
  constexpr SeriesParam(double lambda) : lambda_(lambda) {}   // NOLINT

  static SeriesParam principal(double t) { return SeriesParam(Complex(0.0, t)); }

  Complex lambda() const { return lambda_; }
  SeriesClass series_class() const;
  bool is_principal() const { return series_class() == SeriesClass::principal; }

 private:
  Complex lambda_{};
};

/// (α, β, γ, δ) with α = λ1-λ2-λ3, β = -λ1+λ2-λ3, γ = -λ1-λ2+λ3,
/// δ = -λ1-λ2-λ3.
struct ExponentQuadruple {
  Complex alpha;
  Complex beta;
  Complex gamma;
  Complex delta;
};

ExponentQuadruple exponents(const SeriesParam& l1, const SeriesParam& l2, const SeriesParam& l3);

/// ω(ξ, η) = ξ1 η2 - ξ2 η1.
constexpr double omega(PlanePoint xi, PlanePoint eta) { return xi.x * eta.y - xi.y * eta.x; }

/// |ω| below this is treated as an exact zero of the kernel.
inline constexpr double kSingularOmega = 1e-300;

/// |ω(s2,s3)|^{(α-1)/2} |ω(s1,s3)|^{(β-1)/2} |ω(s1,s2)|^{(γ-1)/2}.
/// Throws Error{SingularConfiguration} when some |ω| < kSingularOmega.
Complex kernel_K(PlanePoint s1, PlanePoint s2, PlanePoint s3, const ExponentQuadruple& e);

/// The kernel restricted to the unit circle:
/// |sin(y-z)|^{(α-1)/2} |sin(x-z)|^{(β-1)/2} |sin(x-y)|^{(γ-1)/2}.
/// Throws Error{SingularConfiguration} when two angles agree modulo π.
Complex restricted_kernel_f(double x, double y, double z, const ExponentQuadruple& e);

}  // namespace triprod
