#include "triprod/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace triprod {

SeriesClass SeriesParam::series_class() const {
  constexpr double tol = 1e-14;
  if (std::abs(lambda_.real()) <= tol) return SeriesClass::principal;
  if (std::abs(lambda_.imag()) <= tol && std::abs(lambda_.real()) < 1.0) {
    return SeriesClass::complementary;
  }
  return SeriesClass::general;
}

ExponentQuadruple exponents(const SeriesParam& l1, const SeriesParam& l2, const SeriesParam& l3) {
  const Complex a = l1.lambda();
  const Complex b = l2.lambda();
  const Complex c = l3.lambda();
  return {a - b - c, -a + b - c, -a - b + c, -a - b - c};
}

Complex kernel_K(PlanePoint s1, PlanePoint s2, PlanePoint s3, const ExponentQuadruple& e) {
  const double w23 = std::abs(omega(s2, s3));
  const double w13 = std::abs(omega(s1, s3));
  const double w12 = std::abs(omega(s1, s2));
  if (w23 < kSingularOmega || w13 < kSingularOmega || w12 < kSingularOmega) {
    throw Error(ErrorKind::SingularConfiguration, "kernel argument with ω = 0");
  }
  const Complex log_k = 0.5 * (e.alpha - 1.0) * std::log(w23) +
                        0.5 * (e.beta - 1.0) * std::log(w13) +
                        0.5 * (e.gamma - 1.0) * std::log(w12);
  return std::exp(log_k);
}

namespace {

// |sin d| for an angle difference, or 0 when d is a multiple of π up to
// rounding of the inputs.
double abs_sin_of_difference(double u, double v) {
  const double d = std::remainder(u - v, std::numbers::pi);
  const double scale = std::max({1.0, std::abs(u), std::abs(v)});
  if (std::abs(d) <= 4.0 * std::numeric_limits<double>::epsilon() * scale) return 0.0;
  return std::abs(std::sin(d));
}

}  // namespace

Complex restricted_kernel_f(double x, double y, double z, const ExponentQuadruple& e) {
  const double syz = abs_sin_of_difference(y, z);
  const double sxz = abs_sin_of_difference(x, z);
  const double sxy = abs_sin_of_difference(x, y);
  if (syz == 0.0 || sxz == 0.0 || sxy == 0.0) {
    throw Error(ErrorKind::SingularConfiguration, "coincident angles modulo π");
  }
  const Complex log_f = 0.5 * (e.alpha - 1.0) * std::log(syz) +
                        0.5 * (e.beta - 1.0) * std::log(sxz) +
                        0.5 * (e.gamma - 1.0) * std::log(sxy);
  return std::exp(log_f);
}

}  // namespace triprod
