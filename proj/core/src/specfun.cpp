#include "triprod/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace triprod {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kShiftTarget = 12.0;

// B_{2k} / (2k (2k-1)), k = 1..10.  Exact rationals from the Bernoulli
// numbers B_2 = 1/6 ... B_20 = -174611/330.
constexpr std::array<double, 10> kStirlingCoefficients = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

// Principal-branch Stirling series, valid for Re z >= kShiftTarget.
Complex stirling_series(Complex z) {
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex correction = 0.0;
  Complex power = inv;
  for (double c : kStirlingCoefficients) {
    correction += c * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + correction;
}

// log(w) with the cut along the negative imaginary axis for Re w < 0, so
// that the value is continuous as Im w crosses zero there.
Complex vertical_log(Complex w) {
  Complex l = std::log(w);
  if (w.real() < 0.0 && l.imag() < 0.0) {
    l += Complex(0.0, 2.0 * kPi);
  }
  return l;
}

}  // namespace

double LogGammaResult::modulus() const { return std::exp(log_modulus); }

Complex LogGammaResult::value() const { return std::exp(log_value()); }

bool is_gamma_pole(Complex z) noexcept {
  if (std::abs(z.imag()) > 1e-14) return false;
  const double n = std::round(z.real());
  return n <= 0.0 && std::abs(z.real() - n) <= 1e-14;
}

LogGammaResult log_gamma(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorKind::NonFinite, "log_gamma argument is not finite");
  }
  if (is_gamma_pole(z)) {
    std::ostringstream os;
    os << "Gamma pole at z = " << z;
    throw Error(ErrorKind::PoleArgument, os.str());
  }

  Complex shift_sum = 0.0;
  Complex w = z;
  while (w.real() < kShiftTarget) {
    shift_sum += vertical_log(w);
    w += 1.0;
  }
  const Complex lg = stirling_series(w) - shift_sum;
  return {lg.real(), lg.imag()};
}

double log_stirling_modulus(double sigma, double t) {
  const double at = std::abs(t);
  if (!(at >= 1.0)) {
    throw Error(ErrorKind::DomainTooSmall, "Stirling envelope needs |t| >= 1");
  }
  return 0.5 * std::log(2.0 * kPi) - 0.5 * kPi * at + (sigma - 0.5) * std::log(at);
}

double stirling_modulus(double sigma, double t) {
  return std::exp(log_stirling_modulus(sigma, t));
}

LogGammaResult gamma_product_log(std::span<const Complex> numerator,
                                 std::span<const Complex> denominator) {
  LogGammaResult acc;
  for (const Complex& z : numerator) {
    const LogGammaResult g = log_gamma(z);
    acc.log_modulus += g.log_modulus;
    acc.phase += g.phase;
  }
  for (const Complex& z : denominator) {
    const LogGammaResult g = log_gamma(z);
    acc.log_modulus -= g.log_modulus;
    acc.phase -= g.phase;
  }
  return acc;
}

}  // namespace triprod
