#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "triprod/trilinear.hpp"

namespace triprod {
namespace {

constexpr double kGammaRelTolerance = 1e-12;

void check_factor(Complex z, const char* label) {
  if (is_gamma_pole(z)) {
    std::ostringstream os;
    os << "factor " << label << " has argument " << z;
    throw Error(ErrorKind::PoleArgument, os.str());
  }
}

double imaginary_abs(const SeriesParam& lam) {
  if (!lam.is_principal()) {
    throw Error(ErrorKind::PreconditionViolated, "envelope needs purely imaginary λ");
  }
  const double t = std::abs(lam.lambda().imag());
  if (!(t >= 1.0)) throw Error(ErrorKind::DomainTooSmall, "envelope needs |λ| >= 1");
  return t;
}

}  // namespace

LogGammaResult closed_form_A_log(const SeriesParam& l1, const SeriesParam& l2,
                                 const SeriesParam& l3) {
  const ExponentQuadruple e = exponents(l1, l2, l3);
  const std::array<Complex, 4> num = {(e.alpha + 1.0) / 4.0, (e.beta + 1.0) / 4.0,
                                      (e.gamma + 1.0) / 4.0, (e.delta + 1.0) / 4.0};
  const std::array<Complex, 6> den = {0.5, 0.5, 0.5, (1.0 - l1.lambda()) / 2.0,
                                      (1.0 - l2.lambda()) / 2.0, (1.0 - l3.lambda()) / 2.0};
  check_factor(num[0], "Γ((α+1)/4)");
  check_factor(num[1], "Γ((β+1)/4)");
  check_factor(num[2], "Γ((γ+1)/4)");
  check_factor(num[3], "Γ((δ+1)/4)");
  // A pole in the denominator makes A vanish; log space cannot hold that.
  check_factor(den[3], "1/Γ((1-λ1)/2)");
  check_factor(den[4], "1/Γ((1-λ2)/2)");
  check_factor(den[5], "1/Γ((1-λ3)/2)");
  // A is symmetric; evaluate in a canonical order so permuted arguments
  // give bit-identical results.
  std::array<Complex, 3> l{l1.lambda(), l2.lambda(), l3.lambda()};
  std::sort(l.begin(), l.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  const ExponentQuadruple s = exponents(l[0], l[1], l[2]);
  const std::array<Complex, 4> snum = {(s.alpha + 1.0) / 4.0, (s.beta + 1.0) / 4.0,
                                       (s.gamma + 1.0) / 4.0, (s.delta + 1.0) / 4.0};
  const std::array<Complex, 6> sden = {0.5, 0.5, 0.5, (1.0 - l[0]) / 2.0, (1.0 - l[1]) / 2.0,
                                       (1.0 - l[2]) / 2.0};
  return gamma_product_log(snum, sden);
}

Estimate closed_form_A(const SeriesParam& l1, const SeriesParam& l2, const SeriesParam& l3) {
  const LogGammaResult lg = closed_form_A_log(l1, l2, l3);
  Estimate est;
  est.value = lg.value();
  est.error_bound = 10.0 * kGammaRelTolerance * std::abs(est.value);
  est.method = "closed_form";
  est.cost = 10;
  return est;
}

double log_k_lambda(const SeriesParam& tau, const SeriesParam& tau_prime, const SeriesParam& lam) {
  return 2.0 * closed_form_A_log(tau, tau_prime, lam).log_modulus;
}

double k_lambda(const SeriesParam& tau, const SeriesParam& tau_prime, const SeriesParam& lam) {
  return std::exp(log_k_lambda(tau, tau_prime, lam));
}

double log_asymptotic_envelope(const SeriesParam& lam) {
  const double t = imaginary_abs(lam);
  return -0.5 * std::numbers::pi * t - 2.0 * std::log(t);
}

double asymptotic_envelope(const SeriesParam& lam) {
  return std::exp(log_asymptotic_envelope(lam));
}

double normalized_decay(const SeriesParam& tau, const SeriesParam& tau_prime,
                        const SeriesParam& lam) {
  return std::exp(log_k_lambda(tau, tau_prime, lam) - log_asymptotic_envelope(lam));
}

DecayScan decay_scan(const SeriesParam& tau, const SeriesParam& tau_prime,
                     std::span<const double> abs_lambda_ladder) {
  DecayScan scan;
  for (double t : abs_lambda_ladder) {
    scan.abs_lambda.push_back(t);
    scan.normalized.push_back(normalized_decay(tau, tau_prime, SeriesParam::principal(t)));
  }
  for (std::size_t i = 1; i < scan.normalized.size(); ++i) {
    scan.rel_differences.push_back(std::abs(scan.normalized[i] - scan.normalized[i - 1]) /
                                   std::abs(scan.normalized[i]));
  }
  const std::size_t n = scan.normalized.size();
  if (n == 0) return scan;
  if (n == 1) {
    scan.c_estimate = scan.normalized[0];
    scan.c_error = std::numeric_limits<double>::infinity();
    return scan;
  }
  // Neville's scheme for the interpolating polynomial in x = 1/|λ| at x = 0.
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / scan.abs_lambda[i];
  std::vector<double> p = scan.normalized;
  double previous = p[n - 1];
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i]);
    }
    if (level + 1 < n) previous = p[1];
  }
  scan.c_estimate = p[0];
  scan.c_error = std::abs(p[0] - previous);
  scan.extrapolated = true;
  return scan;
}

}  // namespace triprod
