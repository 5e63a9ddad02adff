#include <cmath>
#include <numbers>
#include <sstream>

#include "triprod/trilinear.hpp"

namespace triprod {

Estimate invariant_L(const PlaneFunction& f, Contour contour, double target_rel_error) {
  if (!(target_rel_error > 0.0)) {
    throw Error(ErrorKind::PreconditionViolated, "target_rel_error must be > 0");
  }
  const double a = contour.kind == Contour::Kind::ellipse ? contour.a : 1.0;
  const double b = contour.kind == Contour::Kind::ellipse ? contour.b : 1.0;
  // On (a cos θ, b sin θ) the form x dy - y dx is ab dθ.
  const auto sample = [&](double theta) {
    const Complex v = f({a * std::cos(theta), b * std::sin(theta)});
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorKind::NonFinite, "integrand not finite on the contour");
    }
    return v;
  };

  constexpr int kMaxDoublings = 20;
  Estimate est;
  est.method = "periodic_trapezoid";
  int n = 8;
  Complex sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample(2.0 * std::numbers::pi * i / n);
  est.cost = n;
  Complex previous = sum / static_cast<double>(n);
  for (int d = 0; d < kMaxDoublings; ++d) {
    // Midpoints of the current grid.
    Complex extra = 0.0;
    for (int i = 0; i < n; ++i) extra += sample(2.0 * std::numbers::pi * (i + 0.5) / n);
    sum += extra;
    est.cost += n;
    n *= 2;
    const Complex current = sum / static_cast<double>(n);
    est.value = a * b * current;
    est.error_bound = a * b * std::abs(current - previous);
    if (d >= 1 && est.error_bound <= target_rel_error * std::abs(est.value)) return est;
    if (d >= 1 && std::abs(current) == 0.0 && est.error_bound == 0.0) return est;
    previous = current;
  }
  std::ostringstream os;
  os << "trapezoid refinement stalled at relative error " << est.relative_error_bound();
  throw NonConvergentError(os.str(), est);
}

}  // namespace triprod
