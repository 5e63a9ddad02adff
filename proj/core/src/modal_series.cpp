#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "triprod/trilinear.hpp"

namespace triprod {
namespace {

constexpr int kLevels = 7;

// Tail removal: S_R = S + Σ_{m<K-1} a_m R^{-(e0+m)} on
// R = R0·2^i.  Returns S from the levels [first, kLevels).
Complex extrapolate(const std::vector<Complex>& partial, Complex e0, int first) {
  const int n = kLevels - first;
  Eigen::MatrixXcd m(n, n);
  Eigen::VectorXcd rhs(n);
  for (int i = 0; i < n; ++i) {
    // Powers of R/R0 keep the columns of comparable size.
    const double x = std::ldexp(1.0, first + i);
    m(i, 0) = 1.0;
    for (int j = 1; j < n; ++j) m(i, j) = std::exp(-(e0 + static_cast<double>(j - 1)) * std::log(x));
    rhs(i) = partial[first + i];
  }
  return m.partialPivLu().solve(rhs)(0);
}

}  // namespace

std::vector<Complex> abs_sin_power_coefficients(Complex s, int count) {
  std::vector<Complex> c(std::max(count, 1));
  const Complex num[] = {(s + 1.0) / 2.0};
  const Complex den[] = {0.5, s / 2.0 + 1.0};
  if (is_gamma_pole(den[1])) {
    std::fill(c.begin(), c.end(), Complex(0.0));
    return c;
  }
  c[0] = gamma_product_log(num, den).value();
  for (int j = 0; j + 1 < count; ++j) {
    c[j + 1] = c[j] * (static_cast<double>(j) - s / 2.0) / (static_cast<double>(j) + 1.0 + s / 2.0);
  }
  return c;
}

ModalSeriesTable::ModalSeriesTable(const ExponentQuadruple& e, int max_mode) {
  require_absolute_convergence(e);
  r0_ = 4 * std::abs(max_mode) + 64;
  r_max_ = r0_ << (kLevels - 1);
  tail_exponent_ = 0.5 * (1.0 + e.delta);
  const int count = r_max_ + 2 * std::abs(max_mode) + 2;
  ca_ = abs_sin_power_coefficients(0.5 * (e.alpha - 1.0), count);
  cb_ = abs_sin_power_coefficients(0.5 * (e.beta - 1.0), count);
  cg_ = abs_sin_power_coefficients(0.5 * (e.gamma - 1.0), count);
}

Estimate ModalSeriesTable::element(int n, int k) const {
  // f(0,y,z) = |sin(y-z)|^{pa} |sin z|^{pb} |sin y|^{pg}; expanding each factor
  // and integrating against e^{2iny} e^{2ikz} leaves a single sum over the
  // mode r of the first factor.
  const auto term = [&](int r) {
    return ca_[std::abs(r)] * cb_[std::abs(r + k)] * cg_[std::abs(r - n)];
  };
  std::vector<Complex> partial(kLevels);
  Complex sum = term(0);
  int done = 0;
  for (int level = 0; level < kLevels; ++level) {
    const int upto = r0_ << level;
    for (int r = done + 1; r <= upto; ++r) sum += term(r) + term(-r);
    done = upto;
    partial[level] = sum;
  }
  const Complex full = extrapolate(partial, tail_exponent_, 0);
  const Complex reduced = extrapolate(partial, tail_exponent_, 1);
  Estimate est;
  est.value = full;
  est.error_bound = std::abs(full - reduced) + 1e-15 * std::abs(full);
  est.method = "modal_series";
  est.cost = 2 * static_cast<std::int64_t>(r_max_) + 1;
  return est;
}

}  // namespace triprod
