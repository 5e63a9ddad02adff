#include "triprod/circle_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace triprod {

CircleFunction::CircleFunction(int max_mode)
    : max_mode_(max_mode), coeffs_(2 * static_cast<std::size_t>(max_mode) + 1) {
  if (max_mode < 0) throw Error(ErrorKind::PreconditionViolated, "max_mode must be >= 0");
}

CircleFunction::CircleFunction(int max_mode, std::vector<Complex> coeffs)
    : max_mode_(max_mode), coeffs_(std::move(coeffs)) {
  if (max_mode < 0 || coeffs_.size() != 2 * static_cast<std::size_t>(max_mode) + 1) {
    throw Error(ErrorKind::PreconditionViolated, "coefficient count must be 2*max_mode+1");
  }
}

CircleFunction CircleFunction::constant(Complex c) { return CircleFunction(0, {c}); }

CircleFunction CircleFunction::mode(int j, Complex c) {
  CircleFunction f(std::abs(j));
  f.coeff_ref(j) = c;
  return f;
}

CircleFunction CircleFunction::from_samples(const std::function<Complex(double)>& f, int max_mode,
                                            int samples) {
  const int m = std::max(samples, 4 * max_mode + 4);
  std::vector<Complex> values(m);
  for (int s = 0; s < m; ++s) values[s] = f(std::numbers::pi * s / m);
  CircleFunction out(max_mode);
  for (int j = -max_mode; j <= max_mode; ++j) {
    Complex acc = 0.0;
    for (int s = 0; s < m; ++s) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((static_cast<long long>(j) * s) % m) / m;
      acc += values[s] * std::polar(1.0, phase);
    }
    out.coeff_ref(j) = acc / static_cast<double>(m);
  }
  return out;
}

Complex CircleFunction::coeff(int j) const {
  if (j < -max_mode_ || j > max_mode_) return 0.0;
  return coeffs_[j + max_mode_];
}

Complex& CircleFunction::coeff_ref(int j) {
  if (j < -max_mode_ || j > max_mode_) {
    throw Error(ErrorKind::PreconditionViolated, "mode outside truncation");
  }
  return coeffs_[j + max_mode_];
}

Complex CircleFunction::operator()(double theta) const {
  const Complex step = std::polar(1.0, 2.0 * theta);
  Complex up = 1.0;
  Complex acc = coeffs_[max_mode_];
  for (int j = 1; j <= max_mode_; ++j) {
    up *= step;
    acc += coeffs_[max_mode_ + j] * up + coeffs_[max_mode_ - j] * std::conj(up);
  }
  return acc;
}

double CircleFunction::l2_norm() const {
  double s = 0.0;
  for (const Complex& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

CircleFunction CircleFunction::truncated(int n) const {
  CircleFunction out(n);
  for (int j = -std::min(n, max_mode_); j <= std::min(n, max_mode_); ++j) out.coeff_ref(j) = coeff(j);
  return out;
}

CircleFunction& CircleFunction::operator+=(const CircleFunction& other) {
  if (other.max_mode_ > max_mode_) *this = truncated(other.max_mode_);
  for (int j = -other.max_mode_; j <= other.max_mode_; ++j) coeffs_[j + max_mode_] += other.coeff(j);
  return *this;
}

CircleFunction& CircleFunction::operator*=(Complex s) {
  for (Complex& c : coeffs_) c *= s;
  return *this;
}

BiCircleFunction::BiCircleFunction(int max_mode)
    : max_mode_(max_mode), coeffs_(Eigen::MatrixXcd::Zero(2 * max_mode + 1, 2 * max_mode + 1)) {}

BiCircleFunction::BiCircleFunction(int max_mode, Eigen::MatrixXcd coeffs, Evaluator exact)
    : max_mode_(max_mode), coeffs_(std::move(coeffs)), exact_(std::move(exact)) {
  if (coeffs_.rows() != 2 * max_mode + 1 || coeffs_.cols() != 2 * max_mode + 1) {
    throw Error(ErrorKind::PreconditionViolated, "coefficient matrix must be (2N+1)x(2N+1)");
  }
}

Complex BiCircleFunction::coeff(int m, int n) const {
  if (std::abs(m) > max_mode_ || std::abs(n) > max_mode_) return 0.0;
  return coeffs_(m + max_mode_, n + max_mode_);
}

Complex BiCircleFunction::series_value(double x, double y) const {
  const int size = 2 * max_mode_ + 1;
  Eigen::VectorXcd ex(size);
  Eigen::VectorXcd ey(size);
  for (int j = -max_mode_; j <= max_mode_; ++j) {
    ex(j + max_mode_) = std::polar(1.0, 2.0 * j * x);
    ey(j + max_mode_) = std::polar(1.0, 2.0 * j * y);
  }
  return ex.transpose() * coeffs_ * ey;
}

Complex BiCircleFunction::operator()(double x, double y) const {
  return exact_ ? exact_(x, y) : series_value(x, y);
}

double BiCircleFunction::l2_norm() const { return coeffs_.norm(); }

Eigen::VectorXcd BiCircleFunction::flattened() const {
  const int size = 2 * max_mode_ + 1;
  Eigen::VectorXcd v(size * size);
  for (int m = 0; m < size; ++m) {
    for (int n = 0; n < size; ++n) v(m * size + n) = coeffs_(m, n);
  }
  return v;
}

}  // namespace triprod
