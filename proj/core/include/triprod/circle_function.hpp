#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "triprod/estimate.hpp"

namespace triprod {

/// Even function on S¹ stored by its coefficients on e^{2ijθ}, |j| <= max_mode.
/// "Mode j" always means frequency 2j.
class CircleFunction {
 public:
  explicit CircleFunction(int max_mode = 0);
  CircleFunction(int max_mode, std::vector<Complex> coeffs);

  static CircleFunction constant(Complex c = 1.0);
  static CircleFunction mode(int j, Complex c = 1.0);

  /// Coefficients of θ -> f(θ) by an M-point DFT over [0, π), M >= 2*(2N+1).
  static CircleFunction from_samples(const std::function<Complex(double)>& f, int max_mode,
                                     int samples = 0);

  int max_mode() const { return max_mode_; }
  Complex coeff(int j) const;
  Complex& coeff_ref(int j);
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  Complex operator()(double theta) const;

  /// Norm in L²(dθ/2π), by Parseval.
  double l2_norm() const;

  /// Same function with coefficients outside |j| <= n dropped or zero padded.
  CircleFunction truncated(int n) const;

  CircleFunction& operator+=(const CircleFunction& other);
  CircleFunction& operator*=(Complex s);
  friend CircleFunction operator+(CircleFunction a, const CircleFunction& b) { return a += b; }
  friend CircleFunction operator*(CircleFunction a, Complex s) { return a *= s; }
  friend CircleFunction operator*(Complex s, CircleFunction a) { return a *= s; }

 private:
  int max_mode_;
  std::vector<Complex> coeffs_;
};

/// Even-even function on S¹×S¹: coefficients c(m, n) on e^{2i(mx+ny)},
/// |m|, |n| <= max_mode.  An exact pointwise evaluator may be attached when
/// the function is known in closed form (the coefficients are then only its
/// truncation).
class BiCircleFunction {
 public:
  using Evaluator = std::function<Complex(double, double)>;

  explicit BiCircleFunction(int max_mode = 0);
  BiCircleFunction(int max_mode, Eigen::MatrixXcd coeffs, Evaluator exact = {});

  int max_mode() const { return max_mode_; }
  Complex coeff(int m, int n) const;
  const Eigen::MatrixXcd& coeffs() const { return coeffs_; }

  /// Exact evaluator if attached, otherwise the truncated Fourier sum.
  Complex operator()(double x, double y) const;
  Complex series_value(double x, double y) const;
  bool has_exact_evaluator() const { return static_cast<bool>(exact_); }

  /// Norm in L²(dx dy / π²) of the truncated series.
  double l2_norm() const;

  /// Coefficients flattened as index (m+N)(2N+1) + (n+N).
  Eigen::VectorXcd flattened() const;

 private:
  int max_mode_;
  Eigen::MatrixXcd coeffs_;
  Evaluator exact_;
};

}  // namespace triprod
