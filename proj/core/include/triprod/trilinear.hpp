#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "triprod/circle_function.hpp"
#include "triprod/estimate.hpp"
#include "triprod/kernel.hpp"
#include "triprod/quadrature.hpp"
#include "triprod/specfun.hpp"

namespace triprod {

// ---------------------------------------------------------------------------
// Invariant functional on homogeneous functions of degree -2.

struct Contour {
  enum class Kind { unit_circle, ellipse } kind = Kind::unit_circle;
  double a = 1.0;
  double b = 1.0;

  static Contour unit_circle() { return {}; }
  static Contour ellipse(double a, double b);
};

using PlaneFunction = std::function<Complex(PlanePoint)>;

/// (1/2π) ∮ f (x dy - y dx) along the contour.  For f of degree -2 the
/// value does not depend on the contour; 1/(x²+y²) maps to 1.
/// Periodic trapezoid rule, doubled until two successive values agree.
Estimate invariant_L(const PlaneFunction& f, Contour contour = Contour::unit_circle(),
                     double target_rel_error = 1e-12);

// ---------------------------------------------------------------------------
// Closed form and its asymptotics.

/// log A(λ1,λ2,λ3).  Throws Error{PoleArgument} naming the offending factor.
LogGammaResult closed_form_A_log(const SeriesParam& l1, const SeriesParam& l2,
                                 const SeriesParam& l3);

Estimate closed_form_A(const SeriesParam& l1, const SeriesParam& l2, const SeriesParam& l3);

/// |A(τ, τ', λ)|².
double k_lambda(const SeriesParam& tau, const SeriesParam& tau_prime, const SeriesParam& lam);
double log_k_lambda(const SeriesParam& tau, const SeriesParam& tau_prime, const SeriesParam& lam);

/// exp(-π|λ|/2) |λ|^{-2}.  λ must be purely imaginary with |λ| >= 1.
double asymptotic_envelope(const SeriesParam& lam);
double log_asymptotic_envelope(const SeriesParam& lam);

/// k_λ / envelope, formed in log space.
double normalized_decay(const SeriesParam& tau, const SeriesParam& tau_prime,
                        const SeriesParam& lam);

struct DecayScan {
  std::vector<double> abs_lambda;
  std::vector<double> normalized;
  /// Relative difference |r_{n+1} - r_n| / |r_{n+1}|; one shorter than normalized.
  std::vector<double> rel_differences;
  double c_estimate = 0.0;
  double c_error = 0.0;
  bool extrapolated = false;
};

/// Normalized decay along λ = i|λ| for every rung, and the limit
/// constant extrapolated polynomially in 1/|λ|.  A single rung is reported
/// without extrapolation (c_error is then infinite).
DecayScan decay_scan(const SeriesParam& tau, const SeriesParam& tau_prime,
                     std::span<const double> abs_lambda_ladder);

// ---------------------------------------------------------------------------
// Triple integral over (S¹)³.

/// G(y, z) = Σ g(n, k) e^{2iny} e^{2ikz} for n in [n_lo, n_lo + rows), k in
/// [k_lo, k_lo + cols).
struct ModalWeight {
  int n_lo = 0;
  int k_lo = 0;
  Eigen::MatrixXcd g;

  static ModalWeight single(int n, int k, Complex value = 1.0);
  int max_abs_mode() const;
};

/// π^{-2} ∫∫_{[0,π)²} G(y,z) f(0, y, z) dy dz with the circle-model kernel f.
/// Each integral over (S¹)³ with translation-invariant kernel reduces to this.
Estimate reduced_torus_integral(const ModalWeight& weight, const ExponentQuadruple& e,
                                const QuadratureConfig& cfg);

/// (2π)^{-3} ∭ f1(x) f2(y) f3(z) K(x, y, z) dx dy dz.
Estimate model_triple_quadrature(const CircleFunction& f1, const CircleFunction& f2,
                                 const CircleFunction& f3, const SeriesParam& l1,
                                 const SeriesParam& l2, const SeriesParam& l3,
                                 const QuadratureConfig& cfg = {});

/// The functional on e^{imx} ⊗ e^{iny} ⊗ e^{ikz}; m, n, k are even frequencies.
/// Zero unless m + n + k = 0.
Estimate tmatrix_element(int m, int n, int k, const SeriesParam& l1, const SeriesParam& l2,
                         const SeriesParam& l3, const QuadratureConfig& cfg = {});

/// Throws Error{PreconditionViolated} unless Re α, Re β, Re γ, Re δ > -1.
void require_absolute_convergence(const ExponentQuadruple& e);

/// Reduced integrals on single Fourier modes, computed from the Fourier
/// expansions of the three |sin|^p factors.  The mode sum converges like
/// R^{-(1+δ)/2} and its tail is removed by extrapolation on R = R0·2^i.
/// Cheap per element, so used for assembling large forms.
class ModalSeriesTable {
 public:
  /// max_mode bounds |n| and |k| of every later element() call.
  ModalSeriesTable(const ExponentQuadruple& e, int max_mode);

  /// Reduced integral with weight e^{2iny} e^{2ikz}.
  Estimate element(int n, int k) const;

 private:
  int r0_;
  int r_max_;
  Complex tail_exponent_;
  std::vector<Complex> ca_;
  std::vector<Complex> cb_;
  std::vector<Complex> cg_;
};

/// Fourier coefficients of |sin θ|^s on e^{2ijθ}, j = 0..count-1 (even in j).
std::vector<Complex> abs_sin_power_coefficients(Complex s, int count);

}  // namespace triprod
