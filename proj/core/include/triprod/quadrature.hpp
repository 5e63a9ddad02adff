#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "triprod/estimate.hpp"

namespace triprod {

enum class QuadratureScheme {
  /// Geometrically graded panels toward every singular point, Gauss-Legendre
  /// on each panel.
  graded_mesh,
  /// Split at every singular point, tanh-sinh on each piece.
  singularity_split,
  /// Fourier-series convolution of |sin|^s expansions with tail
  /// extrapolation.  Only meaningful for Fourier-mode test vectors.
  modal_series,
};

std::string_view to_string(QuadratureScheme scheme) noexcept;
QuadratureScheme parse_quadrature_scheme(std::string_view name);

struct QuadratureConfig {
  QuadratureScheme scheme = QuadratureScheme::graded_mesh;
  int points_per_panel = 8;
  /// Number of refinements after the base rule; the a-posteriori error is
  /// read off the last two.
  int refinement_levels = 4;
  double target_rel_error = 1e-8;

  /// Throws Error{PreconditionViolated} on a nonsensical configuration.
  void validate() const;
};

/// Quadrature node on an interval [0, L] whose ends may both be singular.
/// Both distances are stored so that neither suffers cancellation near
/// its own end.
struct EndpointNode {
  double from_left;
  double from_right;
  double weight;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n);

struct GradedRuleParams {
  double ratio = 0.15;        // geometric grading factor
  int depth = 12;             // panels between the midpoint and each end
  int points = 8;             // Gauss points per panel
  double max_panel = 1e300;   // panels longer than this are subdivided
};

/// Composite Gauss rule on [0, L], graded geometrically toward both ends.
std::vector<EndpointNode> graded_rule(double length, const GradedRuleParams& p,
                                      const GaussLegendre& gl);

struct TanhSinhParams {
  double step = 0.25;
  int pieces = 1;  // equal subintervals, each with its own tanh-sinh rule
};

/// Tanh-sinh rule on [0, L].  Nodes closer than ~1e-290 to an end are dropped.
std::vector<EndpointNode> tanh_sinh_rule(double length, const TanhSinhParams& p);

/// Sum in a fixed binary tree so the result does not depend on how the
/// terms were produced.
Complex pairwise_sum(std::span<const Complex> terms);
double pairwise_sum(std::span<const double> terms);

/// Runs body(i) for i in [0, n), possibly on several threads.  Each index is
/// visited exactly once; callers write results into per-index slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace triprod
