#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>

#include "triprod/circle_function.hpp"
#include "triprod/estimate.hpp"
#include "triprod/kernel.hpp"

namespace triprod {

/// Gaussian dG = π^{-n/2} exp(-Q) dl on ℝⁿ, so each coordinate has
/// variance 1/2, sampled with a fixed seed.
struct GaussianSpec {
  int dim = 1;
  std::uint64_t seed = 0;
  std::int64_t samples = 1'000'000;

  void validate() const;
};

/// Samples are grouped in blocks of this size; each block is one stream,
/// and block results are merged in a fixed tree.
inline constexpr std::int64_t kSamplesPerStream = 8192;

using GaussianIntegrand = std::function<Complex(std::span<const double>)>;

/// Mean of value(0..samples-1) with error_bound = 3 standard errors, merged
/// stream by stream in a fixed tree.
Estimate monte_carlo_mean(std::int64_t samples, const std::function<Complex(std::int64_t)>& value);

/// Monte Carlo ⟨f, G⟩ with error_bound = 3 standard errors.  Sample i uses
/// Philox counters (i, j) for its j-th pair of coordinates, so the result is
/// independent of the thread count.  Throws Error{NonFinite} on a
/// non-finite sample.
Estimate gaussian_expect(const GaussianSpec& spec, const GaussianIntegrand& f);

/// The i-th sample of the spec, written to out (size spec.dim).
void gaussian_sample(const GaussianSpec& spec, std::int64_t index, std::span<double> out);

/// ⟨r^s, G⟩ = Γ((s+n)/2)/Γ(n/2), Re s > -n.
Complex classic_radius(int n, Complex s);

/// ⟨|h·x|^s, G⟩ = ‖h‖^s Γ((s+1)/2)/Γ(1/2), Re s > -1.
Complex classic_linear(double h_norm, Complex s);

/// ⟨|det x|^s, G⟩ over 2×2 matrices = Γ((s+1)/2)Γ(s/2+1)/Γ(1/2), Re s > -1.
Complex classic_det(Complex s);

/// ⟨g(r), G⟩ on ℝⁿ by deterministic radial quadrature (t = r², exp-sinh
/// substitution on (0, ∞)).  Cross-check for rotation-invariant integrands.
Estimate radial_expectation(int n, const std::function<Complex(double)>& radial_profile);

/// The three 2×2 minors of the 2×3 matrix with columns s1, s2, s3:
/// (ω(s2,s3), ω(s3,s1), ω(s1,s2)).
std::array<double, 3> minor_map(PlanePoint s1, PlanePoint s2, PlanePoint s3);

struct IdentityCheck {
  Estimate lhs;
  Estimate rhs;
  /// |lhs - rhs| / combined standard error; 0 when both sides agree exactly.
  double z_score() const;
};

/// ⟨h, G⟩ for h ∈ V_{-λ} (degree -λ-1, angular profile h) versus
/// Γ((1-λ)/2) 𝔏(h e_λ).  lhs is Monte Carlo, rhs uses invariant_L.
IdentityCheck corB_check(const SeriesParam& lam, const CircleFunction& h, const GaussianSpec& spec);

/// Same left side as corB_check computed by deterministic radial quadrature
/// times the angular mean.  Independent of the Gamma factor on the right.
Estimate corB_radial_lhs(const SeriesParam& lam, const CircleFunction& h);

/// ⟨ν*(h), G⟩ on 2×3 matrices with h(w) = |w₃|^s, versus ⟨h, G⟩_W Γ(s/2+1).
IdentityCheck comparison_a(Complex s, const GaussianSpec& spec);

/// As comparison_a with h replaced by h∘R for a rotation R of ℝ³ (row major).
IdentityCheck comparison_a_rotated(Complex s, const std::array<double, 9>& rotation,
                                   const GaussianSpec& spec);

enum class PropABSampler {
  /// Plain Gaussian sampling of (s1, s2, s3).  |K| has a tail of index 4/3
  /// from nearly collinear triples, so the reported error bar is unreliable.
  plain_gaussian,
  /// Radii from the Gaussian; the angles of s2 and s3 relative to s1 drawn
  /// with density proportional to |sin|^{-1/2} and reweighted.  The
  /// weighted integrand keeps only logarithmic variance growth.
  angular_importance,
};

/// B = ⟨K(s1,s2,s3), G⟩ on (ℝ²)³ versus A(λ1,λ2,λ3) Π Γ((1-λj)/2).
IdentityCheck propAB_check(const SeriesParam& l1, const SeriesParam& l2, const SeriesParam& l3,
                           const GaussianSpec& spec,
                           PropABSampler sampler = PropABSampler::angular_importance);

}  // namespace triprod
