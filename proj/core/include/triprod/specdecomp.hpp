#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "triprod/circle_function.hpp"
#include "triprod/estimate.hpp"
#include "triprod/kernel.hpp"
#include "triprod/quadrature.hpp"

namespace triprod {

// ---------------------------------------------------------------------------
// Group action on the circle model.

/// Real 2×2 matrix [[a, b], [c, d]] acting on column vectors; scalar
/// multiples act identically.
struct GroupElement {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;

  static GroupElement identity() { return {}; }
  static GroupElement rotation(double phi);
  static GroupElement diagonal(double s, double t) { return {s, 0.0, 0.0, t}; }

  double det() const { return a * d - b * c; }
  /// Operator 2-norm of g / sqrt|det g|.
  double norm() const;
  GroupElement inverse() const;
  GroupElement operator*(const GroupElement& o) const;
  PlanePoint apply(PlanePoint p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
};

/// (π_λ(g)φ)(θ) for a function φ on the circle, evaluated pointwise:
/// g^{-1}s(θ) = ρ s(θ') gives |det g|^{(λ-1)/2} ρ^{λ-1} φ(θ').
Complex act_pointwise(const GroupElement& g, const SeriesParam& lam,
                      const std::function<Complex(double)>& phi, double theta);

struct GroupActionResult {
  CircleFunction function;  // truncated at the input's max_mode
  double tail_energy = 0.0;  // Σ |c_j|² over the dropped modes
  double total_energy = 0.0;
};

/// π_λ(g) f with the result truncated at f.max_mode().  Throws
/// Error{TruncationOverflow} if the dropped modes carry more than 1% of
/// the energy.
GroupActionResult group_action(const GroupElement& g, const SeriesParam& lam, const CircleFunction& f);

// ---------------------------------------------------------------------------
// Lie algebra generators.

/// Basis of sl₂: H = diag(1, -1), S = [[0, 1], [1, 0]], W = [[0, -1], [1, 0]].
enum class Generator { H, S, W };

/// d/dt π_λ(exp tX)|_{t=0} as a ((2N+3) × (2N+1)) matrix from modes
/// |j| <= N to modes |j| <= N+1.  On e_j = e^{2ijθ}:
///   W e_j = -2ij e_j,
///   H e_j = -(λ-1-2j)/2 e_{j+1} - (λ-1+2j)/2 e_{j-1},
///   S e_j = i(λ-1-2j)/2 e_{j+1} - i(λ-1+2j)/2 e_{j-1}.
Eigen::SparseMatrix<Complex> generator_matrix(Generator x, const SeriesParam& lam, int max_mode);

// ---------------------------------------------------------------------------
// Hermitian forms on V_N ⊗ V_N, basis index (m+N)(2N+1) + (n+N).

class HermitianForm {
 public:
  enum class Storage { matrix, gram };

  HermitianForm() = default;
  static HermitianForm from_matrix(Eigen::SparseMatrix<Complex> m, int truncation);
  static HermitianForm from_dense(const Eigen::MatrixXcd& m, int truncation);
  /// H = F* F, i.e. H(v) = Σ_k |(F v)_k|².  Positive semidefinite exactly.
  static HermitianForm from_gram(Eigen::MatrixXcd rows, int truncation);

  Storage storage() const { return storage_; }
  int truncation() const { return truncation_; }
  Eigen::Index dimension() const;

  const Eigen::SparseMatrix<Complex>& matrix() const;
  const Eigen::MatrixXcd& gram_rows() const;
  Eigen::MatrixXcd dense() const;

  /// v* H v.
  double value(const Eigen::VectorXcd& v) const;
  double trace() const;
  /// max |H - H*| entry; 0 for Gram storage.
  double hermitian_defect() const;
  /// Smallest eigenvalue (dense solve for matrix storage; Gram storage uses
  /// the eigenvalues of F F*).
  double min_eigenvalue() const;

  HermitianForm scaled(double s) const;

 private:
  Storage storage_ = Storage::matrix;
  int truncation_ = 0;
  Eigen::SparseMatrix<Complex> matrix_;
  Eigen::MatrixXcd rows_;
};

inline Eigen::Index pair_index(int m, int n, int truncation) {
  return static_cast<Eigen::Index>(m + truncation) * (2 * truncation + 1) + (n + truncation);
}

struct HmodDiagnostics {
  /// Share of trace(H) carried by the outermost target modes |k| = K.
  double boundary_trace_fraction = 0.0;
  double max_element_error = 0.0;
  std::int64_t elements = 0;
};

/// u -> Σ_{|k| <= K} |l(u ⊗ e_k)|² for the model functional on
/// V_τ ⊗ V_τ' ⊗ V_λ, with u truncated at N.  Only k = -(m+n) contributes
/// to the row of e_m ⊗ e_n.
HermitianForm hmod_form(const SeriesParam& lam, const SeriesParam& tau, const SeriesParam& tau_prime,
                        int truncation, int k_modes, const QuadratureConfig& cfg,
                        HmodDiagnostics* diagnostics = nullptr);

/// Σ_{|ν| <= l} T^{2(l-|ν|)} ‖X^ν v‖² over ordered words in the six
/// generators of sl₂ × sl₂ (H, S, W per factor, first factor first).
HermitianForm sobolev_form(int l, double T, const SeriesParam& tau, const SeriesParam& tau_prime,
                           int truncation);

enum class RelativeTraceMethod { triangular, eigen };

/// tr(H | Q): trace of H in a Q-orthonormal basis.  The triangular route
/// uses a sparse Cholesky factor of Q; the eigen route solves the
/// generalized eigenproblem (or, for Gram forms, diagonalizes F Q^{-1} F*
/// with an LDLᵀ solve).  Throws Error{QNotPositiveDefinite}.
double relative_trace(const HermitianForm& h, const HermitianForm& q,
                      RelativeTraceMethod method = RelativeTraceMethod::triangular);

struct SobolevTrace {
  double rho = 0.0;
  double rho_times_T2l = 0.0;
  Eigen::Index dimension = 0;
  HmodDiagnostics hmod;
};

/// ρ = tr(H^mod_λ | Q_{l,T}) on V_N ⊗ V_N.
SobolevTrace sobolev_test_functional(int l, double T, const SeriesParam& lam, const SeriesParam& tau,
                                     const SeriesParam& tau_prime, int truncation, int k_modes,
                                     const QuadratureConfig& cfg = {QuadratureScheme::modal_series});

// ---------------------------------------------------------------------------
// Bump vector and the local lower bound.

/// Smooth bump C exp(-1/(1-(r/ρ)²)) on the torus [0,π)², radius ρ = 1/(100T),
/// unit mass for dx dy.  Fourier coefficients are computed on demand.
class BumpVector {
 public:
  BumpVector(double T, int truncation, PlanePoint center);

  double T() const { return T_; }
  double radius() const { return radius_; }
  PlanePoint center() const { return center_; }
  int truncation() const { return truncation_; }

  /// Exact value at a torus point.
  double operator()(double x, double y) const;
  /// Radial profile at distance r from the center.
  double radial(double r) const;
  /// Coefficient on e^{2i(mx+ny)} for the measure dx dy / π².
  Complex coefficient(int m, int n) const;
  /// ∫ u dx dy recovered from the truncated series (π² c_00).
  double truncated_mass() const { return std::real(coefficient(0, 0)) * std::numbers::pi * std::numbers::pi; }
  /// ∫ u² dx dy.
  double l2_norm_squared() const { return l2_squared_; }

  /// Materialized coefficients with the exact evaluator attached.  Throws
  /// Error{PreconditionViolated} when (2N+1)² exceeds max_coefficients.
  BiCircleFunction as_bicircle(std::int64_t max_coefficients = 4'000'000) const;

 private:
  double hankel(std::int64_t mode_sq) const;

  double T_;
  double radius_;
  PlanePoint center_;
  int truncation_;
  double normalization_;
  double l2_squared_;
  std::vector<double> nodes_;    // radial Gauss nodes on [0, ρ]
  std::vector<double> weights_;  // times r u(r)
};

/// Throws Error{InsufficientTruncation} unless N >= 400 T, and
/// Error{PreconditionViolated} for T < 1.
BumpVector bump_vector(double T, int truncation, PlanePoint center = {std::numbers::pi / 3.0,
                                                                        2.0 * std::numbers::pi / 3.0});

struct PairingSetup {
  SeriesParam tau;
  SeriesParam tau_prime;
  SeriesParam lam;
  double z = 0.0;
  double T = 4.0;
  PlanePoint center{std::numbers::pi / 3.0, 2.0 * std::numbers::pi / 3.0};
};

struct PairingResult {
  double pairing = 0.0;        // |⟨Π(g)f, u⟩|
  double sup_on_support = 0.0; // max |Π(g)f| over the sample nodes
  double max_gradient = 0.0;   // max |∇ Π(g)f| over the sample nodes
  bool in_d0 = false;          // sup <= 10
  bool singular = false;       // a singular line of Π(g)f meets the disc
};

/// f(x, y) = restricted kernel with third angle z, viewed in V_{-τ} ⊗ V_{-τ'}
/// (its homogeneity as a kernel), acted on by (g1, g2) and paired with the
/// bump by polar Gauss quadrature on the support disc.  The discrete
/// weights are normalized to total mass 1.
PairingResult pairing_test(const std::array<GroupElement, 2>& g, const PairingSetup& setup);

struct D0Search {
  std::vector<std::array<GroupElement, 2>> probes;
  std::vector<PairingResult> results;
  std::size_t best = 0;                 // largest pairing among D0 members
  std::size_t count_at_least_half = 0;  // D0 members with pairing >= 1/2
  std::size_t holder_violations = 0;    // over every non-singular probe
  std::size_t d0_members = 0;
  std::size_t d0_gradient_above_3T = 0;  // D0 members with max |∇Π(g)f| > 3T
};

/// Identity plus `random_probes` random pairs with ‖g_i‖ <= 2 (g = k diag(a, 1/a) k').
D0Search search_region_D(const PairingSetup& setup, int random_probes, std::uint64_t seed);

/// |Σ h_i u_i ν_i| for samples of u >= 0 with Σ u ν = 1, sup|h| >= 1 and
/// max |h_i - h_j| <= 1/2.  Throws Error{PreconditionViolated} when a
/// hypothesis fails (tolerance 1e-9).
double variation_claim_check(std::span<const double> u, std::span<const Complex> h,
                             std::span<const double> nu);

}  // namespace triprod
