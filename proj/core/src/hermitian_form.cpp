#include <algorithm>
#include <cmath>
#include <memory>

#include <Eigen/Eigenvalues>

#include "triprod/specdecomp.hpp"
#include "triprod/trilinear.hpp"

namespace triprod {

namespace {

// Dense eigen solves above this dimension would need gigabytes.
constexpr Eigen::Index kDenseLimit = 4000;

}  // namespace

HermitianForm HermitianForm::from_matrix(Eigen::SparseMatrix<Complex> m, int truncation) {
  const Eigen::Index dim = static_cast<Eigen::Index>(2 * truncation + 1) * (2 * truncation + 1);
  if (m.rows() != m.cols()) throw Error(ErrorKind::PreconditionViolated, "form matrix not square");
  if (m.rows() != dim) throw Error(ErrorKind::PreconditionViolated, "form matrix size != (2N+1)^2");
  HermitianForm h;
  h.storage_ = Storage::matrix;
  h.truncation_ = truncation;
  m.makeCompressed();
  h.matrix_ = std::move(m);
  return h;
}

HermitianForm HermitianForm::from_dense(const Eigen::MatrixXcd& m, int truncation) {
  return from_matrix(m.sparseView(0.0, 0.0), truncation);
}

HermitianForm HermitianForm::from_gram(Eigen::MatrixXcd rows, int truncation) {
  const Eigen::Index dim = static_cast<Eigen::Index>(2 * truncation + 1) * (2 * truncation + 1);
  if (rows.cols() != dim) throw Error(ErrorKind::PreconditionViolated, "Gram factor width != (2N+1)^2");
  HermitianForm h;
  h.storage_ = Storage::gram;
  h.truncation_ = truncation;
  h.rows_ = std::move(rows);
  return h;
}

Eigen::Index HermitianForm::dimension() const {
  return static_cast<Eigen::Index>(2 * truncation_ + 1) * (2 * truncation_ + 1);
}

const Eigen::SparseMatrix<Complex>& HermitianForm::matrix() const {
  if (storage_ != Storage::matrix) throw Error(ErrorKind::PreconditionViolated, "form stored as Gram factor");
  return matrix_;
}

const Eigen::MatrixXcd& HermitianForm::gram_rows() const {
  if (storage_ != Storage::gram) throw Error(ErrorKind::PreconditionViolated, "form stored as matrix");
  return rows_;
}

Eigen::MatrixXcd HermitianForm::dense() const {
  if (dimension() > kDenseLimit) throw Error(ErrorKind::PreconditionViolated, "form too large for dense()");
  if (storage_ == Storage::gram) return rows_.adjoint() * rows_;
  return Eigen::MatrixXcd(matrix_);
}

double HermitianForm::value(const Eigen::VectorXcd& v) const {
  if (v.size() != dimension()) throw Error(ErrorKind::PreconditionViolated, "vector size mismatch");
  if (storage_ == Storage::gram) return (rows_ * v).squaredNorm();
  return std::real(v.dot(matrix_ * v));
}

double HermitianForm::trace() const {
  if (storage_ == Storage::gram) return rows_.squaredNorm();
  double t = 0.0;
  for (Eigen::Index k = 0; k < matrix_.rows(); ++k) t += std::real(matrix_.coeff(k, k));
  return t;
}

double HermitianForm::hermitian_defect() const {
  if (storage_ == Storage::gram) return 0.0;
  const Eigen::SparseMatrix<Complex> diff = matrix_ - Eigen::SparseMatrix<Complex>(matrix_.adjoint());
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(diff, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

double HermitianForm::min_eigenvalue() const {
  if (storage_ == Storage::gram) {
    const Eigen::MatrixXcd small = rows_ * rows_.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(small, Eigen::EigenvaluesOnly);
    const double lo = small.rows() > 0 ? es.eigenvalues().minCoeff() : 0.0;
    // Fewer rows than columns leaves a kernel.
    return rows_.rows() < dimension() ? std::min(lo, 0.0) : lo;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

HermitianForm HermitianForm::scaled(double s) const {
  HermitianForm h = *this;
  if (storage_ == Storage::gram) {
    if (s < 0.0) throw Error(ErrorKind::PreconditionViolated, "Gram form scaled by a negative number");
    h.rows_ *= std::sqrt(s);
  } else {
    h.matrix_ *= Complex(s);
  }
  return h;
}

HermitianForm hmod_form(const SeriesParam& lam, const SeriesParam& tau, const SeriesParam& tau_prime,
                        int truncation, int k_modes, const QuadratureConfig& cfg,
                        HmodDiagnostics* diagnostics) {
  if (truncation < 0 || k_modes < 0) throw Error(ErrorKind::PreconditionViolated, "negative truncation");
  cfg.validate();
  const int n_max = truncation;
  const ExponentQuadruple e = exponents(tau, tau_prime, lam);
  require_absolute_convergence(e);

  std::unique_ptr<ModalSeriesTable> table;
  if (cfg.scheme == QuadratureScheme::modal_series) {
    table = std::make_unique<ModalSeriesTable>(e, std::max(n_max, k_modes));
  }

  // Row k holds l(e_m ⊗ e_n ⊗ e_k) on the column of (m, n), m = -n-k.
  struct Slot {
    int k;
    int n;
  };
  std::vector<Slot> slots;
  for (int k = -k_modes; k <= k_modes; ++k) {
    for (int n = -n_max; n <= n_max; ++n) {
      const int m = -n - k;
      if (m >= -n_max && m <= n_max) slots.push_back({k, n});
    }
  }
  std::vector<Estimate> values(slots.size());
  parallel_for(slots.size(), [&](std::size_t s) {
    const Slot sl = slots[s];
    values[s] = table ? table->element(sl.n, sl.k)
                      : tmatrix_element(2 * (-sl.n - sl.k), 2 * sl.n, 2 * sl.k, tau, tau_prime, lam, cfg);
  });

  Eigen::MatrixXcd rows = Eigen::MatrixXcd::Zero(2 * k_modes + 1,
                                                 static_cast<Eigen::Index>(2 * n_max + 1) * (2 * n_max + 1));
  HmodDiagnostics diag;
  double boundary = 0.0;
  double total = 0.0;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const Slot sl = slots[s];
    rows(sl.k + k_modes, pair_index(-sl.n - sl.k, sl.n, n_max)) = values[s].value;
    const double w = std::norm(values[s].value);
    total += w;
    if (std::abs(sl.k) == k_modes) boundary += w;
    diag.max_element_error = std::max(diag.max_element_error, values[s].error_bound);
  }
  diag.elements = static_cast<std::int64_t>(slots.size());
  diag.boundary_trace_fraction = total > 0.0 ? boundary / total : 0.0;
  if (diagnostics) *diagnostics = diag;
  return HermitianForm::from_gram(std::move(rows), n_max);
}

}  // namespace triprod
