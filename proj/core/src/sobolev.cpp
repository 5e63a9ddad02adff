#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <unsupported/Eigen/KroneckerProduct>

#include "triprod/specdecomp.hpp"

namespace triprod {

namespace {

using SpMat = Eigen::SparseMatrix<Complex>;

constexpr Eigen::Index kDenseLimit = 4000;

SpMat identity(Eigen::Index n) {
  SpMat m(n, n);
  m.setIdentity();
  return m;
}

// A = H^a S^b W^c as a map V_N -> V_{N+a+b+c}; W acts first.
SpMat monomial(int a, int b, int c, const SeriesParam& lam, int n) {
  SpMat acc = identity(2 * n + 1);
  int level = n;
  const auto push = [&](Generator x, int times) {
    for (int t = 0; t < times; ++t) {
      acc = generator_matrix(x, lam, level) * acc;
      ++level;
    }
  };
  push(Generator::W, c);
  push(Generator::S, b);
  push(Generator::H, a);
  return acc;
}

// Σ over monomials of degree d of A* A, on V_N.
SpMat degree_block(int d, const SeriesParam& lam, int n) {
  if (d == 0) return identity(2 * n + 1);
  SpMat sum(2 * n + 1, 2 * n + 1);
  for (int a = 0; a <= d; ++a) {
    for (int b = 0; a + b <= d; ++b) {
      const SpMat m = monomial(a, b, d - a - b, lam, n);
      sum += SpMat(m.adjoint()) * m;
    }
  }
  return sum;
}

void require_pd(const HermitianForm& q) {
  if (q.storage() != HermitianForm::Storage::matrix) {
    throw Error(ErrorKind::PreconditionViolated, "Q must be stored as a matrix");
  }
}

[[noreturn]] void not_pd(const char* where) {
  throw Error(ErrorKind::QNotPositiveDefinite, std::string("factorization failed in ") + where);
}

double triangular_trace(const HermitianForm& h, const HermitianForm& q) {
  Eigen::SimplicialLLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> llt(q.matrix());
  if (llt.info() != Eigen::Success) not_pd("LLT");
  if (h.storage() == HermitianForm::Storage::gram) {
    // tr(Q^{-1} F* F) = ‖L^{-1} P F*‖².
    const Eigen::MatrixXcd rhs = llt.permutationP() * h.gram_rows().adjoint();
    const Eigen::MatrixXcd x = llt.matrixL().solve(rhs);
    return x.squaredNorm();
  }
  // Diagonal of Q^{-1} H, one column at a time.
  const SpMat& hm = h.matrix();
  Complex tr = 0.0;
  Eigen::VectorXcd col(hm.rows());
  for (Eigen::Index j = 0; j < hm.cols(); ++j) {
    col = hm.col(j);
    if (col.isZero(0.0)) continue;
    tr += llt.solve(col)(j);
  }
  return std::real(tr);
}

double eigen_trace(const HermitianForm& h, const HermitianForm& q) {
  if (h.storage() == HermitianForm::Storage::gram) {
    // Nonzero spectrum of Q^{-1}H equals that of F Q^{-1} F*.
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(q.matrix());
    if (ldlt.info() != Eigen::Success || (ldlt.vectorD().real().array() <= 0.0).any()) not_pd("LDLT");
    const Eigen::MatrixXcd& f = h.gram_rows();
    const Eigen::MatrixXcd y = ldlt.solve(Eigen::MatrixXcd(f.adjoint()));
    Eigen::MatrixXcd m = f * y;
    m = 0.5 * (m + m.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().sum();
  }
  if (h.dimension() > kDenseLimit) {
    throw Error(ErrorKind::PreconditionViolated, "eigen route needs dimension <= 4000 for matrix forms");
  }
  const Eigen::MatrixXcd qd = q.dense();
  Eigen::LLT<Eigen::MatrixXcd> check(qd);
  if (check.info() != Eigen::Success) not_pd("dense LLT");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense(), qd,
                                                                 Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) not_pd("generalized eigensolver");
  return es.eigenvalues().sum();
}

}  // namespace

HermitianForm sobolev_form(int l, double T, const SeriesParam& tau, const SeriesParam& tau_prime,
                           int truncation) {
  if (l < 0) throw Error(ErrorKind::PreconditionViolated, "l must be >= 0");
  if (!(T > 0.0)) throw Error(ErrorKind::PreconditionViolated, "T must be > 0");
  if (truncation < 0) throw Error(ErrorKind::PreconditionViolated, "negative truncation");
  const int n = truncation;

  std::vector<SpMat> p1;
  std::vector<SpMat> p2;
  for (int d = 0; d <= l; ++d) {
    p1.push_back(degree_block(d, tau, n));
    p2.push_back(degree_block(d, tau_prime, n));
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(2 * n + 1) * (2 * n + 1);
  SpMat q(dim, dim);
  for (int d1 = 0; d1 <= l; ++d1) {
    for (int d2 = 0; d1 + d2 <= l; ++d2) {
      const double w = std::pow(T, 2 * (l - d1 - d2));
      SpMat block = Eigen::kroneckerProduct(p1[d1], p2[d2]);
      q += Complex(w) * block;
    }
  }
  q.prune(Complex(0.0));
  return HermitianForm::from_matrix(std::move(q), n);
}

double relative_trace(const HermitianForm& h, const HermitianForm& q, RelativeTraceMethod method) {
  require_pd(q);
  if (h.truncation() != q.truncation()) throw Error(ErrorKind::PreconditionViolated, "truncations differ");
  return method == RelativeTraceMethod::triangular ? triangular_trace(h, q) : eigen_trace(h, q);
}

SobolevTrace sobolev_test_functional(int l, double T, const SeriesParam& lam, const SeriesParam& tau,
                                     const SeriesParam& tau_prime, int truncation, int k_modes,
                                     const QuadratureConfig& cfg) {
  if (l < 2) throw Error(ErrorKind::PreconditionViolated, "the Sobolev floor needs l >= 2");
  SobolevTrace out;
  const HermitianForm h = hmod_form(lam, tau, tau_prime, truncation, k_modes, cfg, &out.hmod);
  const HermitianForm q = sobolev_form(l, T, tau, tau_prime, truncation);
  out.rho = relative_trace(h, q);
  out.rho_times_T2l = out.rho * std::pow(T, 2 * l);
  out.dimension = h.dimension();
  return out;
}

}  // namespace triprod
