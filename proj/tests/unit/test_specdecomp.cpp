#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "fourier_oracle.hpp"
#include "triprod/specdecomp.hpp"
#include "triprod/trilinear.hpp"

using namespace triprod;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I(0.0, 1.0);

CircleFunction random_function(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  CircleFunction f(n);
  for (int j = -n; j <= n; ++j) f.coeff_ref(j) = Complex(n01(rng), n01(rng)) / (1.0 + j * j);
  return f;
}

GroupElement random_in_region(std::mt19937_64& rng, double max_norm) {
  std::uniform_real_distribution<double> ang(0.0, kPi), stretch(1.0, max_norm);
  const double a = stretch(rng);
  return GroupElement::rotation(ang(rng)) * GroupElement::diagonal(a, 1.0 / a) * GroupElement::rotation(ang(rng));
}

Eigen::VectorXcd coeff_vector(const CircleFunction& f) {
  Eigen::VectorXcd v(2 * f.max_mode() + 1);
  for (int j = -f.max_mode(); j <= f.max_mode(); ++j) v(j + f.max_mode()) = f.coeff(j);
  return v;
}

}  // namespace

TEST_CASE("group elements") {
  const GroupElement g{2.0, 1.0, 0.5, 3.0};
  const GroupElement p = g * g.inverse();
  CHECK(std::abs(p.a - 1.0) < 1e-15);
  CHECK(std::abs(p.b) < 1e-15);
  CHECK(std::abs(GroupElement::diagonal(2.0, 0.5).norm() - 2.0) < 1e-14);
  CHECK(std::abs(GroupElement::diagonal(6.0, 1.5).norm() - 2.0) < 1e-14);  // scalar multiples identified
  CHECK(std::abs(GroupElement::rotation(0.7).norm() - 1.0) < 1e-14);
  CHECK_THROWS_AS(GroupElement({1.0, 2.0, 2.0, 4.0}).inverse(), Error);
}

TEST_CASE("group action: identity, rotation, unitarity") {
  std::mt19937_64 rng(1);
  const CircleFunction f = random_function(12, rng);
  const auto id = group_action(GroupElement::identity(), I, f);
  for (int j = -12; j <= 12; ++j) CHECK(std::abs(id.function.coeff(j) - f.coeff(j)) < 1e-14);

  // Rotation by φ shifts the argument; mode j picks up e^{-2ijφ}.
  const double phi = 0.37;
  for (Complex lam : {Complex(0.0, 2.0), Complex(0.3, 0.0)}) {
    const auto rot = group_action(GroupElement::rotation(phi), lam, f);
    for (int j = -12; j <= 12; ++j) {
      CHECK(std::abs(rot.function.coeff(j) - f.coeff(j) * std::polar(1.0, -2.0 * j * phi)) < 1e-13);
    }
  }

  const CircleFunction c = CircleFunction::constant(1.0).truncated(64);
  const auto st = group_action(GroupElement::diagonal(2.0, 0.5), I, c);
  CHECK(std::abs(st.function.l2_norm() - 1.0) < std::sqrt(st.tail_energy) + 1e-12);

  const CircleFunction h = random_function(64, rng);
  for (int i = 0; i < 20; ++i) {
    const GroupElement g = random_in_region(rng, 2.0);
    const auto r = group_action(g, Complex(0.0, 1.5), h);
    CHECK(std::abs(r.function.l2_norm() - h.l2_norm()) <= std::sqrt(r.tail_energy) + 1e-10 * h.l2_norm());
  }
}

TEST_CASE("group action: homomorphism and pointwise formula") {
  std::mt19937_64 rng(2);
  const CircleFunction f = random_function(6, rng).truncated(48);
  const GroupElement g1 = random_in_region(rng, 1.3), g2 = random_in_region(rng, 1.3);
  const Complex lam(0.0, 0.8);
  const auto a = group_action(g1, lam, group_action(g2, lam, f).function).function;
  const auto b = group_action(g1 * g2, lam, f).function;
  double worst = 0.0;
  for (int j = -48; j <= 48; ++j) worst = std::max(worst, std::abs(a.coeff(j) - b.coeff(j)));
  CHECK(worst < 1e-9);

  // Coefficients against an independent DFT of the pointwise action.
  const auto pulled = [&](double t) { return act_pointwise(g1, lam, [&](double s) { return f(s); }, t); };
  const auto c = group_action(g1, lam, f).function;
  for (int j : {-3, 0, 2, 7}) CHECK(std::abs(c.coeff(j) - oracle::circle_coefficient(pulled, j, 512)) < 1e-12);
}

TEST_CASE("group action overflow") {
  const CircleFunction f = CircleFunction::mode(3, 1.0);
  CHECK_THROWS_AS(group_action(GroupElement::diagonal(4.0, 0.25), I, f), Error);
}

TEST_CASE("generators match finite differences of the action") {
  std::mt19937_64 rng(3);
  const CircleFunction f = random_function(8, rng);
  const SeriesParam lam(Complex(0.3, 1.7));
  const double h = 1e-5;
  const std::array<std::pair<GroupElement, GroupElement>, 3> curves{{
      {GroupElement::diagonal(std::exp(h), std::exp(-h)), GroupElement::diagonal(std::exp(-h), std::exp(h))},
      {GroupElement{std::cosh(h), std::sinh(h), std::sinh(h), std::cosh(h)},
       GroupElement{std::cosh(h), -std::sinh(h), -std::sinh(h), std::cosh(h)}},
      {GroupElement::rotation(h), GroupElement::rotation(-h)},
  }};
  const std::array<Generator, 3> gens{Generator::H, Generator::S, Generator::W};
  const Eigen::VectorXcd v = coeff_vector(f);
  for (int x = 0; x < 3; ++x) {
    const auto plus = group_action(curves[x].first, lam, f.truncated(12)).function;
    const auto minus = group_action(curves[x].second, lam, f.truncated(12)).function;
    const Eigen::VectorXcd d = generator_matrix(gens[x], lam, 8) * v;
    double worst = 0.0;
    for (int j = -9; j <= 9; ++j) {
      worst = std::max(worst, std::abs((plus.coeff(j) - minus.coeff(j)) / (2.0 * h) - d(j + 9)));
    }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("Hermitian form storage") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n01;
  const int n = 2;
  const int dim = 25;
  Eigen::MatrixXcd f(7, dim);
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < dim; ++c) f(r, c) = Complex(n01(rng), n01(rng));
  const HermitianForm g = HermitianForm::from_gram(f, n);
  const HermitianForm m = HermitianForm::from_dense(f.adjoint() * f, n);
  Eigen::VectorXcd v(dim);
  for (int c = 0; c < dim; ++c) v(c) = Complex(n01(rng), n01(rng));
  CHECK(std::abs(g.value(v) - m.value(v)) < 1e-10 * g.value(v));
  CHECK(std::abs(g.trace() - m.trace()) < 1e-10 * g.trace());
  CHECK(m.hermitian_defect() < 1e-12);
  CHECK(std::abs(g.min_eigenvalue()) < 1e-12);
  CHECK(m.min_eigenvalue() > -1e-10 * m.trace());
  CHECK_THROWS_AS(HermitianForm::from_gram(f, 3), Error);
}

TEST_CASE("hmod form") {
  HmodDiagnostics d;
  const QuadratureConfig modal{QuadratureScheme::modal_series};
  const HermitianForm h = hmod_form(0.0, 0.0, 0.0, 6, 4, modal, &d);
  const Complex a = closed_form_A(0.0, 0.0, 0.0).value;
  // Only k = 0 meets e_0 ⊗ e_0.
  CHECK(std::abs(h.value(Eigen::VectorXcd::Unit(h.dimension(), pair_index(0, 0, 6))) - std::norm(a)) <
        1e-8 * std::norm(a));
  CHECK(h.min_eigenvalue() >= -1e-10 * h.trace());
  CHECK(d.elements > 0);
  CHECK(d.boundary_trace_fraction > 0.0);
  CHECK(d.boundary_trace_fraction < 0.5);

  double prev = 0.0;
  for (int k : {0, 2, 4, 8}) {
    const double t = hmod_form(I, 2.0 * I, 3.0 * I, 6, k, modal).trace();
    CHECK(t >= prev);
    prev = t;
  }

  // Entries against direct 2D quadrature.
  const Complex l1 = I, l2 = 2.0 * I, l3 = 3.0 * I;
  const HermitianForm hm = hmod_form(l3, l1, l2, 3, 2, modal);
  const Eigen::MatrixXcd& rows = hm.gram_rows();
  for (auto [m, n, k] : {std::array<int, 3>{1, -2, 1}, {0, 2, -2}, {-3, 1, 2}}) {
    const Complex direct = tmatrix_element(2 * m, 2 * n, 2 * k, l1, l2, l3).value;
    CHECK(std::abs(rows(k + 2, pair_index(m, n, 3)) - direct) < 1e-7 * std::abs(direct));
  }
}

TEST_CASE("Sobolev forms") {
  const SeriesParam tau(I), tp(2.0 * I);
  const HermitianForm q0 = sobolev_form(0, 5.0, tau, tp, 3);
  const Eigen::MatrixXcd d0 = q0.dense();
  CHECK((d0 - Eigen::MatrixXcd::Identity(49, 49)).norm() < 1e-14);

  const double T = 3.0;
  const HermitianForm q1 = sobolev_form(1, T, tau, tp, 4);
  const Eigen::VectorXcd e00 = Eigen::VectorXcd::Unit(q1.dimension(), pair_index(0, 0, 4));
  CHECK(std::abs(q1.value(e00) - (T * T + std::norm(tau.lambda() - 1.0) + std::norm(tp.lambda() - 1.0))) < 1e-12);

  // Finite differences of the action on the constant: H and S each
  // contribute |τ-1|²/2, W nothing.
  const CircleFunction c = CircleFunction::constant(1.0).truncated(8);
  const double h = 1e-5;
  const auto dplus = group_action(GroupElement::diagonal(std::exp(h), std::exp(-h)), tau, c).function;
  const auto dminus = group_action(GroupElement::diagonal(std::exp(-h), std::exp(h)), tau, c).function;
  double fd_norm = 0.0;
  for (int j = -8; j <= 8; ++j) fd_norm += std::norm((dplus.coeff(j) - dminus.coeff(j)) / (2.0 * h));
  CHECK(std::abs(fd_norm - std::norm(tau.lambda() - 1.0) / 2.0) < 1e-6);

  const HermitianForm q2 = sobolev_form(2, 2.0, tau, tp, 4);
  const HermitianForm q2b = sobolev_form(2, 4.0, tau, tp, 4);
  CHECK(q2.hermitian_defect() < 1e-10);
  CHECK(q2.min_eigenvalue() > 0.0);
  const Eigen::MatrixXcd diff = q2b.dense() - q2.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > -1e-9);
}

TEST_CASE("relative trace") {
  const SeriesParam tau(I), tp(0.5 * I);
  const HermitianForm q = sobolev_form(2, 2.0, tau, tp, 5);
  CHECK(std::abs(relative_trace(q, q) - 121.0) < 1e-8);

  const HermitianForm h = hmod_form(0.0, tau, tp, 5, 3, {QuadratureScheme::modal_series});
  const HermitianForm id = sobolev_form(0, 1.0, tau, tp, 5);
  CHECK(std::abs(relative_trace(h, id) - h.trace()) < 1e-12 * h.trace());

  const double base = relative_trace(h, q);
  CHECK(std::abs(relative_trace(h, q.scaled(3.0)) - base / 3.0) < 1e-12 * base);

  // Four routes: Gram/matrix storage × triangular/eigen.
  const HermitianForm hd = HermitianForm::from_dense(h.dense(), 5);
  for (const HermitianForm* hh : {&h, &hd}) {
    for (auto m : {RelativeTraceMethod::triangular, RelativeTraceMethod::eigen}) {
      CHECK(std::abs(relative_trace(*hh, q, m) - base) < 1e-10 * base);
    }
  }

  // Random positive definite pairs.
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXcd a(9, 9), b(9, 9);
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) a(i, j) = Complex(n01(rng), n01(rng)), b(i, j) = Complex(n01(rng), n01(rng));
    const HermitianForm hq = HermitianForm::from_dense(b.adjoint() * b + Eigen::MatrixXcd::Identity(9, 9), 1);
    const HermitianForm hh = HermitianForm::from_dense(a.adjoint() * a, 1);
    const double t1 = relative_trace(hh, hq, RelativeTraceMethod::triangular);
    const double t2 = relative_trace(hh, hq, RelativeTraceMethod::eigen);
    CHECK(std::abs(t1 - t2) < 1e-10 * t1);
  }

  Eigen::MatrixXcd indefinite = Eigen::MatrixXcd::Identity(9, 9);
  indefinite(4, 4) = -1.0;
  const HermitianForm bad = HermitianForm::from_dense(indefinite, 1);
  const HermitianForm hh = HermitianForm::from_dense(Eigen::MatrixXcd::Identity(9, 9), 1);
  for (auto m : {RelativeTraceMethod::triangular, RelativeTraceMethod::eigen}) {
    try {
      relative_trace(hh, bad, m);
      FAIL("expected QNotPositiveDefinite");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::QNotPositiveDefinite);
    }
  }
}

TEST_CASE("Sobolev test functional") {
  const SeriesParam tau(I), tp(2.0 * I);
  CHECK_THROWS_AS(sobolev_test_functional(1, 2.0, 2.0 * I, tau, tp, 8, 4), Error);

  const SobolevTrace a = sobolev_test_functional(2, 2.0, 2.0 * I, tau, tp, 24, 12);
  const SobolevTrace b = sobolev_test_functional(2, 4.0, 2.0 * I, tau, tp, 24, 12);
  CHECK(a.rho > 0.0);
  CHECK(b.rho < a.rho);
  CHECK(std::abs(a.rho_times_T2l - a.rho * 16.0) < 1e-12 * a.rho_times_T2l);

  // l = 3 against l = 2 at fixed T: ratio consistent with T^{-2} within a factor 2.
  const double T = 4.0;
  const HermitianForm h = hmod_form(4.0 * I, tau, tp, 24, 12, {QuadratureScheme::modal_series});
  const double r2 = relative_trace(h, sobolev_form(2, T, tau, tp, 24));
  const double r3 = relative_trace(h, sobolev_form(3, T, tau, tp, 24));
  const double ratio = (r3 / r2) * T * T;
  CHECK(ratio > 0.5);
  CHECK(ratio < 2.0);
}

TEST_CASE("bump vector") {
  CHECK_THROWS_AS(bump_vector(1.0, 399), Error);
  try {
    bump_vector(2.0, 400);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientTruncation);
  }
  CHECK_THROWS_AS(bump_vector(0.5, 1000), Error);

  const BumpVector u = bump_vector(1.0, 400);
  CHECK(std::abs(u.truncated_mass() - 1.0) < 1e-8);
  CHECK(u.l2_norm_squared() <= 1e5);
  CHECK(u.radius() == doctest::Approx(0.01));

  // Support, non-negativity and peak.
  const PlanePoint c = u.center();
  const double peak = u(c.x, c.y);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> pos(0.0, kPi);
  for (int i = 0; i < 2000; ++i) {
    const double x = pos(rng), y = pos(rng);
    const double v = u(x, y);
    CHECK(v >= 0.0);
    const double r = std::hypot(std::remainder(x - c.x, kPi), std::remainder(y - c.y, kPi));
    if (r > 1.1 * u.radius()) CHECK(v < 1e-8 * peak);
  }

  // Hankel coefficients against a direct 2D quadrature over the disc.
  for (auto [m, n] : {std::pair<int, int>{3, -5}, {40, 7}, {0, 0}}) {
    const int nr = 2048, na = 64;
    Complex acc = 0.0;
    for (int i = 0; i < nr; ++i) {
      const double r = u.radius() * (i + 0.5) / nr;
      for (int j = 0; j < na; ++j) {
        const double t = 2.0 * kPi * j / na;
        const double x = c.x + r * std::cos(t), y = c.y + r * std::sin(t);
        acc += u.radial(r) * r * std::polar(1.0, -2.0 * (m * x + n * y));
      }
    }
    acc *= (u.radius() / nr) * (2.0 * kPi / na) / (kPi * kPi);
    CHECK(std::abs(u.coefficient(m, n) - acc) < 1e-6 * std::abs(u.coefficient(0, 0)));
  }

  // Parseval on a moderate truncation: norm of the series approaches ∫u².
  const BumpVector wide(1.0, 400, {1.0, 2.0});
  CHECK(std::abs(wide.truncated_mass() - 1.0) < 1e-10);
}

TEST_CASE("pairing with the bump") {
  const SeriesParam tau(I), tp(2.0 * I);
  for (double T : {4.0, 8.0, 16.0}) {
    const PairingSetup s{tau, tp, SeriesParam(Complex(0.0, T)), 0.0, T};
    const PairingResult id = pairing_test({GroupElement::identity(), GroupElement::identity()}, s);
    CHECK_FALSE(id.singular);
    CHECK(id.pairing >= 0.5);
    CHECK(id.in_d0);
    CHECK(id.pairing <= id.sup_on_support * (1.0 + 1e-12));
    CHECK(id.max_gradient <= 3.0 * T * (1.0 + 1e-6));

    const D0Search d = search_region_D(s, 40, 5);
    CHECK(d.holder_violations == 0);
    CHECK(d.count_at_least_half >= 1);
    CHECK(d.results[d.best].in_d0);
  }
  // A singular line through the disc is detected, not returned as a number.
  const PairingSetup on_line{tau, tp, SeriesParam(4.0 * I), kPi / 3.0, 4.0};
  const PairingResult r = pairing_test({GroupElement::identity(), GroupElement::identity()}, on_line);
  CHECK(r.singular);
  CHECK_FALSE(r.in_d0);
}

TEST_CASE("variation claim") {
  const int n = 64;
  std::vector<double> u(n, 1.0), nu(n, 1.0 / n);
  std::vector<Complex> h(n, 1.0);
  CHECK(std::abs(variation_claim_check(u, h, nu) - 1.0) < 1e-14);

  for (int i = 0; i < n; ++i) h[i] = 0.5 + 0.5 * i / (n - 1.0);
  CHECK(variation_claim_check(u, h, nu) >= 0.5);

  std::vector<Complex> small(n, 0.9);
  CHECK_THROWS_AS(variation_claim_check(u, small, nu), Error);
  std::vector<Complex> wide(n, 1.0);
  wide[3] = 0.3;
  CHECK_THROWS_AS(variation_claim_check(u, wide, nu), Error);
  std::vector<double> heavy(n, 2.0);
  CHECK_THROWS_AS(variation_claim_check(heavy, h, nu), Error);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> uu(n), ww(n);
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
      ww[i] = 0.5 + unif(rng);
      uu[i] = unif(rng);
      mass += uu[i] * ww[i];
    }
    for (double& v : uu) v /= mass;
    // h inside the disc of radius 1/4 about a point of modulus 1 + 1/4, so
    // sup |h| >= 1 and the variation stays below 1/2.
    const Complex centre = std::polar(1.25, 2.0 * kPi * unif(rng));
    std::vector<Complex> hh(n);
    for (int i = 0; i < n; ++i) hh[i] = centre + std::polar(0.25 * unif(rng), 2.0 * kPi * unif(rng));
    hh[0] = centre * (1.0 / 1.25);
    hh[1] = centre + (centre / std::abs(centre)) * 0.2;
    worst = std::min(worst, variation_claim_check(uu, hh, ww));
  }
  CHECK(worst >= 0.5 - 1e-6);
}
