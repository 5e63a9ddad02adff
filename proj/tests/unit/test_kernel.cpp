#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "triprod/kernel.hpp"

using namespace triprod;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

PlanePoint act(const double g[4], PlanePoint p) { return {g[0] * p.x + g[1] * p.y, g[2] * p.x + g[3] * p.y}; }

}  // namespace

TEST_CASE("omega") {
  CHECK(omega({1, 0}, {0, 1}) == 1.0);
  CHECK(omega({1, 1}, {2, 2}) == 0.0);
  CHECK(omega({1, 0}, {1, 1}) == 1.0);
  CHECK(omega({1, 1}, {1, 0}) == -1.0);
}

TEST_CASE("exponents") {
  const auto z = exponents(0.0, 0.0, 0.0);
  CHECK(z.alpha == 0.0);
  CHECK(z.delta == 0.0);

  const Complex lam(0.0, 3.0);
  const auto e = exponents(0.0, 0.0, lam);
  CHECK(e.alpha == -lam);
  CHECK(e.beta == -lam);
  CHECK(e.gamma == lam);
  CHECK(e.delta == -lam);

  const Complex it(0.0, 1.7);
  const auto s = exponents(it, it, it);
  CHECK(std::abs(s.alpha + it) < 1e-15);
  CHECK(std::abs(s.delta + 3.0 * it) < 1e-15);

  const Complex l1(0.1, 2.0), l2(-0.3, 1.0), l3(0.0, -4.0);
  const auto q = exponents(l1, l2, l3);
  CHECK(std::abs(q.alpha + q.beta + 2.0 * l3) < 1e-14);
  CHECK(std::abs(q.beta + q.gamma + 2.0 * l1) < 1e-14);
  CHECK(std::abs(q.alpha + q.gamma + 2.0 * l2) < 1e-14);
  const auto p = exponents(Complex(0, 1), Complex(0, 2), Complex(0, 5));
  for (Complex v : {p.alpha, p.beta, p.gamma, p.delta}) CHECK(v.real() == 0.0);
}

TEST_CASE("series class") {
  CHECK(SeriesParam(Complex(0.0, 2.0)).is_principal());
  CHECK(SeriesParam(0.0).is_principal());
  CHECK(SeriesParam(0.4).series_class() == SeriesClass::complementary);
  CHECK(SeriesParam(Complex(0.4, 1.0)).series_class() == SeriesClass::general);
}

TEST_CASE("kernel_K at hand-evaluated configurations") {
  const Complex l1(0.0, 1.0), l2(0.0, -2.5), l3(0.0, 4.0);
  const auto e = exponents(l1, l2, l3);
  CHECK(std::abs(kernel_K({1, 0}, {0, 1}, {1, 1}, e) - 1.0) < 1e-15);
  // |ω| = 2, 2, 1 → 2^{(α-1)/2 + (β-1)/2} = 2^{-λ3-1}.
  CHECK(rel(kernel_K({1, 0}, {0, 1}, {2, 2}, e), std::pow(2.0, -l3 - 1.0)) < 1e-14);
  CHECK_THROWS_AS(kernel_K({1, 0}, {2, 0}, {0, 1}, e), Error);
}

TEST_CASE("restricted kernel") {
  const auto e = exponents(Complex(0, 1), Complex(0, 2), Complex(0, 3));
  const double pi = std::numbers::pi;
  CHECK(std::abs(std::abs(restricted_kernel_f(0.0, pi / 2, pi / 4, e)) - std::sqrt(2.0)) < 1e-14);

  const ExponentQuadruple ones{1.0, 1.0, 1.0, 1.0};
  CHECK(std::abs(restricted_kernel_f(0.3, 1.1, 2.5, ones) - 1.0) < 1e-15);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.0, pi);
  for (int i = 0; i < 50; ++i) {
    const double x = ang(rng), y = ang(rng), z = ang(rng);
    const Complex f = restricted_kernel_f(x, y, z, e);
    const Complex k = kernel_K({std::cos(x), std::sin(x)}, {std::cos(y), std::sin(y)}, {std::cos(z), std::sin(z)}, e);
    CHECK(rel(f, k) < 1e-12);
    CHECK(rel(restricted_kernel_f(x + pi, y, z, e), f) < 1e-12);
    CHECK(rel(restricted_kernel_f(x, y - pi, z + pi, e), f) < 1e-12);
  }
  CHECK_THROWS_AS(restricted_kernel_f(0.2, 0.2 + pi, 1.0, e), Error);
}

TEST_CASE("diagonal SL(2,R) invariance and homogeneity") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.2, 5.0);
  const Complex l1(0.0, 1.3), l2(0.0, -0.7), l3(0.0, 2.9);
  const auto e = exponents(l1, l2, l3);
  double worst_inv = 0.0;
  double worst_hom = 0.0;
  int accepted = 0;
  for (int i = 0; accepted < 200; ++i) {
    double g[4] = {n01(rng), n01(rng), n01(rng), n01(rng)};
    double det = g[0] * g[3] - g[1] * g[2];
    if (std::abs(det) < 0.05) continue;
    if (det < 0) std::swap(g[0], g[1]), std::swap(g[2], g[3]), det = -det;
    const double r = 1.0 / std::sqrt(det);
    for (double& v : g) v *= r;
    ++accepted;
    const PlanePoint s1{n01(rng), n01(rng)}, s2{n01(rng), n01(rng)}, s3{n01(rng), n01(rng)};
    const Complex k = kernel_K(s1, s2, s3, e);
    worst_inv = std::max(worst_inv, rel(kernel_K(act(g, s1), act(g, s2), act(g, s3), e), k));

    const double a = (i % 2 ? -1.0 : 1.0) * scale(rng);
    const PlanePoint as1{a * s1.x, a * s1.y}, as2{a * s2.x, a * s2.y}, as3{a * s3.x, a * s3.y};
    const double la = std::log(std::abs(a));
    worst_hom = std::max(worst_hom, rel(kernel_K(as1, s2, s3, e), std::exp((-1.0 - l1) * la) * k));
    worst_hom = std::max(worst_hom, rel(kernel_K(s1, as2, s3, e), std::exp((-1.0 - l2) * la) * k));
    worst_hom = std::max(worst_hom, rel(kernel_K(s1, s2, as3, e), std::exp((-1.0 - l3) * la) * k));
  }
  CHECK(accepted == 200);
  CHECK(worst_inv < 1e-12);
  CHECK(worst_hom < 1e-12);
}
