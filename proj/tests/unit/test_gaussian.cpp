#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "lanczos_gamma.hpp"
#include "triprod/gaussian.hpp"
#include "triprod/rng.hpp"
#include "triprod/trilinear.hpp"

using namespace triprod;

namespace {

const Complex I(0.0, 1.0);
constexpr double kSqrtPi = 1.7724538509055160273;

GaussianSpec spec(int dim, std::int64_t samples, std::uint64_t seed = 42) {
  GaussianSpec s;
  s.dim = dim;
  s.samples = samples;
  s.seed = seed;
  return s;
}

double radius_sq(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return r2;
}

double z_of(const Estimate& e, Complex exact) {
  if (e.error_bound == 0.0) return std::abs(e.value - exact) == 0.0 ? 0.0 : 1e300;
  return std::abs(e.value - exact) / (e.error_bound / 3.0);
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
  const Philox4x32 zero(Philox4x32::Key{0u, 0u});
  CHECK(zero({0u, 0u, 0u, 0u}) == Philox4x32::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  const Philox4x32 ones(Philox4x32::Key{0xffffffffu, 0xffffffffu});
  CHECK(ones({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}) ==
        Philox4x32::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  const Philox4x32 pi(Philox4x32::Key{0xa4093822u, 0x299f31d0u});
  CHECK(pi({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}) ==
        Philox4x32::Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("sampler has variance 1/2 per coordinate") {
  const GaussianSpec s = spec(3, 200000);
  const Estimate m = gaussian_expect(s, [](std::span<const double> x) { return Complex(x[1]); });
  const Estimate v = gaussian_expect(s, [](std::span<const double> x) { return Complex(x[2] * x[2]); });
  CHECK(std::abs(m.value) < m.error_bound);
  CHECK(z_of(v, 0.5) < 3.0);
}

TEST_CASE("normalization and radius moments") {
  const Estimate one = gaussian_expect(spec(2, 10000), [](std::span<const double>) { return Complex(1.0); });
  CHECK(one.value == 1.0);
  CHECK(one.error_bound == 0.0);

  const Estimate r2 = gaussian_expect(spec(2, 200000), [](std::span<const double> x) { return Complex(radius_sq(x)); });
  CHECK(z_of(r2, 1.0) < 3.0);

  CHECK(std::abs(classic_radius(1, 0.0) - 1.0) < 1e-14);
  CHECK(std::abs(classic_radius(3, 2.0) - 1.5) < 1e-13);
  const Estimate ri = gaussian_expect(spec(2, 200000), [](std::span<const double> x) {
    return std::exp(I * 0.5 * std::log(radius_sq(x)));
  });
  CHECK(z_of(ri, classic_radius(2, I)) < 3.0);
  // Deterministic radial quadrature as a second oracle.
  CHECK(std::abs(radial_expectation(2, [](double r) { return Complex(r * r); }).value - 1.0) < 1e-12);
  CHECK(std::abs(radial_expectation(3, [](double r) { return std::pow(Complex(r), 2.0 * I); }).value -
                 classic_radius(3, 2.0 * I)) < 1e-11);
}

TEST_CASE("product formula") {
  const auto f1 = [](double x) { return std::abs(x); };
  const auto f2 = [](double y) { return y * y; };
  const Estimate both = gaussian_expect(spec(2, 400000, 7), [&](std::span<const double> x) { return Complex(f1(x[0]) * f2(x[1])); });
  const Estimate a = gaussian_expect(spec(1, 400000, 8), [&](std::span<const double> x) { return Complex(f1(x[0])); });
  const Estimate b = gaussian_expect(spec(1, 400000, 9), [&](std::span<const double> x) { return Complex(f2(x[0])); });
  const Complex prod = a.value * b.value;
  const double err = std::abs(a.value) * b.error_bound + std::abs(b.value) * a.error_bound;
  CHECK(std::abs(both.value - prod) < std::hypot(both.error_bound, err));
  // Exact: E|x| = 1/√π, E y² = 1/2.
  CHECK(z_of(both, 0.5 / kSqrtPi) < 3.0);
}

TEST_CASE("classic closed forms") {
  CHECK(std::abs(classic_linear(1.0, 0.0) - 1.0) < 1e-14);
  CHECK(std::abs(classic_linear(1.0, 2.0) - 0.5) < 1e-14);
  CHECK(std::abs(classic_linear(2.0, 1.0) - 2.0 / kSqrtPi) < 1e-14);
  CHECK(std::abs(classic_det(0.0) - 1.0) < 1e-14);
  CHECK(std::abs(classic_det(2.0) - 0.5) < 1e-14);
  CHECK(std::abs(classic_det(1.0) - 0.5) < 1e-14);
  CHECK_THROWS_AS(classic_linear(1.0, -1.5), Error);
  CHECK_THROWS_AS(classic_det(-1.0), Error);
  CHECK_THROWS_AS(classic_radius(2, -2.5), Error);

  // Independent Gamma oracle.
  const Complex s(0.4, 1.3);
  CHECK(std::abs(classic_det(s) - oracle::gamma((s + 1.0) / 2.0) * oracle::gamma(s / 2.0 + 1.0) / kSqrtPi) < 1e-11);

  const Estimate det = gaussian_expect(spec(4, 300000), [](std::span<const double> x) {
    return Complex(std::abs(x[0] * x[3] - x[1] * x[2]));
  });
  CHECK(z_of(det, 0.5) < 3.0);
}

TEST_CASE("error scaling and determinism") {
  const auto r2 = [](std::span<const double> x) { return Complex(radius_sq(x)); };
  const Estimate small = gaussian_expect(spec(2, 100000), r2);
  const Estimate large = gaussian_expect(spec(2, 400000), r2);
  const double ratio = large.error_bound / small.error_bound;
  CHECK(ratio > 0.4);
  CHECK(ratio < 0.6);

  const Estimate again = gaussian_expect(spec(2, 100000), r2);
  CHECK(again.value == small.value);
  CHECK(again.error_bound == small.error_bound);

  // Non-multiple of the stream length.
  const Estimate odd = gaussian_expect(spec(2, 12345), r2);
  CHECK(z_of(odd, 1.0) < 4.0);
}

TEST_CASE("contract violations") {
  CHECK_THROWS_AS(spec(0, 100).validate(), Error);
  CHECK_THROWS_AS(spec(2, 0).validate(), Error);
  try {
    gaussian_expect(spec(1, 100), [](std::span<const double>) { return Complex(std::numeric_limits<double>::infinity()); });
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
  }
}

TEST_CASE("homogeneous-function identity") {
  // Rotation-invariant case: h = 1 on the circle, λ = 0.
  const IdentityCheck c0 = corB_check(0.0, CircleFunction::constant(1.0), spec(2, 200000));
  CHECK(c0.z_score() < 3.0);
  CHECK(std::abs(c0.rhs.value - kSqrtPi) < 1e-12);

  // h = x²/r³: angular profile cos²θ = 1/2 + (e^{2iθ} + e^{-2iθ})/4.
  CircleFunction cos2(1);
  cos2.coeff_ref(0) = 0.5;
  cos2.coeff_ref(1) = 0.25;
  cos2.coeff_ref(-1) = 0.25;
  const IdentityCheck c1 = corB_check(0.0, cos2, spec(2, 200000));
  CHECK(c1.z_score() < 3.0);
  CHECK(std::abs(c1.rhs.value - kSqrtPi / 2.0) < 1e-12);
  CHECK(std::abs(corB_radial_lhs(0.0, cos2).value - kSqrtPi / 2.0) < 1e-10);

  const CircleFunction m2 = CircleFunction::constant(1.0) + CircleFunction::mode(2, Complex(0.3, 0.1));
  const IdentityCheck c2 = corB_check(2.0 * I, m2, spec(2, 200000));
  CHECK(c2.z_score() < 3.0);
  CHECK(std::abs(corB_radial_lhs(2.0 * I, m2).value - c2.rhs.value) < 1e-9 * std::abs(c2.rhs.value));
}

TEST_CASE("minor map and the comparison identity") {
  const auto w = minor_map({1, 0}, {0, 1}, {1, 1});
  CHECK(w[0] == -1.0);
  CHECK(w[1] == -1.0);
  CHECK(w[2] == 1.0);

  CHECK(comparison_a(0.0, spec(6, 10000)).z_score() < 1e-2);  // only the Gamma tolerance separates the sides
  const IdentityCheck s2 = comparison_a(2.0, spec(6, 200000));
  CHECK(std::abs(s2.rhs.value - 0.5) < 1e-14);
  CHECK(s2.z_score() < 3.0);
  const IdentityCheck s1 = comparison_a(1.0, spec(6, 200000));
  CHECK(std::abs(s1.rhs.value - 0.5) < 1e-14);
  CHECK(s1.z_score() < 3.0);

  // Averaging over SO(3): rotated h gives the same value.
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n01;
  for (int k = 0; k < 5; ++k) {
    // Random rotation from a normalized quaternion.
    double q[4] = {n01(rng), n01(rng), n01(rng), n01(rng)};
    const double nq = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    for (double& v : q) v /= nq;
    const double a = q[0], b = q[1], c = q[2], d = q[3];
    const std::array<double, 9> r{a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c),
                                  2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b),
                                  2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d};
    const IdentityCheck rot = comparison_a_rotated(I, r, spec(6, 100000, 100 + k));
    CHECK(rot.z_score() < 3.0);
  }
}

TEST_CASE("Gaussian form of the trilinear functional") {
  const IdentityCheck a = propAB_check(0.0, 0.0, 0.0, spec(6, 200000));
  CHECK(std::abs(a.rhs.value - closed_form_A(0.0, 0.0, 0.0).value * std::pow(kSqrtPi, 3)) < 1e-10);
  CHECK(a.z_score() < 3.0);

  const IdentityCheck b = propAB_check(2.0 * I, 0.0, 0.0, spec(6, 200000));
  CHECK(b.z_score() < 3.0);
  const IdentityCheck c = propAB_check(0.0, 2.0 * I, 0.0, spec(6, 200000));
  CHECK(c.rhs.value == b.rhs.value);
  CHECK(std::abs(b.lhs.value - c.lhs.value) < b.lhs.error_bound + c.lhs.error_bound);
}
