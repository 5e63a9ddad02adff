#include "triprod/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "triprod/quadrature.hpp"
#include "triprod/rng.hpp"
#include "triprod/specfun.hpp"
#include "triprod/trilinear.hpp"

namespace triprod {
namespace {

// Running mean and centred second moment of a complex sample.
struct Moments {
  double n = 0.0;
  Complex mean = 0.0;
  double m2 = 0.0;  // Σ |x - mean|²

  void add(Complex x) {
    n += 1.0;
    const Complex d = x - mean;
    mean += d / n;
    m2 += std::real(std::conj(d) * (x - mean));
  }
};

Moments merge(const Moments& a, const Moments& b) {
  if (a.n == 0.0) return b;
  if (b.n == 0.0) return a;
  Moments out;
  out.n = a.n + b.n;
  const Complex d = b.mean - a.mean;
  out.mean = a.mean + d * (b.n / out.n);
  out.m2 = a.m2 + b.m2 + std::norm(d) * a.n * b.n / out.n;
  return out;
}

Moments merge_tree(std::span<const Moments> parts) {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts[0];
  const std::size_t mid = parts.size() / 2;
  return merge(merge_tree(parts.first(mid)), merge_tree(parts.subspan(mid)));
}

Complex gamma_ratio(std::initializer_list<Complex> num, std::initializer_list<Complex> den) {
  return gamma_product_log(std::span<const Complex>(num.begin(), num.size()),
                           std::span<const Complex>(den.begin(), den.size()))
      .value();
}

Estimate exact(Complex value, const char* method) {
  Estimate e;
  e.value = value;
  e.error_bound = 1e-11 * std::abs(value);
  e.method = method;
  e.cost = 0;
  return e;
}

void require_real_part_above(Complex s, double bound, const char* what) {
  if (!(s.real() > bound)) {
    std::ostringstream os;
    os << what << ": need Re s > " << bound << ", got s = " << s;
    throw Error(ErrorKind::PreconditionViolated, os.str());
  }
}

}  // namespace

void GaussianSpec::validate() const {
  if (dim < 1) throw Error(ErrorKind::PreconditionViolated, "Gaussian dimension must be >= 1");
  if (samples < 2) throw Error(ErrorKind::PreconditionViolated, "need at least 2 samples");
}

void gaussian_sample(const GaussianSpec& spec, std::int64_t index, std::span<double> out) {
  const Philox4x32 gen(spec.seed);
  const auto i = static_cast<std::uint64_t>(index);
  const double scale = std::numbers::sqrt2 / 2.0;
  for (int j = 0; 2 * j < spec.dim; ++j) {
    const auto pair = normal_pair(gen({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32),
                                       static_cast<std::uint32_t>(j), 0u}));
    out[2 * j] = scale * pair[0];
    if (2 * j + 1 < spec.dim) out[2 * j + 1] = scale * pair[1];
  }
}

Estimate monte_carlo_mean(std::int64_t samples, const std::function<Complex(std::int64_t)>& value) {
  if (samples < 2) throw Error(ErrorKind::PreconditionViolated, "need at least 2 samples");
  const std::int64_t streams = (samples + kSamplesPerStream - 1) / kSamplesPerStream;
  std::vector<Moments> parts(static_cast<std::size_t>(streams));
  std::vector<char> bad(static_cast<std::size_t>(streams), 0);
  parallel_for(static_cast<std::size_t>(streams), [&](std::size_t s) {
    Moments m;
    const std::int64_t lo = static_cast<std::int64_t>(s) * kSamplesPerStream;
    const std::int64_t hi = std::min(samples, lo + kSamplesPerStream);
    for (std::int64_t i = lo; i < hi; ++i) {
      const Complex v = value(i);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        bad[s] = 1;
        return;
      }
      m.add(v);
    }
    parts[s] = m;
  });
  if (std::any_of(bad.begin(), bad.end(), [](char b) { return b != 0; })) {
    throw Error(ErrorKind::NonFinite, "integrand returned a non-finite sample");
  }
  const Moments total = merge_tree(parts);
  Estimate est;
  est.value = total.mean;
  const double variance = total.m2 / (total.n - 1.0);
  est.error_bound = 3.0 * std::sqrt(variance / total.n);
  est.method = "monte_carlo";
  est.cost = samples;
  return est;
}

Estimate gaussian_expect(const GaussianSpec& spec, const GaussianIntegrand& f) {
  spec.validate();
  return monte_carlo_mean(spec.samples, [&](std::int64_t i) {
    thread_local std::vector<double> x;
    x.resize(spec.dim);
    gaussian_sample(spec, i, x);
    return f(x);
  });
}

Complex classic_radius(int n, Complex s) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolated, "dimension must be >= 1");
  require_real_part_above(s, -static_cast<double>(n), "classic_radius");
  return gamma_ratio({(s + static_cast<double>(n)) / 2.0}, {n / 2.0});
}

Complex classic_linear(double h_norm, Complex s) {
  if (!(h_norm > 0.0)) throw Error(ErrorKind::PreconditionViolated, "need ‖h‖ > 0");
  require_real_part_above(s, -1.0, "classic_linear");
  return std::exp(s * std::log(h_norm)) * gamma_ratio({(s + 1.0) / 2.0}, {0.5});
}

Complex classic_det(Complex s) {
  require_real_part_above(s, -1.0, "classic_det");
  return gamma_ratio({(s + 1.0) / 2.0, s / 2.0 + 1.0}, {0.5});
}

Estimate radial_expectation(int n, const std::function<Complex(double)>& radial_profile) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolated, "dimension must be >= 1");
  // (1/Γ(n/2)) ∫_0^∞ g(√t) t^{n/2-1} e^{-t} dt with t = exp(π/2 sinh u).
  const double log_norm = log_gamma(Complex(n / 2.0, 0.0)).log_modulus;
  const auto integrand = [&](double u) -> Complex {
    const double e = 0.5 * std::numbers::pi * std::sinh(u);
    if (e > 6.5 || e < -700.0) return 0.0;  // e^{-t} or t^{n/2} below double range
    const double t = std::exp(e);
    const double jac = 0.5 * std::numbers::pi * std::cosh(u);
    const double lw = (n / 2.0) * e - t + std::log(jac) - log_norm;
    return radial_profile(std::sqrt(t)) * std::exp(lw);
  };
  constexpr double kRange = 6.5;
  Estimate est;
  est.method = "radial_exp_sinh";
  double h = 0.5;
  Complex sum = 0.0;
  for (double u = -kRange; u <= kRange + 1e-12; u += h) sum += integrand(u);
  est.cost = static_cast<std::int64_t>(2 * kRange / h) + 1;
  Complex previous = h * sum;
  for (int level = 0; level < 12; ++level) {
    // Add the midpoints of the current grid.
    for (double u = -kRange + 0.5 * h; u < kRange; u += h) sum += integrand(u);
    est.cost += static_cast<std::int64_t>(2 * kRange / h);
    h *= 0.5;
    const Complex current = h * sum;
    est.value = current;
    est.error_bound = std::abs(current - previous);
    if (level >= 2 && est.error_bound <= 1e-13 * std::max(1.0, std::abs(current))) return est;
    previous = current;
  }
  throw NonConvergentError("radial quadrature did not settle", est);
}

std::array<double, 3> minor_map(PlanePoint s1, PlanePoint s2, PlanePoint s3) {
  return {omega(s2, s3), omega(s3, s1), omega(s1, s2)};
}

double IdentityCheck::z_score() const {
  const double diff = std::abs(lhs.value - rhs.value);
  const double se = std::hypot(lhs.error_bound, rhs.error_bound) / 3.0;
  if (se > 0.0) return diff / se;
  return diff <= 1e-12 * std::max(1.0, std::abs(rhs.value)) ? 0.0
                                                             : std::numeric_limits<double>::infinity();
}

IdentityCheck corB_check(const SeriesParam& lam, const CircleFunction& h, const GaussianSpec& spec) {
  const Complex l = lam.lambda();
  // h ∈ V_{-λ} has degree -λ-1; ⟨|h|, G⟩ is finite iff Re λ < 1.
  require_real_part_above(-l, -1.0, "corB_check (degree -λ-1)");
  GaussianSpec s2 = spec;
  s2.dim = 2;
  IdentityCheck out;
  out.lhs = gaussian_expect(s2, [&](std::span<const double> x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    const double theta = std::atan2(x[1], x[0]);
    return h(theta) * std::exp(-0.5 * (l + 1.0) * std::log(r2));
  });
  // e_λ is 1 on the unit circle, so h·e_λ restricts to h there.
  const Estimate ell = invariant_L([&](PlanePoint p) {
    const double r2 = p.x * p.x + p.y * p.y;
    return h(std::atan2(p.y, p.x)) / r2;
  });
  const Complex g = log_gamma((1.0 - l) / 2.0).value();
  out.rhs.value = g * ell.value;
  out.rhs.error_bound = std::abs(g) * ell.error_bound + 1e-11 * std::abs(out.rhs.value);
  out.rhs.method = "gamma_times_invariant_functional";
  out.rhs.cost = ell.cost;
  return out;
}

Estimate corB_radial_lhs(const SeriesParam& lam, const CircleFunction& h) {
  const Complex l = lam.lambda();
  require_real_part_above(-l, -1.0, "corB_radial_lhs (degree -λ-1)");
  Estimate radial = radial_expectation(2, [&](double r) { return std::exp(-(l + 1.0) * std::log(r)); });
  // Angular mean of h by a trapezoid rule fine enough for its modes.
  const int m = 8 * (h.max_mode() + 1);
  Complex mean = 0.0;
  for (int i = 0; i < m; ++i) mean += h(std::numbers::pi * i / m);
  mean /= static_cast<double>(m);
  radial.value *= mean;
  radial.error_bound *= std::abs(mean);
  radial.method = "radial_quadrature";
  return radial;
}

IdentityCheck comparison_a_rotated(Complex s, const std::array<double, 9>& rotation,
                                   const GaussianSpec& spec) {
  require_real_part_above(s, -1.0, "comparison_a");
  GaussianSpec s6 = spec;
  s6.dim = 6;
  IdentityCheck out;
  out.lhs = gaussian_expect(s6, [&](std::span<const double> x) -> Complex {
    const std::array<double, 3> w = minor_map({x[0], x[1]}, {x[2], x[3]}, {x[4], x[5]});
    const double w3 = rotation[6] * w[0] + rotation[7] * w[1] + rotation[8] * w[2];
    if (s == Complex(0.0)) return 1.0;
    return std::exp(s * std::log(std::abs(w3)));
  });
  out.rhs = exact(classic_linear(1.0, s) * log_gamma(s / 2.0 + 1.0).value(), "closed_form");
  return out;
}

IdentityCheck comparison_a(Complex s, const GaussianSpec& spec) {
  return comparison_a_rotated(s, {1, 0, 0, 0, 1, 0, 0, 0, 1}, spec);
}

IdentityCheck propAB_check(const SeriesParam& l1, const SeriesParam& l2, const SeriesParam& l3,
                           const GaussianSpec& spec, PropABSampler sampler) {
  if (!l1.is_principal() || !l2.is_principal() || !l3.is_principal()) {
    throw Error(ErrorKind::PreconditionViolated, "propAB_check needs principal-series λ's");
  }
  const ExponentQuadruple e = exponents(l1, l2, l3);
  GaussianSpec s6 = spec;
  s6.dim = 6;
  s6.validate();
  IdentityCheck out;
  if (sampler == PropABSampler::plain_gaussian) {
    out.lhs = gaussian_expect(s6, [&](std::span<const double> x) {
      return kernel_K({x[0], x[1]}, {x[2], x[3]}, {x[4], x[5]}, e);
    });
  } else {
    const Complex pa = 0.5 * (e.alpha - 1.0);
    const Complex pb = 0.5 * (e.beta - 1.0);
    const Complex pg = 0.5 * (e.gamma - 1.0);
    // ∫_0^π |sin y|^{-1/2} dy.
    const double z_norm = std::sqrt(std::numbers::pi) *
                          gamma_ratio({0.25}, {0.75}).real();
    const Philox4x32 gen(spec.seed);
    out.lhs = monte_carlo_mean(s6.samples, [&](std::int64_t index) {
      const auto i = static_cast<std::uint64_t>(index);
      const auto block = [&](std::uint32_t j) {
        return gen({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32), j, 0u});
      };
      // Radii of three independent plane Gaussians.
      std::array<double, 3> r{};
      for (std::uint32_t j = 0; j < 3; ++j) {
        const auto n = normal_pair(block(j));
        r[j] = std::sqrt(0.5 * (n[0] * n[0] + n[1] * n[1]));
      }
      // t = sin²(y/2) is Beta(1/4, 1/4) when y has density ∝ |sin y|^{-1/2}.
      const auto u = block(3);
      const auto draw = [](double p, double& angle, double& sine) {
        const double q = p < 0.5 ? p : 1.0 - p;
        const double t = boost::math::ibeta_inv(0.25, 0.25, q);
        const double half = 2.0 * std::asin(std::sqrt(t));
        angle = p < 0.5 ? half : std::numbers::pi - half;
        sine = 2.0 * std::sqrt(t * (1.0 - t));
      };
      double y = 0.0;
      double z = 0.0;
      double sy = 0.0;
      double sz = 0.0;
      draw(uniform_open(u[0], u[1]), y, sy);
      draw(uniform_open(u[2], u[3]), z, sz);
      const double syz = std::abs(std::sin(z - y));
      if (sy == 0.0 || sz == 0.0 || syz == 0.0) {
        throw Error(ErrorKind::SingularConfiguration, "sampled a collinear triple");
      }
      const Complex log_k = pa * std::log(r[1] * r[2] * syz) + pb * std::log(r[0] * r[2] * sz) +
                            pg * std::log(r[0] * r[1] * sy);
      // Uniform angle density 1/π over the proposal |sin|^{-1/2}/Z.
      const double weight = z_norm * z_norm * std::sqrt(sy * sz) / (std::numbers::pi * std::numbers::pi);
      return weight * std::exp(log_k);
    });
    out.lhs.method = "monte_carlo_angular_importance";
  }
  const Complex a = closed_form_A(l1, l2, l3).value;
  const Complex g = gamma_ratio({(1.0 - l1.lambda()) / 2.0, (1.0 - l2.lambda()) / 2.0,
                                 (1.0 - l3.lambda()) / 2.0},
                                {});
  out.rhs = exact(a * g, "closed_form");
  return out;
}

}  // namespace triprod
