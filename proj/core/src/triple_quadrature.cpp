#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>

#include "triprod/trilinear.hpp"

namespace triprod {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kGradingRatio = 0.15;
constexpr double kSafety = 4.0;

// Exponents of sin a, sin b, sin c on one of the two triangles.
struct SimplexPowers {
  Complex pa;
  Complex pb;
  Complex pc;
};

// log sin x for x in (0, π), given also the complementary length π - x
// as an exact sum of the other two offsets.
inline double log_sin(double x, double complement) {
  return std::log(std::sin(x <= kHalfPi ? x : complement));
}

struct RuleSet {
  std::vector<EndpointNode> outer;
  std::function<std::vector<EndpointNode>(double)> inner;
};

double oscillation_index(const ExponentQuadruple& e) {
  const double ia = 0.5 * std::abs(e.alpha.imag());
  const double ib = 0.5 * std::abs(e.beta.imag());
  const double ig = 0.5 * std::abs(e.gamma.imag());
  const double vab = 0.5 * std::abs((e.alpha + e.beta).imag());
  const double vag = 0.5 * std::abs((e.alpha + e.gamma).imag());
  const double vbg = 0.5 * std::abs((e.beta + e.gamma).imag());
  return std::max({ia, ib, ig, vab, vag, vbg});
}

RuleSet make_rules(const QuadratureConfig& cfg, int level, double omega, int frequency) {
  RuleSet rules;
  const double freq = std::max(1, frequency);
  if (cfg.scheme == QuadratureScheme::singularity_split) {
    TanhSinhParams p;
    p.step = 0.5 / (1.0 + omega / 2.0) * std::pow(0.5, level);
    const double per_piece = 3.0 / freq;
    p.pieces = std::max(1, static_cast<int>(std::ceil(kPi / per_piece)));
    rules.outer = tanh_sinh_rule(kPi, p);
    rules.inner = [p, per_piece](double length) {
      TanhSinhParams q = p;
      q.pieces = std::max(1, static_cast<int>(std::ceil(length / per_piece)));
      return tanh_sinh_rule(length, q);
    };
    return rules;
  }
  GradedRuleParams p;
  p.ratio = kGradingRatio;
  p.depth = 16 + 8 * level;
  p.points = cfg.points_per_panel + 4 * level +
             static_cast<int>(std::ceil(0.8 * omega * std::log(1.0 / kGradingRatio)));
  p.max_panel = 2.5 / freq;
  auto gl = std::make_shared<GaussLegendre>(gauss_legendre(p.points));
  rules.outer = graded_rule(kPi, p, *gl);
  rules.inner = [p, gl](double length) { return graded_rule(length, p, *gl); };
  return rules;
}

// Per-node contribution structure:
//   value = Σ_outer w_c Σ_inner w_a exp(pa log sin a + pb log sin b + pc log sin c) · phase,
// where (a, b, c) are the distances to the three edges (a + b + c = π).
// Triangle 1 (z < y): a = z, b = y - z, c = π - y, powers (pb, pa, pg).
// Triangle 2 (y < z): a = y, b = z - y, c = π - z, powers (pg, pa, pb).
Complex integrate_level(const ModalWeight& weight, const ExponentQuadruple& e,
                        const RuleSet& rules, std::int64_t& cost) {
  const Complex pa = 0.5 * (e.alpha - 1.0);
  const Complex pb = 0.5 * (e.beta - 1.0);
  const Complex pg = 0.5 * (e.gamma - 1.0);
  const SimplexPowers t1{pb, pa, pg};
  const SimplexPowers t2{pg, pa, pb};
  const int rows = static_cast<int>(weight.g.rows());
  const int cols = static_cast<int>(weight.g.cols());
  const bool single = rows == 1 && cols == 1;

  const std::size_t n_outer = rules.outer.size();
  std::vector<Complex> slots(n_outer);
  std::vector<std::int64_t> counts(n_outer);

  parallel_for(n_outer, [&](std::size_t io) {
    const EndpointNode& oc = rules.outer[io];
    const double c = oc.from_left;
    const double length = oc.from_right;  // π - c, exact
    const double ls_c = log_sin(c, length);
    // Weights go into the exponent: near a vertex both the weight and the
    // integrand leave the double range.
    const double lw_outer = std::log(oc.weight);
    const std::vector<EndpointNode> inner = rules.inner(length);

    // Outer-fixed parts of the weight: triangle 1 fixes y = π - c, triangle 2
    // fixes z = π - c.  e^{2ij(π - c)} = e^{-2ijc}.
    Eigen::VectorXcd h1;
    Eigen::VectorXcd h2;
    if (!single) {
      Eigen::VectorXcd ey(rows);
      for (int r = 0; r < rows; ++r) ey(r) = std::polar(1.0, -2.0 * (weight.n_lo + r) * c);
      Eigen::VectorXcd ez(cols);
      for (int q = 0; q < cols; ++q) ez(q) = std::polar(1.0, -2.0 * (weight.k_lo + q) * c);
      h1 = weight.g.transpose() * ey;  // indexed by k
      h2 = weight.g * ez;              // indexed by n
    }
    const double n0 = weight.n_lo;
    const double k0 = weight.k_lo;

    std::vector<Complex> terms(inner.size());
    for (std::size_t ii = 0; ii < inner.size(); ++ii) {
      const double a = inner[ii].from_left;
      const double b = inner[ii].from_right;
      const double ls_a = log_sin(a, b + c);
      const double ls_b = log_sin(b, a + c);
      const double lw = lw_outer + std::log(inner[ii].weight);
      const Complex log1 = t1.pa * ls_a + t1.pb * ls_b + t1.pc * ls_c + lw;
      const Complex log2 = t2.pa * ls_a + t2.pb * ls_b + t2.pc * ls_c + lw;
      Complex v;
      if (single) {
        // Triangle 1: e^{2in y} e^{2ik z} = e^{-2inc} e^{2ika}.
        const double ph1 = -2.0 * n0 * c + 2.0 * k0 * a;
        // Triangle 2: e^{2ina} e^{-2ikc}.
        const double ph2 = 2.0 * n0 * a - 2.0 * k0 * c;
        v = weight.g(0, 0) * (std::exp(log1 + Complex(0.0, ph1)) + std::exp(log2 + Complex(0.0, ph2)));
      } else {
        Complex s1 = 0.0;
        Complex step = std::polar(1.0, 2.0 * a);
        Complex pw = std::polar(1.0, 2.0 * k0 * a);
        for (int q = 0; q < cols; ++q, pw *= step) s1 += h1(q) * pw;
        Complex s2 = 0.0;
        pw = std::polar(1.0, 2.0 * n0 * a);
        for (int r = 0; r < rows; ++r, pw *= step) s2 += h2(r) * pw;
        v = std::exp(log1) * s1 + std::exp(log2) * s2;
      }
      terms[ii] = v;
    }
    slots[io] = pairwise_sum(std::span<const Complex>(terms));
    counts[io] = 2 * static_cast<std::int64_t>(inner.size());
  });

  for (std::int64_t n : counts) cost += n;
  return pairwise_sum(std::span<const Complex>(slots)) / (kPi * kPi);
}

std::string method_name(const QuadratureConfig& cfg) {
  return std::string(to_string(cfg.scheme));
}

}  // namespace

Contour Contour::ellipse(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorKind::PreconditionViolated, "ellipse semi-axes must be positive");
  }
  return {Kind::ellipse, a, b};
}

ModalWeight ModalWeight::single(int n, int k, Complex value) {
  ModalWeight w;
  w.n_lo = n;
  w.k_lo = k;
  w.g = Eigen::MatrixXcd::Constant(1, 1, value);
  return w;
}

int ModalWeight::max_abs_mode() const {
  const int n_hi = n_lo + static_cast<int>(g.rows()) - 1;
  const int k_hi = k_lo + static_cast<int>(g.cols()) - 1;
  return std::max({std::abs(n_lo), std::abs(n_hi), std::abs(k_lo), std::abs(k_hi)});
}

void require_absolute_convergence(const ExponentQuadruple& e) {
  const auto bad = [](Complex v) { return !(v.real() > -1.0); };
  if (bad(e.alpha) || bad(e.beta) || bad(e.gamma) || bad(e.delta)) {
    std::ostringstream os;
    os << "integral diverges: need Re α, Re β, Re γ, Re δ > -1, got (" << e.alpha << ", "
       << e.beta << ", " << e.gamma << ", " << e.delta << ")";
    throw Error(ErrorKind::PreconditionViolated, os.str());
  }
}

Estimate reduced_torus_integral(const ModalWeight& weight, const ExponentQuadruple& e,
                                const QuadratureConfig& cfg) {
  cfg.validate();
  require_absolute_convergence(e);
  if (cfg.scheme == QuadratureScheme::modal_series) {
    const ModalSeriesTable table(e, weight.max_abs_mode());
    Estimate total;
    total.method = "modal_series";
    for (int r = 0; r < weight.g.rows(); ++r) {
      for (int q = 0; q < weight.g.cols(); ++q) {
        const Complex g = weight.g(r, q);
        if (g == Complex(0.0)) continue;
        const Estimate el = table.element(weight.n_lo + r, weight.k_lo + q);
        total.value += g * el.value;
        total.error_bound += std::abs(g) * el.error_bound;
        total.cost += el.cost;
      }
    }
    return total;
  }

  const double omega = oscillation_index(e);
  const int frequency = 2 * weight.max_abs_mode();
  Estimate best;
  best.method = method_name(cfg);
  Complex previous = 0.0;
  for (int level = 0; level <= cfg.refinement_levels; ++level) {
    const RuleSet rules = make_rules(cfg, level, omega, frequency);
    const Complex value = integrate_level(weight, e, rules, best.cost);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      throw Error(ErrorKind::NonFinite, "non-finite quadrature sum");
    }
    best.value = value;
    if (level > 0) {
      best.error_bound = kSafety * std::abs(value - previous);
      if (best.error_bound <= cfg.target_rel_error * std::abs(value)) return best;
    } else {
      best.error_bound = std::abs(value);
    }
    previous = value;
  }
  std::ostringstream os;
  os << "refinement stopped at relative error " << best.relative_error_bound() << " > "
     << cfg.target_rel_error;
  throw NonConvergentError(os.str(), best);
}

Estimate model_triple_quadrature(const CircleFunction& f1, const CircleFunction& f2,
                                 const CircleFunction& f3, const SeriesParam& l1,
                                 const SeriesParam& l2, const SeriesParam& l3,
                                 const QuadratureConfig& cfg) {
  // Rotation invariance of the kernel removes the x integral: only
  // coefficient triples with m + n + k = 0 survive.
  const int n2 = f2.max_mode();
  const int n3 = f3.max_mode();
  ModalWeight w;
  w.n_lo = -n2;
  w.k_lo = -n3;
  w.g = Eigen::MatrixXcd::Zero(2 * n2 + 1, 2 * n3 + 1);
  for (int n = -n2; n <= n2; ++n) {
    for (int k = -n3; k <= n3; ++k) w.g(n + n2, k + n3) = f1.coeff(-n - k) * f2.coeff(n) * f3.coeff(k);
  }
  return reduced_torus_integral(w, exponents(l1, l2, l3), cfg);
}

Estimate tmatrix_element(int m, int n, int k, const SeriesParam& l1, const SeriesParam& l2,
                         const SeriesParam& l3, const QuadratureConfig& cfg) {
  if (m % 2 != 0 || n % 2 != 0 || k % 2 != 0) {
    throw Error(ErrorKind::PreconditionViolated, "mode frequencies must be even");
  }
  const ExponentQuadruple e = exponents(l1, l2, l3);
  if (m + n + k != 0) {
    cfg.validate();
    require_absolute_convergence(e);
    Estimate zero;
    zero.method = "selection_rule";
    return zero;
  }
  return reduced_torus_integral(ModalWeight::single(n / 2, k / 2), e, cfg);
}

}  // namespace triprod
