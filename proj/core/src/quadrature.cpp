#include "triprod/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

namespace triprod {

std::string_view to_string(QuadratureScheme scheme) noexcept {
  switch (scheme) {
    case QuadratureScheme::graded_mesh: return "graded_mesh";
    case QuadratureScheme::singularity_split: return "singularity_split";
    case QuadratureScheme::modal_series: return "modal_series";
  }
  return "unknown";
}

QuadratureScheme parse_quadrature_scheme(std::string_view name) {
  if (name == "graded_mesh") return QuadratureScheme::graded_mesh;
  if (name == "singularity_split") return QuadratureScheme::singularity_split;
  if (name == "modal_series") return QuadratureScheme::modal_series;
  throw Error(ErrorKind::PreconditionViolated, "unknown quadrature scheme '" + std::string(name) + "'");
}

void QuadratureConfig::validate() const {
  if (!(target_rel_error > 0.0)) {
    throw Error(ErrorKind::PreconditionViolated, "target_rel_error must be > 0");
  }
  if (points_per_panel < 2 || points_per_panel > 200) {
    throw Error(ErrorKind::PreconditionViolated, "points_per_panel must lie in [2, 200]");
  }
  if (refinement_levels < 1 || refinement_levels > 12) {
    throw Error(ErrorKind::PreconditionViolated, "refinement_levels must lie in [1, 12]");
  }
}

GaussLegendre gauss_legendre(int n) {
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      // Recompute the derivative at the converged node.
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[i] = -x;
    gl.nodes[n - 1 - i] = x;
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) gl.nodes[n / 2] = 0.0;
  return gl;
}

std::vector<EndpointNode> graded_rule(double length, const GradedRuleParams& p,
                                      const GaussLegendre& gl) {
  // Breakpoints on [0, L/2] measured from the nearer end.
  const double half = 0.5 * length;
  std::vector<double> breaks;
  breaks.reserve(p.depth + 2);
  breaks.push_back(0.0);
  for (int k = p.depth; k >= 1; --k) breaks.push_back(half * std::pow(p.ratio, k));
  breaks.push_back(half);

  std::vector<double> offsets;
  std::vector<double> weights;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double lo = breaks[b];
    const double hi = breaks[b + 1];
    const int sub = std::max(1, static_cast<int>(std::ceil((hi - lo) / p.max_panel)));
    const double h = (hi - lo) / sub;
    for (int s = 0; s < sub; ++s) {
      const double a = lo + s * h;
      const double mid = a + 0.5 * h;
      for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        offsets.push_back(mid + 0.5 * h * gl.nodes[q]);
        weights.push_back(0.5 * h * gl.weights[q]);
      }
    }
  }

  std::vector<EndpointNode> rule;
  rule.reserve(2 * offsets.size());
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    rule.push_back({offsets[i], length - offsets[i], weights[i]});
  }
  for (std::size_t i = offsets.size(); i-- > 0;) {
    rule.push_back({length - offsets[i], offsets[i], weights[i]});
  }
  return rule;
}

std::vector<EndpointNode> tanh_sinh_rule(double length, const TanhSinhParams& p) {
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  constexpr double kTiny = 1e-290;
  const int pieces = std::max(1, p.pieces);
  const double piece = length / pieces;

  std::vector<EndpointNode> local;
  for (int k = 0;; ++k) {
    bool any = false;
    for (int sign : {1, -1}) {
      if (k == 0 && sign == -1) continue;
      const double t = sign * k * p.step;
      const double s = kHalfPi * std::sinh(t);
      const double from_right = piece / (1.0 + std::exp(2.0 * s));
      const double from_left = piece / (1.0 + std::exp(-2.0 * s));
      const double cs = std::cosh(s);
      const double w = p.step * piece * 0.5 * kHalfPi * std::cosh(t) / (cs * cs);
      if (from_left < kTiny || from_right < kTiny || !(w > 0.0)) continue;
      local.push_back({from_left, from_right, w});
      any = true;
    }
    if (!any && k > 0) break;
  }
  std::sort(local.begin(), local.end(),
            [](const EndpointNode& a, const EndpointNode& b) { return a.from_left < b.from_left; });

  std::vector<EndpointNode> rule;
  rule.reserve(local.size() * pieces);
  for (int j = 0; j < pieces; ++j) {
    const double before = j * piece;
    const double after = (pieces - 1 - j) * piece;
    for (const EndpointNode& n : local) {
      rule.push_back({before + n.from_left, after + n.from_right, n.weight});
    }
  }
  return rule;
}

namespace {

template <typename T>
T pairwise_sum_impl(std::span<const T> terms) {
  if (terms.size() <= 16) {
    T acc{};
    for (const T& t : terms) acc += t;
    return acc;
  }
  const std::size_t mid = terms.size() / 2;
  return pairwise_sum_impl(terms.first(mid)) + pairwise_sum_impl(terms.subspan(mid));
}

}  // namespace

Complex pairwise_sum(std::span<const Complex> terms) { return pairwise_sum_impl(terms); }
double pairwise_sum(std::span<const double> terms) { return pairwise_sum_impl(terms); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, n / 64 + 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace triprod
