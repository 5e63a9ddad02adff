#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "triprod/specdecomp.hpp"

namespace triprod {

GroupElement GroupElement::rotation(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {c, -s, s, c};
}

double GroupElement::norm() const {
  const double dt = std::abs(det());
  if (!(dt > 0.0)) throw Error(ErrorKind::PreconditionViolated, "singular group element");
  Eigen::Matrix2d m;
  m << a, b, c, d;
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
  return svd.singularValues()(0) / std::sqrt(dt);
}

GroupElement GroupElement::inverse() const {
  const double dt = det();
  if (dt == 0.0) throw Error(ErrorKind::PreconditionViolated, "singular group element");
  return {d / dt, -b / dt, -c / dt, a / dt};
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Complex act_pointwise(const GroupElement& g, const SeriesParam& lam,
                      const std::function<Complex(double)>& phi, double theta) {
  const Complex lm1 = lam.lambda() - 1.0;
  const PlanePoint v = g.inverse().apply({std::cos(theta), std::sin(theta)});
  const double rho = std::hypot(v.x, v.y);
  const double theta_p = std::atan2(v.y, v.x);
  const Complex factor = std::exp(lm1 * (0.5 * std::log(std::abs(g.det())) + std::log(rho)));
  return factor * phi(theta_p);
}

GroupActionResult group_action(const GroupElement& g, const SeriesParam& lam, const CircleFunction& f) {
  const int n = f.max_mode();
  const int big = 4 * n + 16;
  const auto pulled = [&](double theta) {
    return act_pointwise(g, lam, [&](double t) { return f(t); }, theta);
  };
  const CircleFunction full = CircleFunction::from_samples(pulled, big);

  GroupActionResult out{full.truncated(n), 0.0, 0.0};
  for (int j = -big; j <= big; ++j) {
    const double e = std::norm(full.coeff(j));
    out.total_energy += e;
    if (std::abs(j) > n) out.tail_energy += e;
  }
  if (out.tail_energy > 0.01 * out.total_energy) {
    std::ostringstream os;
    os << "tail energy " << out.tail_energy << " of " << out.total_energy << " beyond mode " << n;
    throw Error(ErrorKind::TruncationOverflow, os.str());
  }
  return out;
}

Eigen::SparseMatrix<Complex> generator_matrix(Generator x, const SeriesParam& lam, int max_mode) {
  if (max_mode < 0) throw Error(ErrorKind::PreconditionViolated, "negative truncation");
  const int n = max_mode;
  const Complex lm1 = lam.lambda() - 1.0;
  const Complex i(0.0, 1.0);
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(2 * (2 * n + 1));
  for (int j = -n; j <= n; ++j) {
    const int col = j + n;
    const auto row = [&](int k) { return k + n + 1; };  // output modes |k| <= n+1
    switch (x) {
      case Generator::W:
        t.emplace_back(row(j), col, -2.0 * i * static_cast<double>(j));
        break;
      case Generator::H:
        t.emplace_back(row(j + 1), col, -(lm1 - 2.0 * j) / 2.0);
        t.emplace_back(row(j - 1), col, -(lm1 + 2.0 * j) / 2.0);
        break;
      case Generator::S:
        t.emplace_back(row(j + 1), col, i * (lm1 - 2.0 * j) / 2.0);
        t.emplace_back(row(j - 1), col, -i * (lm1 + 2.0 * j) / 2.0);
        break;
    }
  }
  Eigen::SparseMatrix<Complex> m(2 * n + 3, 2 * n + 1);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace triprod
