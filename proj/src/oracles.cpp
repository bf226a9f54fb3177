#include "nrange/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace nrange::oracle {

double lp(const Eigen::VectorXd& v, double p) {
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return std::pow(s, 1.0 / p);
}

double conjugate(double p) {
  if (p == 1.0) return INFINITY;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double gauge2(double a, double b, double p) {
  if (std::isinf(p)) return std::max(std::abs(a), std::abs(b));
  return std::pow(std::pow(std::abs(a), p) + std::pow(std::abs(b), p), 1.0 / p);
}

double ball_height(double a, double p) {
  if (std::isinf(p)) return 1.0;
  return std::pow(std::max(0.0, 1.0 - std::pow(std::abs(a), p)), 1.0 / p);
}

double region_diameter(double p, double delta, int steps) {
  // b0 = largest b with |(1,b)| = 1: 1 for ℓ∞, 0 otherwise.
  const double b0 = std::isinf(p) ? 1.0 : 0.0;
  const double left = 1.0 - delta;
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i <= steps; ++i) {
    const double a = left + delta * i / steps;
    const double top = ball_height(a, p);
    if (top < b0) continue;
    pts.emplace_back(a, b0);
    pts.emplace_back(a, top);
  }
  const double top_left = ball_height(left, p);
  for (int i = 0; i <= steps; ++i) pts.emplace_back(left, b0 + (top_left - b0) * i / steps);
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      d = std::max(d, gauge2(pts[i].first - pts[j].first, pts[i].second - pts[j].second, p));
  return d;
}

double law_example34(int m, double alpha) {
  const double r = static_cast<double>(m) / (m + 1.0);
  return std::max(0.0, ((1.0 + alpha) * r - 1.0) / alpha);
}

double law_c0(int m, double alpha) {
  return std::max(0.0, ((1.0 + alpha) * (1.0 - std::ldexp(1.0, -m)) - 1.0) / alpha);
}

double convexity_l2(double eps) { return 1.0 - std::sqrt(1.0 - eps * eps / 4.0); }

double lattice_derivative(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& y) {
  const double a = std::ldexp(1.0, -12);
  return (f(u + a * y) - f(u)) / a;
}

}  // namespace nrange::oracle
