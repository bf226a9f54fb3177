#pragma once

// Reference values computed from first principles with plain Eigen - no
// use of the Norm/gauge machinery - for cross-checking the library.

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace nrange::oracle {

double lp(const Eigen::VectorXd& v, double p);
/// Conjugate exponent, with 1 <-> inf.
double conjugate(double p);

/// ℓp gauge on R^2 and its unit-ball height b(a) = (1 - a^p)^(1/p).
double gauge2(double a, double b, double p);
double ball_height(double a, double p);

/// Diameter of {(a,b) in B_p : a > 1 - delta, b >= b0} by pairwise
/// distances over a boundary grid with `steps` points per edge.
double region_diameter(double p, double delta, int steps = 400);

/// max{0, ((1+a) m/(m+1) - 1)/a}.
double law_example34(int m, double alpha);
/// max{0, ((1+a)(1 - 2^-m) - 1)/a}.
double law_c0(int m, double alpha);
/// 1 - sqrt(1 - eps^2/4).
double convexity_l2(double eps);

/// (f(u + a y) - f(u))/a at a = 2^-12: the exact one-sided derivative of a
/// piecewise linear f at lattice data with small denominators.
double lattice_derivative(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& y);

}  // namespace nrange::oracle
