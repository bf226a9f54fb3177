#pragma once

#include <array>
#include <string>
#include <vector>

namespace nrange {

/// Point (a, b) of the plane on which an absolute norm acts.
struct Point2 {
  double a = 0.0;
  double b = 0.0;
};

/// Absolute norm on R^2: |(a,b)| depends only on (|a|,|b|) and
/// |(1,0)| = |(0,1)| = 1.
///
/// Two representations are supported: the l_p family, and a piecewise-linear
/// convex profile psi on [0,1] so that |(a,b)| = (|a|+|b|) psi(|b|/(|a|+|b|)).
/// l_1 and l_inf are stored as l_p but evaluated through their exact
/// piecewise-linear profiles, which keeps their faces exact.
class AbsoluteGauge {
 public:
  struct Breakpoint {
    double t;
    double psi;
  };

  static AbsoluteGauge lp(double p);
  static AbsoluteGauge l1() { return lp(1.0); }
  static AbsoluteGauge l2() { return lp(2.0); }
  static AbsoluteGauge linf();
  /// Throws std::invalid_argument unless the profile is convex, starts and
  /// ends at 1 and lies between max(t, 1-t) and 1.
  static AbsoluteGauge piecewise_linear(std::vector<Breakpoint> breakpoints);
  /// Parses "l1", "l2", "linf", "lp:<p>" or "pwl(t:psi,...)".
  static AbsoluteGauge parse(const std::string& text);

  [[nodiscard]] double value(double a, double b) const;
  [[nodiscard]] double value(Point2 p) const { return value(p.a, p.b); }
  [[nodiscard]] double psi(double t) const;

  /// The dual absolute norm, |(c,d)|* = sup{ca + db : |(a,b)| <= 1}.
  [[nodiscard]] AbsoluteGauge dual() const;
  [[nodiscard]] double dual_value(double c, double d) const;

  /// Generating set of the subdifferential at (a,b) != 0 (one or two
  /// elements, signs follow a and b). Vertices within `tol` in the profile
  /// parameter count as active.
  [[nodiscard]] std::vector<Point2> subdifferential(double a, double b,
                                                    double tol = 1e-9) const;

  /// A point (a,b) >= 0 with |(a,b)| = 1 maximizing ca + db for c, d >= 0.
  /// When the maximizing set is a segment, the point closest to the
  /// (normalized) hint is chosen.
  [[nodiscard]] Point2 attain(double c, double d, Point2 hint) const;

  [[nodiscard]] bool is_polyhedral() const { return !smooth_lp_; }
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] const std::vector<Breakpoint>& breakpoints() const { return pts_; }

 private:
  AbsoluteGauge() = default;
  // Sphere vertices (1-t_k, t_k)/psi(t_k) in the positive quadrant.
  [[nodiscard]] std::vector<Point2> vertices() const;
  // Normal n_k with n_k . v_k = n_k . v_{k+1} = 1 for every edge.
  [[nodiscard]] std::vector<Point2> edge_normals() const;

  bool smooth_lp_ = false;  // 1 < p < inf
  double p_ = 1.0;          // meaningful when named_lp_
  bool named_lp_ = false;
  std::vector<Breakpoint> pts_;
};

/// Largest b >= 0 with |(1,b)| = 1, by bisection to 1e-10.
double compute_b0(const AbsoluteGauge& g);

/// Diameter (in the gauge metric) of A(delta) = {(a,b) in B : a > 1-delta,
/// b >= b0} with the two points realizing it.
struct GaugeRegionReport {
  double b0 = 0.0;
  double delta = 0.0;
  double diameter = 0.0;
  std::array<Point2, 2> witnesses{};
};

GaugeRegionReport region_A_diameter(const AbsoluteGauge& g, double delta);

/// First delta on the grid 2^-1, ..., 2^-20 whose A(delta) has diameter
/// below eps. Throws std::runtime_error if the grid is exhausted.
double delta_for_diameter(const AbsoluteGauge& g, double eps);

}  // namespace nrange
