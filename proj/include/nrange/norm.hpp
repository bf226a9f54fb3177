#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nrange/gauge.hpp"

namespace nrange {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace detail {
struct NormNode;
}

/// Immutable, shareable expression tree defining a (semi)norm on R^dim.
///
///   Lp{p, dim}                 ||x||_p, p in [1, inf]
///   AbsoluteSum{g, L, R}       g(||x_L||_L, ||x_R||_R) on x = (x_L, x_R)
///   Pullback{A, inner}         ||A x||_inner (a seminorm when A has a kernel)
///   MaxOf{terms}, SumOf{terms} pointwise max / sum of seminorms
///
/// Copies share the node; nothing is mutated after construction apart from
/// thread-safe lazily computed caches.
class Norm {
 public:
  enum class Kind { Lp, AbsoluteSum, Pullback, MaxOf, SumOf };

  static Norm lp(double p, int dim);
  static Norm absolute_sum(AbsoluteGauge gauge, Norm left, Norm right);
  static Norm pullback(Mat map, Norm inner);
  static Norm max_of(std::vector<Norm> terms);
  static Norm sum_of(std::vector<Norm> terms);

  /// Copy carrying the "full norm" declaration. Lp and AbsoluteSum of full
  /// norms are declared full by default; Pullback, MaxOf and SumOf are not.
  [[nodiscard]] Norm declare_full(bool full = true) const;
  [[nodiscard]] bool declared_full() const;

  [[nodiscard]] Kind kind() const;
  [[nodiscard]] int dim() const;

  [[nodiscard]] double p() const;
  [[nodiscard]] const AbsoluteGauge& gauge() const;
  [[nodiscard]] const Norm& left() const;
  [[nodiscard]] const Norm& right() const;
  [[nodiscard]] const Mat& map() const;
  [[nodiscard]] const Norm& inner() const;
  [[nodiscard]] const std::vector<Norm>& terms() const;

  /// Orthonormal basis (dim x d) of {x : ||x|| = 0}.
  [[nodiscard]] const Mat& kernel_basis() const;
  /// Orthonormal basis of the orthogonal complement of the kernel.
  [[nodiscard]] const Mat& row_space_basis() const;
  [[nodiscard]] bool is_definite() const { return kernel_basis().cols() == 0; }
  /// Pullback by a square invertible map.
  [[nodiscard]] bool invertible_pullback() const;
  /// Solves map() * x = y for an invertible square pullback.
  [[nodiscard]] Vec solve_map(const Vec& y) const;
  /// Solves map()^T * g = f for an invertible square pullback.
  [[nodiscard]] Vec solve_map_transpose(const Vec& f) const;
  /// True when the dual norm has a closed form (Lp, AbsoluteSum and
  /// invertible pullbacks of such trees).
  [[nodiscard]] bool exact_dual() const;
  /// True when every leaf is l_1 or l_inf and every gauge is polyhedral.
  [[nodiscard]] bool polyhedral() const;

  /// Text form accepted by the spec-file expression parser.
  [[nodiscard]] std::string to_string() const;

 private:
  explicit Norm(std::shared_ptr<const detail::NormNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::NormNode> node_;
};

/// ||v||. Throws std::invalid_argument on dimension mismatch.
double eval_norm(const Norm& norm, const Vec& v);

struct DualNormValue {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  [[nodiscard]] double width() const { return upper - lower; }
};

struct DualNormOptions {
  int budget = 4000;
  std::uint64_t seed = 0x5eed;
};

/// ||f||_* = sup{f(x) : ||x|| <= 1}. Closed form where exact_dual() holds,
/// otherwise a bracket [optimizer witness, decomposition bound].
/// Throws std::invalid_argument for seminorms (nontrivial kernel).
DualNormValue eval_dual_norm(const Norm& norm, const Vec& f, const DualNormOptions& opt = {});

/// Upper bound on the dual norm from functional decompositions alone; equal
/// to the dual norm for exact_dual() trees, +inf when f does not vanish on
/// the kernel.
double dual_norm_upper(const Norm& norm, const Vec& f, const DualNormOptions& opt = {});

/// v / ||v||. Throws std::invalid_argument for vectors of zero norm.
Vec project_to_sphere(const Norm& norm, const Vec& v);

struct NormAxiomReport {
  double homogeneity_violation = 0.0;
  double triangle_violation = 0.0;
  bool definiteness_checked = false;
  int kernel_dim = 0;
  double definiteness_violation = 0.0;
  bool pass = false;
};

/// Seeded sampling check of the seminorm axioms and, for norms declared
/// full, of definiteness (structural kernel plus sampled positivity).
NormAxiomReport check_norm_axioms(const Norm& norm, int sample_count, std::uint64_t seed);

}  // namespace nrange
