#include "nrange/norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "nrange/optimize.hpp"
#include "nrange/rng.hpp"

namespace nrange {

namespace detail {

struct NormNode {
  Norm::Kind kind = Norm::Kind::Lp;
  int dim = 0;
  bool full = true;
  double p = 2.0;
  std::optional<AbsoluteGauge> gauge;
  std::vector<Norm> children;
  Mat map;

  mutable std::once_flag kernel_once;
  mutable Mat kernel;
  mutable Mat rowspace;

  mutable std::once_flag lu_once;
  mutable bool invertible = false;
  mutable std::optional<Eigen::FullPivLU<Mat>> lu;
  mutable std::optional<Eigen::FullPivLU<Mat>> lu_t;

  std::shared_ptr<NormNode> clone_spec() const {
    auto n = std::make_shared<NormNode>();
    n->kind = kind;
    n->dim = dim;
    n->full = full;
    n->p = p;
    n->gauge = gauge;
    n->children = children;
    n->map = map;
    return n;
  }
};

}  // namespace detail

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt17(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << x;
  return os.str();
}

Mat null_space(const Mat& m) {
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0) return Mat::Identity(cols, cols);
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  const double tol = 1e-10 * std::max(1.0, smax);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

Mat orth_complement(const Mat& basis, Eigen::Index n) {
  if (basis.cols() == 0) return Mat::Identity(n, n);
  if (basis.cols() == n) return Mat(n, 0);
  Eigen::HouseholderQR<Mat> qr(basis);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - basis.cols());
}

double lp_value(double p, const Vec& v) {
  if (v.size() == 0) return 0.0;
  if (p == 1.0) return v.cwiseAbs().sum();
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  if (p == 2.0) return v.norm();
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  return m * std::pow((v.cwiseAbs() / m).array().pow(p).sum(), 1.0 / p);
}

double conjugate(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double eval_unchecked(const Norm& n, const Vec& v) {
  switch (n.kind()) {
    case Norm::Kind::Lp:
      return lp_value(n.p(), v);
    case Norm::Kind::AbsoluteSum: {
      const int dl = n.left().dim();
      return n.gauge().value(eval_unchecked(n.left(), v.head(dl)),
                             eval_unchecked(n.right(), v.tail(v.size() - dl)));
    }
    case Norm::Kind::Pullback:
      return eval_unchecked(n.inner(), n.map() * v);
    case Norm::Kind::MaxOf: {
      double m = 0.0;
      for (const auto& t : n.terms()) m = std::max(m, eval_unchecked(t, v));
      return m;
    }
    case Norm::Kind::SumOf: {
      double s = 0.0;
      for (const auto& t : n.terms()) s += eval_unchecked(t, v);
      return s;
    }
  }
  return 0.0;
}

// Derivative-free compass minimization over R^s; every evaluated point is a
// valid upper bound, so the result is sound however far it gets.
double compass_minimize(const std::function<double(const Vec&)>& phi, Vec z, double h, double floor,
                        int budget) {
  double best = phi(z);
  int used = 1;
  const Eigen::Index s = z.size();
  while (h >= floor && used < budget) {
    bool improved = false;
    for (Eigen::Index j = 0; j < 2 * s && used < budget; ++j) {
      Vec c = z;
      c[j / 2] += (j % 2 == 0 ? h : -h);
      const double v = phi(c);
      ++used;
      if (v < best) {
        best = v;
        z = std::move(c);
        improved = true;
      }
    }
    if (!improved) h *= 0.5;
  }
  return best;
}

double upper_rec(const Norm& n, const Vec& f, const DualNormOptions& opt);

// inf over f = sum_i R_i c_i of combine(upper_i(R_i c_i)).
double split_upper(const std::vector<Norm>& terms, const Vec& f, const DualNormOptions& opt, bool sum_combine) {
  const Eigen::Index n = f.size();
  std::vector<Mat> bases;
  Eigen::Index total = 0;
  for (const auto& t : terms) {
    bases.push_back(t.row_space_basis());
    total += bases.back().cols();
  }
  Mat B(n, total);
  Eigen::Index off = 0;
  for (const auto& b : bases) {
    B.middleCols(off, b.cols()) = b;
    off += b.cols();
  }
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(B);
  const Vec c0 = cod.solve(f);
  if ((B * c0 - f).norm() > 1e-9 * (1.0 + f.norm())) return kInf;
  const Mat N = null_space(B);

  DualNormOptions child = opt;
  child.budget = std::max(50, opt.budget / 8);
  auto phi_c = [&](const Vec& c) {
    double acc = 0.0;
    Eigen::Index o = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const Eigen::Index r = bases[i].cols();
      const Vec fi = bases[i] * c.segment(o, r);
      o += r;
      const double u = fi.norm() == 0.0 ? 0.0 : upper_rec(terms[i], fi, child);
      acc = sum_combine ? acc + u : std::max(acc, u);
    }
    return acc;
  };
  if (N.cols() == 0) return phi_c(c0);

  // Start from the best of: least-norm split, and "everything on one term".
  Vec z0 = Vec::Zero(N.cols());
  double best = phi_c(c0);
  off = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Eigen::Index r = bases[i].cols();
    const Vec ci = bases[i].transpose() * f;
    if ((bases[i] * ci - f).norm() <= 1e-9 * (1.0 + f.norm())) {
      Vec c = Vec::Zero(total);
      c.segment(off, r) = ci;
      const Vec z = N.transpose() * (c - c0);
      const double v = phi_c(c0 + N * z);
      if (v < best) {
        best = v;
        z0 = z;
      }
    }
    off += r;
  }
  auto phi = [&](const Vec& z) { return phi_c(c0 + N * z); };
  const double scale = 1.0 + f.norm();
  return std::min(best, compass_minimize(phi, z0, 0.5 * scale, 1e-10 * scale, opt.budget));
}

double upper_rec(const Norm& n, const Vec& f, const DualNormOptions& opt) {
  switch (n.kind()) {
    case Norm::Kind::Lp:
      return lp_value(conjugate(n.p()), f);
    case Norm::Kind::AbsoluteSum: {
      const int dl = n.left().dim();
      const double a = upper_rec(n.left(), f.head(dl), opt);
      const double b = upper_rec(n.right(), f.tail(f.size() - dl), opt);
      if (std::isinf(a) || std::isinf(b)) return kInf;
      return n.gauge().dual_value(a, b);
    }
    case Norm::Kind::Pullback: {
      if (n.invertible_pullback()) return upper_rec(n.inner(), n.solve_map_transpose(f), opt);
      const Mat& R = n.inner().row_space_basis();
      const Mat B = n.map().transpose() * R;
      Eigen::CompleteOrthogonalDecomposition<Mat> cod(B);
      const Vec c0 = cod.solve(f);
      if ((B * c0 - f).norm() > 1e-9 * (1.0 + f.norm())) return kInf;
      const Mat N = null_space(B);
      DualNormOptions child = opt;
      child.budget = std::max(50, opt.budget / 8);
      auto phi = [&](const Vec& z) { return upper_rec(n.inner(), R * (c0 + N * z), child); };
      if (N.cols() == 0) return phi(Vec::Zero(0));
      const double scale = 1.0 + f.norm();
      return compass_minimize(phi, Vec::Zero(N.cols()), 0.5 * scale, 1e-10 * scale, opt.budget);
    }
    case Norm::Kind::MaxOf:
      if (n.terms().size() == 1) return upper_rec(n.terms()[0], f, opt);
      return split_upper(n.terms(), f, opt, true);
    case Norm::Kind::SumOf:
      if (n.terms().size() == 1) return upper_rec(n.terms()[0], f, opt);
      return split_upper(n.terms(), f, opt, false);
  }
  return kInf;
}

}  // namespace

Norm Norm::lp(double p, int dim) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp norm requires p >= 1");
  if (dim < 1) throw std::invalid_argument("lp norm requires dim >= 1");
  auto node = std::make_shared<detail::NormNode>();
  node->kind = Kind::Lp;
  node->p = p;
  node->dim = dim;
  node->full = true;
  return Norm(node);
}

Norm Norm::absolute_sum(AbsoluteGauge gauge, Norm left, Norm right) {
  auto node = std::make_shared<detail::NormNode>();
  node->kind = Kind::AbsoluteSum;
  node->dim = left.dim() + right.dim();
  node->full = left.declared_full() && right.declared_full();
  node->gauge = std::move(gauge);
  node->children = {std::move(left), std::move(right)};
  return Norm(node);
}

Norm Norm::pullback(Mat map, Norm inner) {
  if (map.rows() != inner.dim())
    throw std::invalid_argument("pullback map has " + std::to_string(map.rows()) + " rows but inner dimension is " +
                                std::to_string(inner.dim()));
  if (map.cols() < 1) throw std::invalid_argument("pullback map needs at least one column");
  auto node = std::make_shared<detail::NormNode>();
  node->kind = Kind::Pullback;
  node->dim = static_cast<int>(map.cols());
  node->full = false;
  node->map = std::move(map);
  node->children = {std::move(inner)};
  return Norm(node);
}

namespace {
std::shared_ptr<detail::NormNode> combination_node(Norm::Kind kind, std::vector<Norm> terms) {
  if (terms.empty()) throw std::invalid_argument("max/sum of an empty term list");
  const int d = terms.front().dim();
  for (const auto& t : terms)
    if (t.dim() != d) throw std::invalid_argument("max/sum terms must share the ambient dimension");
  auto node = std::make_shared<detail::NormNode>();
  node->kind = kind;
  node->dim = d;
  node->full = false;
  node->children = std::move(terms);
  return node;
}
}  // namespace

Norm Norm::max_of(std::vector<Norm> terms) { return Norm(combination_node(Kind::MaxOf, std::move(terms))); }
Norm Norm::sum_of(std::vector<Norm> terms) { return Norm(combination_node(Kind::SumOf, std::move(terms))); }

Norm Norm::declare_full(bool full) const {
  auto node = node_->clone_spec();
  node->full = full;
  return Norm(node);
}

bool Norm::declared_full() const { return node_->full; }
Norm::Kind Norm::kind() const { return node_->kind; }
int Norm::dim() const { return node_->dim; }
double Norm::p() const { return node_->p; }
const AbsoluteGauge& Norm::gauge() const { return *node_->gauge; }
const Norm& Norm::left() const { return node_->children.at(0); }
const Norm& Norm::right() const { return node_->children.at(1); }
const Mat& Norm::map() const { return node_->map; }
const Norm& Norm::inner() const { return node_->children.at(0); }
const std::vector<Norm>& Norm::terms() const { return node_->children; }

const Mat& Norm::kernel_basis() const {
  std::call_once(node_->kernel_once, [this] {
    const Eigen::Index n = dim();
    Mat k;
    switch (kind()) {
      case Kind::Lp:
        k = Mat(n, 0);
        break;
      case Kind::AbsoluteSum: {
        const Mat& kl = left().kernel_basis();
        const Mat& kr = right().kernel_basis();
        k = Mat::Zero(n, kl.cols() + kr.cols());
        k.topLeftCorner(kl.rows(), kl.cols()) = kl;
        k.bottomRightCorner(kr.rows(), kr.cols()) = kr;
        break;
      }
      case Kind::Pullback: {
        const Mat& ki = inner().kernel_basis();
        Mat proj = map();
        if (ki.cols() > 0) proj -= ki * (ki.transpose() * map());
        k = null_space(proj);
        break;
      }
      case Kind::MaxOf:
      case Kind::SumOf: {
        Mat stacked(n * static_cast<Eigen::Index>(terms().size()), n);
        for (std::size_t i = 0; i < terms().size(); ++i) {
          const Mat& ki = terms()[i].kernel_basis();
          Mat pi = Mat::Identity(n, n);
          if (ki.cols() > 0) pi -= ki * ki.transpose();
          stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) = pi;
        }
        k = null_space(stacked);
        break;
      }
    }
    node_->kernel = k;
    node_->rowspace = orth_complement(k, n);
  });
  return node_->kernel;
}

const Mat& Norm::row_space_basis() const {
  (void)kernel_basis();
  return node_->rowspace;
}

bool Norm::invertible_pullback() const {
  if (kind() != Kind::Pullback || map().rows() != map().cols()) return false;
  std::call_once(node_->lu_once, [this] {
    node_->lu.emplace(map());
    node_->lu_t.emplace(map().transpose());
    node_->invertible = node_->lu->isInvertible();
  });
  return node_->invertible;
}

Vec Norm::solve_map(const Vec& y) const {
  if (!invertible_pullback()) throw std::logic_error("solve_map on a non-invertible pullback");
  return node_->lu->solve(y);
}

Vec Norm::solve_map_transpose(const Vec& f) const {
  if (!invertible_pullback()) throw std::logic_error("solve_map_transpose on a non-invertible pullback");
  return node_->lu_t->solve(f);
}

bool Norm::exact_dual() const {
  switch (kind()) {
    case Kind::Lp:
      return true;
    case Kind::AbsoluteSum:
      return left().exact_dual() && right().exact_dual();
    case Kind::Pullback:
      return invertible_pullback() && inner().exact_dual();
    case Kind::MaxOf:
    case Kind::SumOf:
      return terms().size() == 1 && terms()[0].exact_dual();
  }
  return false;
}

bool Norm::polyhedral() const {
  switch (kind()) {
    case Kind::Lp:
      return p() == 1.0 || std::isinf(p());
    case Kind::AbsoluteSum:
      return gauge().is_polyhedral() && left().polyhedral() && right().polyhedral();
    case Kind::Pullback:
      return inner().polyhedral();
    case Kind::MaxOf:
    case Kind::SumOf:
      return std::all_of(terms().begin(), terms().end(), [](const Norm& t) { return t.polyhedral(); });
  }
  return false;
}

std::string Norm::to_string() const {
  std::string body;
  bool default_full = true;
  switch (kind()) {
    case Kind::Lp:
      body = "lp(" + fmt17(p()) + "," + std::to_string(dim()) + ")";
      break;
    case Kind::AbsoluteSum:
      body = "abssum(" + gauge().to_string() + "," + left().to_string() + "," + right().to_string() + ")";
      default_full = left().declared_full() && right().declared_full();
      break;
    case Kind::Pullback: {
      body = "pullback(matrix(" + std::to_string(map().rows()) + "," + std::to_string(map().cols());
      for (Eigen::Index i = 0; i < map().rows(); ++i)
        for (Eigen::Index j = 0; j < map().cols(); ++j) body += "," + fmt17(map()(i, j));
      body += ")," + inner().to_string() + ")";
      default_full = false;
      break;
    }
    case Kind::MaxOf:
    case Kind::SumOf: {
      body = kind() == Kind::MaxOf ? "max(" : "sum(";
      for (std::size_t i = 0; i < terms().size(); ++i) body += (i ? "," : "") + terms()[i].to_string();
      body += ")";
      default_full = false;
      break;
    }
  }
  if (declared_full() == default_full) return body;
  return (declared_full() ? "full(" : "semi(") + body + ")";
}

double eval_norm(const Norm& norm, const Vec& v) {
  if (v.size() != norm.dim())
    throw std::invalid_argument("vector of length " + std::to_string(v.size()) + " in a space of dimension " +
                                std::to_string(norm.dim()));
  return eval_unchecked(norm, v);
}

double dual_norm_upper(const Norm& norm, const Vec& f, const DualNormOptions& opt) {
  if (f.size() != norm.dim())
    throw std::invalid_argument("functional of length " + std::to_string(f.size()) + " on a space of dimension " +
                                std::to_string(norm.dim()));
  return upper_rec(norm, f, opt);
}

DualNormValue eval_dual_norm(const Norm& norm, const Vec& f, const DualNormOptions& opt) {
  if (!norm.is_definite()) throw std::invalid_argument("dual norm of a seminorm (nontrivial kernel)");
  const double up = dual_norm_upper(norm, f, opt);
  if (norm.exact_dual()) return {up, up, true};
  SearchConfig cfg;
  cfg.budget = opt.budget;
  cfg.seed = opt.seed;
  cfg.starts = 4;
  cfg.extra_starts = {f};
  const auto res = sphere_maximize([&](const Vec& x) { return f.dot(x); }, norm, cfg);
  return {std::min(res.best_value, up), up, false};
}

Vec project_to_sphere(const Norm& norm, const Vec& v) {
  const double r = eval_norm(norm, v);
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("cannot project a zero-norm vector to the sphere");
  return v / r;
}

NormAxiomReport check_norm_axioms(const Norm& norm, int sample_count, std::uint64_t seed) {
  NormAxiomReport rep;
  CounterRng rng(seed);
  const int n = norm.dim();
  for (int s = 0; s < sample_count; ++s) {
    const Vec v = rng.normal_vector(n) * std::exp(rng.uniform(-2.0, 2.0));
    const Vec w = rng.normal_vector(n) * std::exp(rng.uniform(-2.0, 2.0));
    const double lam = rng.uniform(-3.0, 3.0);
    const double nv = eval_norm(norm, v), nw = eval_norm(norm, w);
    const double hom = std::abs(eval_norm(norm, Vec(lam * v)) - std::abs(lam) * nv) / std::max(1.0, std::abs(lam) * nv);
    const double tri = std::max(0.0, eval_norm(norm, Vec(v + w)) - nv - nw) / std::max(1.0, nv + nw);
    rep.homogeneity_violation = std::max(rep.homogeneity_violation, hom);
    rep.triangle_violation = std::max(rep.triangle_violation, tri);
    if (norm.declared_full() && nv <= 1e-12 * v.norm()) rep.definiteness_violation = 1.0;
  }
  if (norm.declared_full()) {
    rep.definiteness_checked = true;
    rep.kernel_dim = static_cast<int>(norm.kernel_basis().cols());
    if (rep.kernel_dim > 0) rep.definiteness_violation = 1.0;
  }
  rep.pass = rep.homogeneity_violation < 1e-9 && rep.triangle_violation < 1e-9 && rep.definiteness_violation < 1e-9;
  return rep;
}

}  // namespace nrange
