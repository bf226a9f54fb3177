#include "nrange/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nrange/optimize.hpp"
#include "nrange/ranges.hpp"
#include "nrange/rng.hpp"

namespace nrange {

const char* to_string(FamilyId id) {
  switch (id) {
    case FamilyId::Thm21:
      return "thm21";
    case FamilyId::RemarkCase1:
      return "remark_case1";
    case FamilyId::RemarkCase2:
      return "remark_case2";
    case FamilyId::Example32:
      return "example32";
    case FamilyId::Prop33:
      return "prop33";
    case FamilyId::Example34:
      return "example34";
  }
  return "?";
}

std::vector<FamilyId> all_families() {
  return {FamilyId::Thm21,     FamilyId::RemarkCase1, FamilyId::RemarkCase2,
          FamilyId::Example32, FamilyId::Prop33,      FamilyId::Example34};
}

FamilyId parse_family(const std::string& text) {
  for (FamilyId id : all_families())
    if (text == to_string(id)) return id;
  throw std::invalid_argument("unknown family '" + text + "'");
}

const char* to_string(SweepMode m) { return m == SweepMode::StructuredExact ? "structured-exact" : "optimizer"; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec geometric_weights(int m) {
  Vec w(m);
  for (int k = 0; k < m; ++k) w[k] = std::ldexp(1.0, -(k + 1));
  return w;
}

Mat harmonic_diag(int m) {
  Mat S = Mat::Zero(m, m);
  for (int k = 0; k < m; ++k) S(k, k) = (k + 1.0) / (k + 2.0);
  return S;
}

// max{0, ((1+a) c - 1)/a}
std::function<double(double)> clipped_law(double c) {
  return [c](double a) { return std::max(0.0, ((1.0 + a) * c - 1.0) / a); };
}

Mat selector(int rows, int cols, int offset) {
  Mat P = Mat::Zero(rows, cols);
  for (int i = 0; i < rows; ++i) P(i, offset + i) = 1.0;
  return P;
}

}  // namespace

Prop33Data default_prop33_data(int m) { return {Norm::lp(kInf, m), geometric_weights(m)}; }

FamilyInstance make_family(FamilyId id, int m, const std::optional<Prop33Data>& prop33) {
  if (m < 2) throw std::invalid_argument("family truncation needs m >= 2");
  std::optional<SubspacePair> pair;
  std::optional<Norm> base;
  OperatorSpec op;
  std::function<double(double)> ref, exact;
  switch (id) {
    case FamilyId::Thm21: {
      // Y = R^m x R^m, |(x,t)| = max{|x|_2, |Sx|_inf + |t|_inf}; J x = (x,0), T x = (0,Sx).
      const Mat S = harmonic_diag(m);
      const Mat PX = selector(m, 2 * m, 0), PZ = selector(m, 2 * m, m);
      const Norm Y = Norm::max_of({Norm::pullback(PX, Norm::lp(2, m)),
                                   Norm::sum_of({Norm::pullback(S * PX, Norm::lp(kInf, m)),
                                                 Norm::pullback(PZ, Norm::lp(kInf, m))})})
                         .declare_full(true);
      Mat J = Mat::Zero(2 * m, m);
      J.topRows(m).setIdentity();
      Mat T = Mat::Zero(2 * m, m);
      T.bottomRows(m) = S;
      pair = SubspacePair::make(Y, J);
      op = {T, "thm21"};
      base = Norm::lp(2, m);
      // sup over the l_2 sphere of |Sx|_inf is the largest row norm.
      const double c = S.rowwise().norm().maxCoeff();
      exact = [c](double a) { return std::max(1.0, (1.0 + a) * c); };
      ref = clipped_law(m / (m + 1.0));
      break;
    }
    case FamilyId::RemarkCase1: {
      // Y = R^m x R, |(x,t)| = max{|x|_inf, |w.x| + |t|}; T x = (0, w.x).
      const Vec w = geometric_weights(m);
      const Mat PX = selector(m, m + 1, 0);
      Mat Q = Mat::Zero(2, m + 1);
      Q.row(0).head(m) = w.transpose();
      Q(1, m) = 1.0;
      const Norm Y =
          Norm::max_of({Norm::pullback(PX, Norm::lp(kInf, m)), Norm::pullback(Q, Norm::lp(1, 2))}).declare_full(true);
      Mat J = Mat::Zero(m + 1, m);
      J.topRows(m).setIdentity();
      Mat T = Mat::Zero(m + 1, m);
      T.row(m) = w.transpose();
      pair = SubspacePair::make(Y, J);
      op = {T, "remark_case1"};
      base = Norm::lp(kInf, m);
      const double c = w.cwiseAbs().sum();
      exact = [c](double a) { return std::max(1.0, (1.0 + a) * c); };
      ref = clipped_law(1.0 - std::ldexp(1.0, -m));
      break;
    }
    case FamilyId::RemarkCase2: {
      // X = l_2^m with coordinates 0..m-1; rows s_n = n/(n+1) (e_n - e_0)/sqrt 2.
      Mat S = Mat::Zero(m - 1, m);
      for (int n = 1; n < m; ++n) {
        const double c = n / (n + 1.0) / std::sqrt(2.0);
        S(n - 1, n) = c;
        S(n - 1, 0) = -c;
      }
      const Mat PX = selector(m, m + 1, 0), Pt = selector(1, m + 1, m);
      const Norm Y = Norm::max_of({Norm::pullback(PX, Norm::lp(2, m)),
                                   Norm::sum_of({Norm::pullback(S * PX, Norm::lp(kInf, m - 1)),
                                                 Norm::pullback(Pt, Norm::lp(kInf, 1))})})
                         .declare_full(true);
      Mat J = Mat::Zero(m + 1, m);
      J.topRows(m).setIdentity();
      Mat T = Mat::Zero(m + 1, m);
      T(m, 0) = 1.0;
      pair = SubspacePair::make(Y, J);
      op = {T, "remark_case2"};
      base = Norm::lp(2, m);
      // sup_x |s_n.x| + a|x_0| = max over signs of |s_n +- a e_0|_2.
      exact = [S](double a) {
        double best = 1.0;
        for (Eigen::Index r = 0; r < S.rows(); ++r) {
          Vec plus = S.row(r).transpose(), minus = S.row(r).transpose();
          plus[0] += a;
          minus[0] -= a;
          best = std::max({best, plus.norm(), minus.norm()});
        }
        return best;
      };
      break;
    }
    case FamilyId::Example32:
    case FamilyId::Prop33: {
      Prop33Data d = id == FamilyId::Prop33 && prop33 ? *prop33 : default_prop33_data(m);
      if (id == FamilyId::Prop33 && prop33) {
        if (d.V.dim() != m || d.v0.size() != m) throw std::invalid_argument("prop33 data must have dimension m");
      }
      const double c = dual_norm_upper(d.V, d.v0);
      if (!(c <= 1.0 + 1e-12)) throw std::invalid_argument("prop33 functional must have dual norm <= 1");
      // Y = V (+)_inf (R (+)_1 R); X = {(v, v0.v, 0)}; T(v, v0.v, 0) = (0, 0, v0.v).
      const Norm Y = Norm::absolute_sum(AbsoluteGauge::linf(), d.V, Norm::lp(1, 2));
      Mat J = Mat::Zero(m + 2, m);
      J.topRows(m).setIdentity();
      J.row(m) = d.v0.transpose();
      Mat T = Mat::Zero(m + 2, m);
      T.row(m + 1) = d.v0.transpose();
      pair = SubspacePair::make(Y, J);
      op = {T, to_string(id)};
      base = d.V;
      exact = [c](double a) { return std::max(1.0, (1.0 + a) * c); };
      ref = id == FamilyId::Example32 ? clipped_law(1.0 - std::ldexp(1.0, -m)) : clipped_law(c);
      break;
    }
    case FamilyId::Example34: {
      // Y = l_2^m (+)_inf (l_2^m (+)_1 l_2^m); J x = (x, Sx, 0), T x = (0, 0, Sx).
      const Mat S = harmonic_diag(m);
      const Norm Y = Norm::absolute_sum(
          AbsoluteGauge::linf(), Norm::lp(2, m),
          Norm::absolute_sum(AbsoluteGauge::l1(), Norm::lp(2, m), Norm::lp(2, m)));
      Mat J = Mat::Zero(3 * m, m);
      J.topRows(m).setIdentity();
      J.middleRows(m, m) = S;
      Mat T = Mat::Zero(3 * m, m);
      T.bottomRows(m) = S;
      pair = SubspacePair::make(Y, J);
      op = {T, "example34"};
      base = Norm::lp(2, m);
      Eigen::JacobiSVD<Mat> svd(S);
      const double c = svd.singularValues()[0];
      exact = [c](double a) { return std::max(1.0, (1.0 + a) * c); };
      ref = clipped_law(m / (m + 1.0));
      break;
    }
  }
  return FamilyInstance{id, m, *pair, op, *base, ref, exact};
}

double isometry_defect(const FamilyInstance& f, int samples, std::uint64_t seed) {
  CounterRng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec x = rng.normal_vector(f.m);
    const double a = eval_norm(f.pair.Y, Vec(f.pair.J * x));
    const double b = eval_norm(f.X_base, x);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, b));
  }
  return worst;
}

GapProfile sweep(FamilyId id, const std::vector<int>& m_list, const std::vector<double>& alpha_list,
                 const SweepOptions& opt) {
  if (m_list.empty() || alpha_list.empty()) throw std::invalid_argument("sweep needs nonempty m and alpha lists");
  for (double a : alpha_list)
    if (!(a > 0.0)) throw std::invalid_argument("sweep alphas must be positive");
  GapProfile prof;
  prof.id = id;
  prof.mode = opt.mode;
  for (int m : m_list) {
    const FamilyInstance f = make_family(id, m);
    RangeOptions ro;
    ro.seed = opt.seed;
    ro.budget = std::max(opt.budget, 2 * m + 2 + ro.starts + 64);
    SupWResult w;
    w.value = std::numeric_limits<double>::quiet_NaN();
    w.witness = Vec::Unit(m, m - 1);
    if (opt.with_sup_w) w = sup_re_W(f.pair, f.T, ro);
    for (double a : alpha_list) {
      GapRow row;
      row.m = m;
      row.alpha = a;
      if (opt.mode == SweepMode::StructuredExact) {
        row.quotient = (f.exact_opnorm(a) - 1.0) / a;
      } else {
        ro.alphas = {a};
        const MaxVResult v = max_re_V(f.pair, f.T, ro, &w);
        row.quotient = v.upper;
      }
      row.reference = f.reference ? f.reference(a) : std::numeric_limits<double>::quiet_NaN();
      row.sup_re_W = w.value;
      prof.rows.push_back(row);
    }
  }
  return prof;
}

}  // namespace nrange
