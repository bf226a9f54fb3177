#include "nrange/ranges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nrange/optimize.hpp"
#include "nrange/rng.hpp"

namespace nrange {

std::vector<double> default_alpha_grid() {
  std::vector<double> a;
  for (int k = 0; k <= 30; ++k) a.push_back(std::ldexp(1.0, -k));
  return a;
}

namespace {

void check_alphas(const std::vector<double>& alphas) {
  if (alphas.empty()) throw std::invalid_argument("alpha grid is empty");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) throw std::invalid_argument("alpha grid must be positive");
    if (i && !(alphas[i] < alphas[i - 1])) throw std::invalid_argument("alpha grid must be strictly descending");
  }
}

// Seminorms whose pointwise max is the norm: MaxOf terms and the two sides
// of an l_inf absolute sum, recursively. The sup of a max splits into a max
// of sups, which spares each search the flat region where another piece wins.
void max_pieces(const Norm& n, const Mat& pre, std::vector<std::pair<Norm, Mat>>& out) {
  if (n.kind() == Norm::Kind::MaxOf) {
    for (const auto& t : n.terms()) max_pieces(t, pre, out);
    return;
  }
  if (n.kind() == Norm::Kind::AbsoluteSum && n.gauge().to_string() == "linf") {
    const int dl = n.left().dim(), dr = n.right().dim();
    max_pieces(n.left(), Mat(pre.topRows(dl)), out);
    max_pieces(n.right(), Mat(pre.bottomRows(dr)), out);
    return;
  }
  out.emplace_back(n, pre);
}

// Starts for sup ||PM x||: PM^T v for extreme dual functionals v of the
// piece (largest first), or the top right singular direction of PM.
std::vector<Vec> piece_starts(const Norm& piece, const Mat& PM, int limit) {
  std::vector<Vec> dirs;
  const auto gens = face_generators(piece, Vec::Zero(piece.dim()));
  if (gens) {
    for (const auto& v : *gens) dirs.push_back(PM.transpose() * v);
    std::stable_sort(dirs.begin(), dirs.end(), [](const Vec& a, const Vec& b) { return a.norm() > b.norm(); });
    if (static_cast<int>(dirs.size()) > limit) dirs.resize(limit);
  } else {
    Vec x = Vec::Ones(PM.cols());
    for (int it = 0; it < 60; ++it) {
      Vec y = PM.transpose() * (PM * x);
      const double ny = y.norm();
      if (ny == 0.0) break;
      x = y / ny;
    }
    dirs.push_back(x);
  }
  return dirs;
}

}  // namespace

SupWResult sup_re_W(const SubspacePair& pair, const OperatorSpec& op, const RangeOptions& opt) {
  validate_operator(pair, op);
  SupWResult res;
  bool exact = true;
  auto objective = [&](const Vec& x) {
    ++res.evaluations;
    const Vec u = project_to_sphere(pair.Y, Vec(pair.J * x));
    const Vec y = op.T * x;
    const StateSet st = state_set(pair.Y, u);
    if (st.kind != StateKind::Generic) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& g : st.generators) best = std::max(best, g.dot(y));
      return best;
    }
    exact = false;
    return tau(pair.Y, u, y).lower;
  };
  SearchConfig cfg;
  cfg.budget = opt.budget;
  cfg.starts = opt.starts;
  cfg.seed = opt.seed;
  const SearchResult r = sphere_maximize(objective, pair.X, cfg);
  res.value = r.best_value;
  res.witness = r.best_point;
  res.exact = exact;
  return res;
}

MaxVResult max_re_V(const SubspacePair& pair, const OperatorSpec& op, const RangeOptions& opt, const SupWResult* supw) {
  validate_operator(pair, op);
  check_alphas(opt.alphas);
  SupWResult local;
  if (!supw) {
    local = sup_re_W(pair, op, opt);
    supw = &local;
  }
  MaxVResult res;
  res.lower = supw->value;

  if (opt.exact_opnorm) {
    res.structured = true;
    for (double a : opt.alphas) {
      const double nrm = opt.exact_opnorm(a);
      res.trace.push_back({a, nrm, (nrm - 1.0) / a, Vec()});
    }
  } else {
    const int per_alpha =
        std::max(opt.starts + 1, opt.budget / static_cast<int>(std::min<std::size_t>(4, opt.alphas.size())));
    Vec warm = supw->witness;
    for (std::size_t i = 0; i < opt.alphas.size(); ++i) {
      const double a = opt.alphas[i];
      const Mat M = pair.J + a * op.T;
      SearchConfig cfg;
      cfg.budget = per_alpha;
      cfg.starts = opt.starts;
      cfg.seed = opt.seed + 0x1000 + i;
      cfg.extra_starts = {supw->witness};
      if (i) cfg.extra_starts.push_back(warm);
      cfg.step.initial = i ? std::min(0.5, 4.0 * a) : 0.5;
      std::vector<std::pair<Norm, Mat>> pieces;
      max_pieces(pair.Y, M, pieces);
      if (pieces.size() > 8) pieces = {{pair.Y, M}};
      cfg.budget = std::max(cfg.starts + 1, per_alpha / static_cast<int>(pieces.size()));
      QuotientPoint best{a, -1.0, 0.0, Vec()};
      for (const auto& [piece, PM] : pieces) {
        cfg.extra_starts = {supw->witness};
        if (i) cfg.extra_starts.push_back(warm);
        for (const auto& d : piece_starts(piece, PM, 16))
          if (eval_norm(pair.X, d) > 1e-12) cfg.extra_starts.push_back(d);
        const SearchResult r =
            sphere_maximize([&](const Vec& x) { return eval_norm(piece, Vec(PM * x)); }, pair.X, cfg);
        const double full = eval_norm(pair.Y, Vec(M * r.best_point));
        if (full > best.opnorm) {
          best.opnorm = full;
          best.witness = r.best_point;
        }
      }
      warm = best.witness;
      best.quotient = (best.opnorm - 1.0) / a;
      res.trace.push_back(best);
    }
    // Every witness is feasible at every alpha: keep the best per alpha.
    for (auto& t : res.trace) {
      const Mat M = pair.J + t.alpha * op.T;
      for (const auto& s : res.trace) {
        const double v = eval_norm(pair.Y, Vec(M * s.witness));
        if (v > t.opnorm) {
          t.opnorm = v;
          t.witness = s.witness;
        }
      }
      t.quotient = (t.opnorm - 1.0) / t.alpha;
    }
  }
  res.upper = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    res.upper = std::min(res.upper, res.trace[i].quotient);
    if (i) res.monotone_violation = std::max(res.monotone_violation, res.trace[i].quotient - res.trace[i - 1].quotient);
  }
  return res;
}

std::vector<double> range_points(const SubspacePair& pair, const OperatorSpec& op, int points, std::uint64_t seed) {
  validate_operator(pair, op);
  std::vector<double> out;
  for (const auto& p : sample_attaining(pair, points, seed)) out.push_back(p.ystar.dot(op.T * p.x));
  return out;
}

bool GapReport::contained(double slack) const {
  const double wp = plus.max_re_V_upper - plus.max_re_V_lower;
  const double wm = minus.max_re_V_upper - minus.max_re_V_lower;
  return plus.sup_re_W <= plus.max_re_V_upper + slack + std::max(0.0, wp) &&
         minus.sup_re_W <= minus.max_re_V_upper + slack + std::max(0.0, wm);
}

GapReport gap_report(const SubspacePair& pair, const OperatorSpec& op, const RangeOptions& opt) {
  GapReport rep;
  auto entry = [&](int dir) {
    OperatorSpec o{dir * op.T, op.label};
    RangeOptions ro = opt;
    if (opt.exact_opnorm && dir < 0) ro.exact_opnorm = nullptr;
    const SupWResult w = sup_re_W(pair, o, ro);
    const MaxVResult v = max_re_V(pair, o, ro, &w);
    GapEntry e;
    e.direction = dir;
    e.sup_re_W = w.value;
    e.max_re_V_lower = v.lower;
    e.max_re_V_upper = v.upper;
    e.gap = v.upper - w.value;
    e.sup_exact = w.exact;
    return e;
  };
  rep.plus = entry(1);
  rep.minus = entry(-1);
  rep.interval_coW = {-rep.minus.sup_re_W, rep.plus.sup_re_W};
  rep.interval_V = {-rep.minus.max_re_V_upper, rep.plus.max_re_V_upper};
  return rep;
}

}  // namespace nrange
