#include "nrange/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "nrange/optimize.hpp"
#include "nrange/rng.hpp"

namespace nrange {

const char* to_string(Certification c) {
  return c == Certification::WitnessedUpper ? "witnessed-upper" : "heuristic";
}

bool ModulusCurve::well_formed(double slack) const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].delta < -slack || samples[i].delta > 2.0 + slack) return false;
    for (std::size_t j = 0; j < samples.size(); ++j)
      if (samples[j].eps > samples[i].eps && samples[j].delta < samples[i].delta - slack) return false;
  }
  return true;
}

std::vector<double> default_eps_grid() { return {0.05, 0.1, 0.2, 0.3, 0.5, 1.0}; }

namespace {

// Smallest s on a doubling grid with dist(s) >= eps, refined by bisection
// (the returned end is always feasible).
std::optional<double> first_crossing(const std::function<double(double)>& dist, double eps, int bisections = 40) {
  double lo = 0.0, hi = -1.0;
  for (int k = -8; k <= 20; ++k) {
    const double s = std::ldexp(1.0, k);
    if (dist(s) >= eps) {
      hi = s;
      break;
    }
    lo = s;
  }
  if (hi < 0.0) return std::nullopt;
  for (int it = 0; it < bisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dist(mid) >= eps)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

Vec normalize_dual(const Norm& Y, const Vec& f) {
  const double n = dual_norm_upper(Y, f);
  if (!(n > 0.0) || !std::isfinite(n)) return Vec();
  return f / n;
}

void check_eps(double eps, double hi) {
  if (!(eps > 0.0 && eps <= hi)) throw std::invalid_argument("eps out of range");
}

}  // namespace

BpbModulusResult bpb_modulus(const SubspacePair& pair, double eps, const ModulusOptions& opt,
                             const std::vector<AttainingPair>& extra) {
  check_eps(eps, 2.0 - 1e-15);
  BpbModulusResult best;
  double best_score = -std::numeric_limits<double>::infinity();
  RepairOptions ro;
  ro.budget = opt.repair_budget;
  ro.seed = opt.seed;
  ro.stop_below = eps * (1.0 - 1e-9);

  auto try_input = [&](const Vec& x0, const Vec& y0) {
    RepairResult r;
    try {
      r = repair_distance(pair, x0, y0, ro);
    } catch (const std::invalid_argument&) {
      return false;
    }
    if (r.distance < eps) return false;
    const double score = y0.dot(pair.J * x0);
    if (score > best_score) {
      best_score = score;
      best.x0 = x0;
      best.y0 = y0;
      best.repair_distance = r.distance;
    }
    return true;
  };
  for (const auto& e : extra) try_input(e.x, e.ystar);

  const int k = pair.k(), n = pair.n();
  std::vector<Vec> xs;
  for (int i = 0; i < k; ++i) {
    xs.push_back(Vec::Unit(k, i));
    xs.push_back(-Vec::Unit(k, i));
  }
  xs.push_back(Vec::Ones(k));
  CounterRng rng(opt.seed);
  for (int c = 0; c < opt.budget; ++c) {
    Vec x0 = c < static_cast<int>(xs.size()) && c % 2 == 0 ? xs[c] : rng.normal_vector(k);
    if (eval_norm(pair.X, x0) == 0.0) continue;
    x0 = project_to_sphere(pair.X, x0);
    const Vec f = support_functional(pair.Y, project_to_sphere(pair.Y, Vec(pair.J * x0)));
    const Vec h = rng.normal_vector(n);
    auto y_of = [&](double s) { return normalize_dual(pair.Y, Vec(f + s * h)); };
    auto dist = [&](double s) {
      const Vec y0 = y_of(s);
      if (y0.size() == 0) return 0.0;
      try {
        return repair_distance(pair, x0, y0, ro).distance;
      } catch (const std::invalid_argument&) {
        return 0.0;
      }
    };
    const auto s = first_crossing(dist, eps, 20);
    if (s) try_input(x0, y_of(*s));
  }
  if (best_score > -std::numeric_limits<double>::infinity())
    best.delta_upper = std::clamp(1.0 - best_score, 0.0, 2.0);
  return best;
}

SsdResult ssd_modulus(const Norm& Y, const Vec& u, double eps, const ModulusOptions& opt) {
  check_eps(eps, 2.0 - 1e-15);
  const StateSet st = state_set(Y, u);
  const Vec f0 = st.support();
  const int n = Y.dim();
  SsdResult best;
  double best_score = -std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec& y) {
    const NearestState ns = nearest_in_hull(Y, st.generators, y);
    if (ns.distance < eps) return;
    const double score = y.dot(u);
    if (score > best_score) {
      best_score = score;
      best.witness = y;
      best.distance = ns.distance;
    }
  };
  consider(-f0);
  std::vector<Vec> dirs;
  for (int i = 0; i < n; ++i) {
    dirs.push_back(Vec::Unit(n, i));
    dirs.push_back(-Vec::Unit(n, i));
  }
  CounterRng rng(opt.seed);
  for (int c = 0; c < opt.budget; ++c) dirs.push_back(rng.normal_vector(n));
  for (const auto& h : dirs) {
    auto y_of = [&](double s) { return normalize_dual(Y, Vec(f0 + s * h)); };
    auto dist = [&](double s) {
      const Vec y = y_of(s);
      return y.size() ? nearest_in_hull(Y, st.generators, y).distance : 0.0;
    };
    const auto s = first_crossing(dist, eps);
    if (s) {
      const Vec y = y_of(*s);
      if (y.size()) consider(y);
    }
  }
  best.zeta_upper = std::clamp(1.0 - best_score, 0.0, 2.0);
  best.cert = st.kind == StateKind::Generic ? Certification::Heuristic : Certification::WitnessedUpper;
  return best;
}

ConvexityResult modulus_of_convexity(const Norm& N, double eps, const ModulusOptions& opt) {
  check_eps(eps, 2.0);
  const int n = N.dim();
  ConvexityResult best;
  // g = -f always qualifies.
  {
    Vec e = Vec::Zero(n);
    for (int i = 0; i < n && eval_norm(N, e) == 0.0; ++i) e = Vec::Unit(n, i);
    best.f = project_to_sphere(N, e);
    best.g = -best.f;
    best.delta = 1.0;
  }
  // f from the first factor, the perturbation direction from the second.
  const Norm P = Norm::absolute_sum(AbsoluteGauge::linf(), N, Norm::lp(2.0, n));
  auto evaluate = [&](const Vec& z, Vec* fo, Vec* go) -> double {
    const Vec fr = z.head(n), w = z.tail(n);
    const double nf = eval_norm(N, fr);
    if (nf < 1e-9 || w.norm() < 1e-9) return -2.0;
    const Vec f = fr / nf;
    auto g_of = [&](double t) -> Vec {
      const Vec v = f + t * w;
      const double nv = eval_norm(N, v);
      return nv > 1e-12 ? Vec(v / nv) : Vec();
    };
    const auto t = first_crossing(
        [&](double s) {
          const Vec g = g_of(s);
          return g.size() ? eval_norm(N, Vec(g - f)) : 0.0;
        },
        eps);
    if (!t) return -2.0;
    const Vec g = g_of(*t);
    if (g.size() == 0) return -2.0;
    if (fo) *fo = f;
    if (go) *go = g;
    return eval_norm(N, Vec(0.5 * (f + g))) - 1.0;
  };
  SearchConfig cfg;
  cfg.budget = std::max(400, 60 * opt.budget);
  cfg.seed = opt.seed;
  cfg.include_basis_starts = false;
  cfg.starts = 4;
  std::vector<Vec> fparts, wparts;
  for (int i = 0; i < n; ++i) {
    fparts.push_back(Vec::Unit(n, i));
    fparts.push_back(-Vec::Unit(n, i));
    wparts.push_back(Vec::Unit(n, i));
    wparts.push_back(-Vec::Unit(n, i));
  }
  fparts.push_back(Vec::Ones(n));
  fparts.push_back(-Vec::Ones(n));
  for (const auto& fp : fparts)
    for (const auto& wp : wparts) {
      if (cfg.extra_starts.size() >= 256) break;
      Vec z(2 * n);
      z.head(n) = fp / eval_norm(N, fp);
      z.tail(n) = wp;
      cfg.extra_starts.push_back(z);
    }
  cfg.budget = std::max(cfg.budget, static_cast<int>(cfg.extra_starts.size()) + 8);
  const SearchResult r = sphere_maximize([&](const Vec& z) { return evaluate(z, nullptr, nullptr); }, P, cfg);
  Vec f, g;
  const double v = evaluate(r.best_point, &f, &g);
  if (v > -2.0 && -v < best.delta) {
    best.delta = std::max(0.0, -v);
    best.f = f;
    best.g = g;
  }
  return best;
}

std::vector<SmoothnessPoint> uniform_smoothness_profile(const Norm& N, const std::vector<double>& t_grid,
                                                        const ModulusOptions& opt) {
  const int n = N.dim();
  for (double t : t_grid)
    if (!(t > 0.0)) throw std::invalid_argument("t grid must be positive");
  struct Sample {
    Vec u, y;
    double tau_lower;
  };
  auto make = [&](const Vec& u0, const Vec& y0) -> std::optional<Sample> {
    if (eval_norm(N, u0) == 0.0 || eval_norm(N, y0) == 0.0) return std::nullopt;
    Vec u = project_to_sphere(N, u0), y = project_to_sphere(N, y0);
    return Sample{u, y, tau(N, u, y).lower};
  };
  std::vector<Sample> fixed;
  CounterRng rng(opt.seed);
  for (int c = 0; c < 10 * opt.budget; ++c)
    if (auto s = make(rng.normal_vector(n), rng.normal_vector(n))) fixed.push_back(*s);
  std::vector<Vec> ys;
  if (n <= 16)
    for (int i = 0; i < n; ++i) {
      ys.push_back(Vec::Unit(n, i));
      ys.push_back(-Vec::Unit(n, i));
      for (int j = 0; j < n; ++j)
        if (j != i) ys.push_back(Vec::Unit(n, j) - Vec::Unit(n, i));
    }

  std::vector<SmoothnessPoint> out;
  for (double t : t_grid) {
    SmoothnessPoint pt;
    pt.t = t;
    pt.worst_defect = -std::numeric_limits<double>::infinity();
    auto score = [&](const Sample& s) {
      const double q = (eval_norm(N, Vec(s.u + t * s.y)) - 1.0) / t;
      const double d = q - s.tau_lower;
      if (d > pt.worst_defect) {
        pt.worst_defect = d;
        pt.u = s.u;
        pt.y = s.y;
      }
    };
    for (const auto& s : fixed) score(s);
    // Points just off a face switch: u = ones - t e_j.
    if (n <= 16)
      for (int j = 0; j < n; ++j) {
        const Vec u0 = Vec::Ones(n) - t * Vec::Unit(n, j);
        for (const auto& y : ys)
          if (auto s = make(u0, y)) score(*s);
      }
    out.push_back(pt);
  }
  return out;
}

}  // namespace nrange
