#include "nrange/pairs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nrange/optimize.hpp"
#include "nrange/rng.hpp"

namespace nrange {

namespace {

// Golden-section minimum of a convex function on [0,1].
double golden_min(const std::function<double(double)>& phi, double& t_best) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = 1.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = phi(c), fd = phi(d);
  for (int it = 0; it < 30; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = phi(d);
    }
  }
  if (fc <= fd) {
    t_best = c;
    return fc;
  }
  t_best = d;
  return fd;
}

void require_unit_x(const SubspacePair& pair, const Vec& x0) {
  if (x0.size() != pair.k()) throw std::invalid_argument("x0 has the wrong dimension");
  if (std::abs(eval_norm(pair.X, x0) - 1.0) > 1e-8) throw std::invalid_argument("x0 must lie on the unit sphere of X");
}

void require_unit_dual(const Norm& Y, const Vec& y0) {
  if (y0.size() != Y.dim()) throw std::invalid_argument("functional has the wrong dimension");
  const DualNormValue v = eval_dual_norm(Y, y0);
  if (v.lower > 1.0 + 1e-8 || v.upper < 1.0 - 1e-8)
    throw std::invalid_argument("functional must lie on the unit sphere of the dual");
}

}  // namespace

SubspacePair SubspacePair::make(Norm Y, Mat J) {
  if (J.rows() != Y.dim())
    throw std::invalid_argument("embedding has " + std::to_string(J.rows()) + " rows, space dimension is " +
                                std::to_string(Y.dim()));
  if (J.cols() < 1) throw std::invalid_argument("embedding needs at least one column");
  if (!Y.is_definite()) throw std::invalid_argument("ambient space must carry a norm, not a seminorm");
  Eigen::FullPivLU<Mat> lu(J);
  if (lu.rank() != J.cols()) throw std::invalid_argument("embedding must have full column rank");
  Norm X = Norm::pullback(J, Y).declare_full(true);
  return SubspacePair{std::move(Y), std::move(J), std::move(X)};
}

SubspacePair SubspacePair::identity(const Norm& Y) { return make(Y, Mat::Identity(Y.dim(), Y.dim())); }

void validate_operator(const SubspacePair& pair, const OperatorSpec& op) {
  if (op.T.rows() != pair.n() || op.T.cols() != pair.k())
    throw std::invalid_argument("operator '" + op.label + "' is " + std::to_string(op.T.rows()) + "x" +
                                std::to_string(op.T.cols()) + ", pair needs " + std::to_string(pair.n()) + "x" +
                                std::to_string(pair.k()));
}

AttainingCheck check_attaining(const SubspacePair& pair, const AttainingPair& p) {
  AttainingCheck c;
  c.x_norm_error = std::abs(eval_norm(pair.X, p.x) - 1.0);
  const DualNormValue d = eval_dual_norm(pair.Y, p.ystar);
  c.ystar_norm_error = std::max(std::abs(d.upper - 1.0), std::abs(d.lower - 1.0));
  c.pairing_error = std::abs(p.ystar.dot(pair.J * p.x) - 1.0);
  return c;
}

std::vector<AttainingPair> sample_attaining(const SubspacePair& pair, int points, std::uint64_t seed, int per_point) {
  CounterRng rng(seed);
  std::vector<AttainingPair> out;
  for (int s = 0; s < points; ++s) {
    Vec v = rng.normal_vector(pair.k());
    if (eval_norm(pair.X, v) == 0.0) continue;
    const Vec x = project_to_sphere(pair.X, v);
    const Vec u = pair.J * x;
    StateOptions so;
    so.seed = rng.next_u64();
    const StateSet st = state_set(pair.Y, project_to_sphere(pair.Y, u), so);
    const auto fs = st.extreme_points(pair.Y, per_point);
    int taken = 0;
    for (const auto& f : fs) {
      if (taken >= per_point) break;
      if (st.kind == StateKind::Generic && !st.contains(pair.Y, f, 1e-8)) continue;
      out.push_back({x, f});
      ++taken;
    }
  }
  return out;
}

double dual_distance(const Norm& Y, const Vec& f, const Vec& g) { return dual_norm_upper(Y, Vec(f - g)); }

NearestState nearest_in_hull(const Norm& Y, std::vector<Vec> gens, const Vec& y0) {
  std::vector<double> dist;
  for (const auto& g : gens) dist.push_back(dual_distance(Y, g, y0));
  // Keep the closest generators; the rest rarely matter and cost line searches.
  constexpr std::size_t kKeep = 48;
  if (gens.size() > kKeep) {
    std::vector<std::size_t> idx(gens.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    std::vector<Vec> g2;
    std::vector<double> d2;
    for (std::size_t i = 0; i < kKeep; ++i) {
      g2.push_back(gens[idx[i]]);
      d2.push_back(dist[idx[i]]);
    }
    gens = std::move(g2);
    dist = std::move(d2);
  }
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < gens.size(); ++i)
    if (dist[i] < dist[i0]) i0 = i;
  NearestState best{gens[i0], dist[i0]};
  if (gens.size() == 1 || best.distance == 0.0) return best;
  for (int sweep = 0; sweep < 4; ++sweep) {
    bool improved = false;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const Vec dir = gens[j] - best.state;
      if (dir.cwiseAbs().maxCoeff() == 0.0) continue;
      double t = 0.0;
      const double v = golden_min(
          [&](double s) { return dual_distance(Y, Vec(best.state + s * dir), y0); }, t);
      if (v < best.distance - 1e-15) {
        best.state = best.state + t * dir;
        best.distance = v;
        improved = true;
      }
    }
    if (!improved) break;
  }
  return best;
}


NearestState nearest_state(const Norm& Y, const Vec& u, const Vec& y0, const StateOptions& opt) {
  const StateSet st = state_set(Y, u, opt);
  return nearest_in_hull(Y, st.generators, y0);
}

RepairResult repair_distance(const SubspacePair& pair, const Vec& x0, const Vec& y0, const RepairOptions& opt) {
  require_unit_x(pair, x0);
  require_unit_dual(pair.Y, y0);
  const Norm& Y = pair.Y;
  const Vec u0 = pair.J * x0;

  RepairResult best;
  best.distance = std::numeric_limits<double>::infinity();
  int evals = 0;
  auto consider = [&](const Vec& x, const Vec* candidate_state) -> double {
    ++evals;
    const Vec u = project_to_sphere(Y, Vec(pair.J * x));
    NearestState ns = nearest_state(Y, u, y0);
    if (candidate_state) {
      const double dc = dual_distance(Y, *candidate_state, y0);
      if (dc < ns.distance) ns = {*candidate_state, dc};
    }
    const double dx = eval_norm(pair.X, Vec(x - x0));
    const double d = std::max(dx, ns.distance);
    if (d < best.distance) {
      best.distance = d;
      best.x_distance = dx;
      best.y_distance = ns.distance;
      best.witness = {x, ns.state};
    }
    return d;
  };
  auto done = [&] { return best.distance <= opt.stop_below; };

  consider(x0, nullptr);

  // Straight path from x0 to a maximizer of y0 o J.
  if (!done()) {
    const Attained xa = attain(pair.X, Vec(pair.J.transpose() * y0), x0);
    for (int i = 1; i <= 32 && !done(); ++i) {
      const double s = i / 32.0;
      const Vec v = (1.0 - s) * x0 + s * xa.x;
      if (eval_norm(pair.X, v) > 1e-12) consider(project_to_sphere(pair.X, v), nullptr);
    }
  }

  const bool square = pair.J.rows() == pair.J.cols() && Y.exact_dual();
  if (square && !done()) {
    Eigen::FullPivLU<Mat> lu(pair.J);
    // Snap to approximate faces: states of the eta-face nearest y0, then a
    // point of the sphere the snapped functional attains at, near u0.
    const double deficiency = std::max(0.0, 1.0 - y0.dot(u0));
    std::vector<double> etas;
    for (int e = 1; e <= 12; ++e) etas.push_back(std::ldexp(1.0, -e));
    if (deficiency > 0.0) etas.push_back(std::min(0.99, std::sqrt(2.0 * deficiency)));
    for (double eta : etas) {
      if (done()) break;
      StateOptions so;
      so.active_tol = eta;
      const auto gens = face_generators(Y, u0, so);
      if (!gens || gens->empty()) continue;
      NearestState ns = nearest_in_hull(Y, *gens, y0);
      const double nrm = dual_norm_upper(Y, ns.state);
      if (!(nrm > 0.0)) continue;
      const Vec ys = ns.state / nrm;
      const Attained xa = attain(Y, ys, u0);
      if (!xa.exact) continue;
      consider(project_to_sphere(pair.X, Vec(lu.solve(xa.x))), &ys);
    }
    // Functional path from y0 to the support functional at u0.
    const Vec f0 = support_functional(Y, project_to_sphere(Y, u0));
    for (int i = 0; i <= 32 && !done(); ++i) {
      const double s = i / 32.0;
      Vec ys = y0 + s * (f0 - y0);
      const double nrm = dual_norm_upper(Y, ys);
      if (!(nrm > 0.0)) continue;
      ys /= nrm;
      const Attained xa = attain(Y, ys, u0);
      if (!xa.exact) continue;
      consider(project_to_sphere(pair.X, Vec(lu.solve(xa.x))), &ys);
    }
  }

  const int remaining = opt.budget - evals;
  if (remaining > 2 && !done()) {
    SearchConfig cfg;
    cfg.budget = remaining;
    cfg.seed = opt.seed;
    cfg.starts = 2;
    cfg.refine_starts = 2;
    cfg.include_basis_starts = false;
    cfg.extra_starts = {best.witness.x, x0};
    cfg.step.initial = std::max(1e-3, std::min(0.5, 2.0 * best.distance));
    sphere_maximize([&](const Vec& x) { return -consider(x, nullptr); }, pair.X, cfg);
  }
  best.evaluations = evals;
  return best;
}

AttainingPair bpb_repair_classical(const Norm& Y, const Vec& y0, const Vec& y0star, double eps, std::uint64_t seed,
                                   int budget) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double deficiency = 1.0 - y0star.dot(y0);
  if (!(deficiency < eps * eps / 4.0))
    throw std::invalid_argument("hypothesis violated: deficiency " + std::to_string(deficiency) +
                                " is not below eps^2/4 = " + std::to_string(eps * eps / 4.0));
  const SubspacePair pair = SubspacePair::identity(Y);
  RepairOptions ro;
  ro.budget = budget;
  ro.seed = seed;
  ro.stop_below = 0.5 * eps;
  const RepairResult r = repair_distance(pair, y0, y0star, ro);
  if (!(r.distance < eps))
    throw RepairFailure("repair search exhausted its budget at distance " + std::to_string(r.distance) +
                            " (needed < " + std::to_string(eps) + ")",
                        r);
  return r.witness;
}

StateRestrictionReport check_state_restriction(const SubspacePair& pair, const Vec& u, int trials,
                                               std::uint64_t seed) {
  require_unit_x(pair, u);
  StateOptions so;
  so.seed = seed;
  const StateSet st = state_set(pair.Y, project_to_sphere(pair.Y, Vec(pair.J * u)), so);
  StateRestrictionReport rep;
  for (const auto& f : st.extreme_points(pair.Y, trials)) {
    if (rep.checked >= trials) break;
    const Vec g = pair.J.transpose() * f;
    rep.worst_pairing_violation = std::max(rep.worst_pairing_violation, std::abs(g.dot(u) - 1.0));
    SearchConfig cfg;
    cfg.budget = 300;
    cfg.seed = seed + static_cast<std::uint64_t>(rep.checked);
    cfg.extra_starts = {u};
    const double lower = sphere_maximize([&](const Vec& x) { return g.dot(x); }, pair.X, cfg).best_value;
    rep.worst_norm_excess = std::max(rep.worst_norm_excess, lower - 1.0);
    ++rep.checked;
  }
  rep.pass = rep.checked > 0 && rep.worst_pairing_violation <= 1e-8 && rep.worst_norm_excess <= 1e-8;
  return rep;
}

}  // namespace nrange
