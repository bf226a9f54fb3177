#include "nrange/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nrange/optimize.hpp"
#include "nrange/rng.hpp"

namespace nrange {

const char* to_string(StateKind k) {
  switch (k) {
    case StateKind::Singleton:
      return "singleton";
    case StateKind::Polyhedral:
      return "polyhedral";
    case StateKind::Generic:
      return "generic";
  }
  return "?";
}

namespace {

using Gens = std::optional<std::vector<Vec>>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void dedupe(std::vector<Vec>& v) {
  std::vector<Vec> out;
  out.reserve(v.size());
  for (auto& x : v) {
    bool dup = false;
    for (const auto& y : out)
      if ((x - y).cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + y.cwiseAbs().maxCoeff())) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(x));
  }
  v = std::move(out);
}

Gens sign_vectors(int n, const Vec& base, const std::vector<int>& free_coords, int cap) {
  if (free_coords.size() > 12 || (std::size_t{1} << free_coords.size()) > static_cast<std::size_t>(cap))
    return std::nullopt;
  std::vector<Vec> out;
  const std::size_t m = std::size_t{1} << free_coords.size();
  for (std::size_t mask = 0; mask < m; ++mask) {
    Vec f = base;
    for (std::size_t j = 0; j < free_coords.size(); ++j) f[free_coords[j]] = (mask >> j) & 1 ? -1.0 : 1.0;
    out.push_back(std::move(f));
  }
  (void)n;
  return out;
}

// Nonnegative (c,d) generating the dual gauge ball's positive-quadrant part.
std::vector<Point2> gauge_dual_vertices(const AbsoluteGauge& g) {
  std::vector<Point2> out;
  for (const auto& bp : g.breakpoints()) {
    const double t = bp.t;
    for (const auto& s : g.subdifferential(1.0 - t, t)) out.push_back({std::abs(s.a), std::abs(s.b)});
  }
  return out;
}

Gens combine_products(const std::vector<Point2>& cd, const Gens& fl, const Gens& fr, int dl, int dr, int cap) {
  std::vector<Vec> out;
  for (const auto& p : cd) {
    const bool use_l = p.a != 0.0, use_r = p.b != 0.0;
    if (use_l && !fl) return std::nullopt;
    if (use_r && !fr) return std::nullopt;
    const std::vector<Vec> zl{Vec::Zero(dl)}, zr{Vec::Zero(dr)};
    const auto& L = use_l ? *fl : zl;
    const auto& R = use_r ? *fr : zr;
    if (out.size() + L.size() * R.size() > static_cast<std::size_t>(cap)) return std::nullopt;
    for (const auto& a : L)
      for (const auto& b : R) {
        Vec f(dl + dr);
        f.head(dl) = p.a * a;
        f.tail(dr) = p.b * b;
        out.push_back(std::move(f));
      }
  }
  dedupe(out);
  return out;
}

Gens minkowski(const std::vector<Gens>& parts, int n, int cap) {
  std::vector<Vec> acc{Vec::Zero(n)};
  for (const auto& p : parts) {
    if (!p) return std::nullopt;
    if (acc.size() * p->size() > static_cast<std::size_t>(cap)) return std::nullopt;
    std::vector<Vec> next;
    for (const auto& a : acc)
      for (const auto& b : *p) next.push_back(a + b);
    dedupe(next);
    acc = std::move(next);
  }
  return acc;
}

// Extreme points of the dual (semi)norm ball, i.e. the subdifferential at a
// point of the kernel.
Gens ball_vertices(const Norm& n, const StateOptions& opt) {
  const int d = n.dim();
  switch (n.kind()) {
    case Norm::Kind::Lp: {
      if (std::isinf(n.p())) {
        std::vector<Vec> out;
        for (int i = 0; i < d; ++i) {
          out.push_back(Vec::Unit(d, i));
          out.push_back(-Vec::Unit(d, i));
        }
        return out;
      }
      if (n.p() == 1.0) {
        std::vector<int> all(d);
        for (int i = 0; i < d; ++i) all[i] = i;
        return sign_vectors(d, Vec::Zero(d), all, opt.max_generators);
      }
      return std::nullopt;
    }
    case Norm::Kind::AbsoluteSum: {
      if (!n.gauge().is_polyhedral()) return std::nullopt;
      const Gens fl = ball_vertices(n.left(), opt);
      const Gens fr = ball_vertices(n.right(), opt);
      return combine_products(gauge_dual_vertices(n.gauge()), fl, fr, n.left().dim(), n.right().dim(),
                              opt.max_generators);
    }
    case Norm::Kind::Pullback: {
      Gens in = ball_vertices(n.inner(), opt);
      if (!in) return std::nullopt;
      std::vector<Vec> out;
      for (const auto& g : *in) out.push_back(n.map().transpose() * g);
      dedupe(out);
      return out;
    }
    case Norm::Kind::MaxOf: {
      std::vector<Vec> out;
      for (const auto& t : n.terms()) {
        Gens g = ball_vertices(t, opt);
        if (!g) return std::nullopt;
        out.insert(out.end(), g->begin(), g->end());
        if (out.size() > static_cast<std::size_t>(opt.max_generators)) return std::nullopt;
      }
      dedupe(out);
      return out;
    }
    case Norm::Kind::SumOf: {
      std::vector<Gens> parts;
      for (const auto& t : n.terms()) parts.push_back(ball_vertices(t, opt));
      return minkowski(parts, d, opt.max_generators);
    }
  }
  return std::nullopt;
}

Gens face_rec(const Norm& n, const Vec& v, const StateOptions& opt) {
  const double val = eval_norm(n, v);
  const double scale = 1.0 + v.cwiseAbs().maxCoeff();
  if (val <= 1e-14 * scale) return ball_vertices(n, opt);
  const int d = n.dim();
  switch (n.kind()) {
    case Norm::Kind::Lp: {
      const double p = n.p();
      if (std::isinf(p)) {
        std::vector<Vec> out;
        for (int i = 0; i < d; ++i)
          if (std::abs(v[i]) >= val - opt.active_tol * val) out.push_back((v[i] > 0 ? 1.0 : -1.0) * Vec::Unit(d, i));
        return out;
      }
      if (p == 1.0) {
        const double m = v.cwiseAbs().maxCoeff();
        Vec base = Vec::Zero(d);
        std::vector<int> zeros;
        for (int i = 0; i < d; ++i) {
          if (std::abs(v[i]) <= opt.active_tol * m)
            zeros.push_back(i);
          else
            base[i] = v[i] > 0 ? 1.0 : -1.0;
        }
        return sign_vectors(d, base, zeros, opt.max_generators);
      }
      Vec g(d);
      for (int i = 0; i < d; ++i) {
        const double r = std::abs(v[i]) / val;
        g[i] = (v[i] > 0 ? 1.0 : (v[i] < 0 ? -1.0 : 0.0)) * std::pow(r, p - 1.0);
      }
      return std::vector<Vec>{g};
    }
    case Norm::Kind::AbsoluteSum: {
      const int dl = n.left().dim(), dr = n.right().dim();
      const Vec vl = v.head(dl), vr = v.tail(dr);
      const double a = eval_norm(n.left(), vl), b = eval_norm(n.right(), vr);
      std::vector<Point2> cd;
      for (const auto& s : n.gauge().subdifferential(a, b, opt.active_tol)) cd.push_back({std::abs(s.a), std::abs(s.b)});
      bool need_l = false, need_r = false;
      for (const auto& p : cd) {
        need_l |= p.a != 0.0;
        need_r |= p.b != 0.0;
      }
      const Gens fl = need_l ? face_rec(n.left(), vl, opt) : Gens{std::vector<Vec>{}};
      const Gens fr = need_r ? face_rec(n.right(), vr, opt) : Gens{std::vector<Vec>{}};
      return combine_products(cd, fl, fr, dl, dr, opt.max_generators);
    }
    case Norm::Kind::Pullback: {
      Gens in = face_rec(n.inner(), n.map() * v, opt);
      if (!in) return std::nullopt;
      std::vector<Vec> out;
      for (const auto& g : *in) out.push_back(n.map().transpose() * g);
      dedupe(out);
      return out;
    }
    case Norm::Kind::MaxOf: {
      std::vector<double> vals;
      for (const auto& t : n.terms()) vals.push_back(eval_norm(t, v));
      const double mx = *std::max_element(vals.begin(), vals.end());
      std::vector<Vec> out;
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] < mx - opt.active_tol * std::max(1.0, mx)) continue;
        Gens g = face_rec(n.terms()[i], v, opt);
        if (!g) return std::nullopt;
        out.insert(out.end(), g->begin(), g->end());
        if (out.size() > static_cast<std::size_t>(opt.max_generators)) return std::nullopt;
      }
      dedupe(out);
      return out;
    }
    case Norm::Kind::SumOf: {
      std::vector<Gens> parts;
      for (const auto& t : n.terms()) parts.push_back(face_rec(t, v, opt));
      return minkowski(parts, d, opt.max_generators);
    }
  }
  return std::nullopt;
}

void require_unit(const Norm& space, const Vec& u) {
  const double r = eval_norm(space, u);
  if (std::abs(r - 1.0) > 1e-9)
    throw std::invalid_argument("base point must lie on the unit sphere (norm " + std::to_string(r) + ")");
}

std::vector<Vec> generic_samples(const Norm& space, const Vec& u, const StateOptions& opt, int count,
                                 std::uint64_t stream) {
  CounterRng rng(CounterRng(opt.seed).derive(stream).next_u64());
  std::vector<Vec> out;
  const int n = space.dim();
  for (int k = 0; k < count * 4 && static_cast<int>(out.size()) < count; ++k) {
    Vec w = rng.normal_vector(n);
    const double wn = w.norm();
    if (wn == 0.0) continue;
    const Vec x = u + opt.eta * w / wn;
    const Gens g = face_rec(space, x, opt);
    if (g && !g->empty()) out.push_back(g->front());
  }
  if (out.empty()) throw std::runtime_error("state sampling produced no support functional");
  return out;
}

}  // namespace

std::optional<std::vector<Vec>> face_generators(const Norm& norm, const Vec& v, const StateOptions& opt) {
  if (v.size() != norm.dim()) throw std::invalid_argument("face_generators: dimension mismatch");
  return face_rec(norm, v, opt);
}

StateSet state_set(const Norm& space, const Vec& u, const StateOptions& opt) {
  require_unit(space, u);
  StateSet s;
  s.base_point = u;
  s.options = opt;
  Gens g = face_rec(space, u, opt);
  if (g && !g->empty()) {
    s.generators = std::move(*g);
    s.kind = s.generators.size() == 1 ? StateKind::Singleton : StateKind::Polyhedral;
  } else {
    s.kind = StateKind::Generic;
    s.generators = generic_samples(space, u, opt, opt.generic_samples, 0);
  }
  return s;
}

std::vector<Vec> StateSet::extreme_points(const Norm& space, int count) const {
  if (kind != StateKind::Generic) return generators;
  return generic_samples(space, base_point, options, count, static_cast<std::uint64_t>(count));
}

bool StateSet::contains(const Norm& space, const Vec& f, double tol) const {
  if (f.dot(base_point) < 1.0 - tol) return false;
  return dual_norm_upper(space, f) <= 1.0 + tol;
}

Vec support_functional(const Norm& space, const Vec& u, const StateOptions& opt) {
  return state_set(space, u, opt).support();
}

std::vector<QuotientSample> difference_quotients(const Norm& space, const Vec& u, const Vec& y, int max_halvings,
                                                 double stop) {
  const double nu = eval_norm(space, u);
  const double ny = eval_norm(space, y);
  const double slack = (16.0 + 2.0 * space.dim()) * kEps;
  std::vector<QuotientSample> out;
  double alpha = 1.0;
  for (int k = 0; k <= max_halvings; ++k, alpha *= 0.5) {
    const double q = (eval_norm(space, Vec(u + alpha * y)) - nu) / alpha;
    const double allow = slack * (2.0 * nu + alpha * ny) / alpha;
    out.push_back({alpha, q, allow});
    if (out.size() >= 2 && std::abs(out[out.size() - 1].quotient - out[out.size() - 2].quotient) < stop) break;
  }
  return out;
}

double monotone_quotient_violation(const std::vector<QuotientSample>& s) {
  double worst = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i)
    worst = std::max(worst, s[i].quotient - s[i - 1].quotient - s[i].allowance - s[i - 1].allowance);
  return worst;
}

TauBracket tau(const Norm& space, const Vec& u, const Vec& y, const TauOptions& opt) {
  const StateSet st = state_set(space, u, opt.states);
  TauBracket b;
  b.kind = st.kind;
  const auto qs = difference_quotients(space, u, y, opt.max_halvings, opt.stop);
  b.quotients = static_cast<int>(qs.size());
  b.upper = std::numeric_limits<double>::infinity();
  for (const auto& q : qs) b.upper = std::min(b.upper, q.quotient + q.allowance);

  // Left quotients (||u|| - ||u - a y||)/a never exceed tau by convexity.
  const double nu = eval_norm(space, u), ny = eval_norm(space, y);
  const double slack = (16.0 + 2.0 * space.dim()) * kEps;
  double left = -std::numeric_limits<double>::infinity();
  double alpha = 1.0;
  for (int k = 0; k <= opt.max_halvings; ++k, alpha *= 0.5) {
    const double q = (nu - eval_norm(space, Vec(u - alpha * y))) / alpha;
    left = std::max(left, q - slack * (2.0 * nu + alpha * ny) / alpha);
  }

  double best = -std::numeric_limits<double>::infinity();
  for (const auto& g : st.generators) {
    const double v = g.dot(y);
    if (v > best) {
      best = v;
      b.witness = g;
    }
  }
  if (st.kind == StateKind::Generic) {
    b.lower = left;
  } else {
    b.lower = std::max(best, left);
  }
  // Enumerated faces carry the active-set tolerance; keep the bracket ordered.
  if (b.lower > b.upper) b.lower = b.upper;
  return b;
}

Attained attain(const Norm& space, const Vec& g, const Vec& hint) {
  const int n = space.dim();
  if (g.size() != n || hint.size() != n) throw std::invalid_argument("attain: dimension mismatch");
  auto fallback_point = [&]() -> Vec {
    if (eval_norm(space, hint) > 0.0) return project_to_sphere(space, hint);
    for (int i = 0; i < n; ++i)
      if (eval_norm(space, Vec::Unit(n, i)) > 0.0) return project_to_sphere(space, Vec::Unit(n, i));
    throw std::invalid_argument("attain: space has no unit vectors");
  };
  if (g.cwiseAbs().maxCoeff() == 0.0) return {fallback_point(), true};

  switch (space.kind()) {
    case Norm::Kind::Lp: {
      const double p = space.p();
      Vec x(n);
      if (std::isinf(p)) {
        for (int i = 0; i < n; ++i) x[i] = g[i] > 0 ? 1.0 : (g[i] < 0 ? -1.0 : std::clamp(hint[i], -1.0, 1.0));
        return {x, true};
      }
      if (p == 1.0) {
        const double m = g.cwiseAbs().maxCoeff();
        x.setZero();
        double total = 0.0;
        for (int i = 0; i < n; ++i)
          if (std::abs(g[i]) >= m * (1.0 - 1e-12)) {
            const double s = g[i] > 0 ? 1.0 : -1.0;
            x[i] = s * std::max(0.0, s * hint[i]);
            total += std::abs(x[i]);
          }
        if (total == 0.0) {
          for (int i = 0; i < n; ++i)
            if (std::abs(g[i]) >= m * (1.0 - 1e-12)) {
              x[i] = g[i] > 0 ? 1.0 : -1.0;
              break;
            }
          return {x, true};
        }
        return {x / total, true};
      }
      const double q = p / (p - 1.0);
      const double m = g.cwiseAbs().maxCoeff();
      for (int i = 0; i < n; ++i) x[i] = (g[i] > 0 ? 1.0 : (g[i] < 0 ? -1.0 : 0.0)) * std::pow(std::abs(g[i]) / m, q - 1.0);
      return {project_to_sphere(space, x), true};
    }
    case Norm::Kind::AbsoluteSum: {
      if (space.exact_dual()) {
        const int dl = space.left().dim(), dr = space.right().dim();
        const Vec gl = g.head(dl), gr = g.tail(dr), hl = hint.head(dl), hr = hint.tail(dr);
        const double cl = dual_norm_upper(space.left(), gl), cr = dual_norm_upper(space.right(), gr);
        const Point2 ab = space.gauge().attain(cl, cr, {eval_norm(space.left(), hl), eval_norm(space.right(), hr)});
        const Attained xl = attain(space.left(), gl, hl);
        const Attained xr = attain(space.right(), gr, hr);
        Vec x(n);
        x.head(dl) = ab.a * xl.x;
        x.tail(dr) = ab.b * xr.x;
        return {x, xl.exact && xr.exact};
      }
      break;
    }
    case Norm::Kind::Pullback: {
      if (space.invertible_pullback()) {
        const Attained z = attain(space.inner(), space.solve_map_transpose(g), space.map() * hint);
        return {space.solve_map(z.x), z.exact};
      }
      break;
    }
    default:
      break;
  }
  SearchConfig cfg;
  cfg.budget = 3000;
  cfg.seed = 0xa77a;
  if (eval_norm(space, hint) > 0.0) cfg.extra_starts.push_back(hint);
  const auto res = sphere_maximize([&](const Vec& x) { return g.dot(x); }, space, cfg);
  return {res.best_point, false};
}

}  // namespace nrange
