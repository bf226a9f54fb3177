#include "nrange/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nrange {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

std::string fmt17(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << x;
  return os.str();
}

double parse_real(const std::string& s) {
  if (s == "inf") return kInf;
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  double v = 0.0;
  is >> v;
  if (is.fail() || !is.eof()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

}  // namespace

AbsoluteGauge AbsoluteGauge::lp(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("gauge exponent must satisfy p >= 1");
  AbsoluteGauge g;
  g.named_lp_ = true;
  g.p_ = p;
  if (p == 1.0) {
    g.pts_ = {{0.0, 1.0}, {1.0, 1.0}};
  } else if (std::isinf(p)) {
    g.pts_ = {{0.0, 1.0}, {0.5, 0.5}, {1.0, 1.0}};
  } else {
    g.smooth_lp_ = true;
  }
  return g;
}

AbsoluteGauge AbsoluteGauge::linf() { return lp(kInf); }

AbsoluteGauge AbsoluteGauge::piecewise_linear(std::vector<Breakpoint> bps) {
  constexpr double tol = 1e-12;
  if (bps.size() < 2) throw std::invalid_argument("profile needs at least two breakpoints");
  if (std::abs(bps.front().t) > tol || std::abs(bps.back().t - 1.0) > tol)
    throw std::invalid_argument("profile must span t in [0,1]");
  bps.front().t = 0.0;
  bps.back().t = 1.0;
  for (std::size_t k = 1; k < bps.size(); ++k)
    if (!(bps[k].t > bps[k - 1].t)) throw std::invalid_argument("profile breakpoints must increase");
  if (std::abs(bps.front().psi - 1.0) > tol || std::abs(bps.back().psi - 1.0) > tol)
    throw std::invalid_argument("profile must equal 1 at t = 0 and t = 1");
  for (const auto& bp : bps) {
    if (bp.psi > 1.0 + tol || bp.psi < std::max(bp.t, 1.0 - bp.t) - tol)
      throw std::invalid_argument("profile must satisfy max(t,1-t) <= psi(t) <= 1");
  }
  for (std::size_t k = 1; k + 1 < bps.size(); ++k) {
    const double s0 = (bps[k].psi - bps[k - 1].psi) / (bps[k].t - bps[k - 1].t);
    const double s1 = (bps[k + 1].psi - bps[k].psi) / (bps[k + 1].t - bps[k].t);
    if (s1 < s0 - 1e-9) throw std::invalid_argument("profile must be convex");
  }
  AbsoluteGauge g;
  g.pts_ = std::move(bps);
  return g;
}

AbsoluteGauge AbsoluteGauge::parse(const std::string& text) {
  if (text == "l1") return l1();
  if (text == "l2") return l2();
  if (text == "linf") return linf();
  if (text.rfind("lp:", 0) == 0) return lp(parse_real(text.substr(3)));
  if (text.rfind("pwl(", 0) == 0 && text.back() == ')') {
    std::vector<Breakpoint> bps;
    std::string body = text.substr(4, text.size() - 5);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("breakpoint must be t:psi");
      auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t"));
        s.erase(s.find_last_not_of(" \t") + 1);
        return s;
      };
      bps.push_back({parse_real(trim(item.substr(0, colon))), parse_real(trim(item.substr(colon + 1)))});
    }
    return piecewise_linear(std::move(bps));
  }
  throw std::invalid_argument("unknown gauge '" + text + "'");
}

std::string AbsoluteGauge::to_string() const {
  if (named_lp_) {
    if (p_ == 1.0) return "l1";
    if (p_ == 2.0) return "l2";
    if (std::isinf(p_)) return "linf";
    return "lp:" + fmt17(p_);
  }
  std::string out = "pwl(";
  for (std::size_t k = 0; k < pts_.size(); ++k) {
    if (k) out += ",";
    out += fmt17(pts_[k].t) + ":" + fmt17(pts_[k].psi);
  }
  return out + ")";
}

double AbsoluteGauge::psi(double t) const {
  if (smooth_lp_) return std::pow(std::pow(1.0 - t, p_) + std::pow(t, p_), 1.0 / p_);
  for (std::size_t k = 1; k < pts_.size(); ++k) {
    if (t <= pts_[k].t) {
      const double w = (t - pts_[k - 1].t) / (pts_[k].t - pts_[k - 1].t);
      return pts_[k - 1].psi + w * (pts_[k].psi - pts_[k - 1].psi);
    }
  }
  return pts_.back().psi;
}

double AbsoluteGauge::value(double a, double b) const {
  a = std::abs(a);
  b = std::abs(b);
  if (smooth_lp_) {
    const double m = std::max(a, b);
    if (m == 0.0) return 0.0;
    return m * std::pow(std::pow(a / m, p_) + std::pow(b / m, p_), 1.0 / p_);
  }
  if (named_lp_) return p_ == 1.0 ? a + b : std::max(a, b);
  const double s = a + b;
  if (s == 0.0) return 0.0;
  return s * psi(b / s);
}

std::vector<Point2> AbsoluteGauge::vertices() const {
  std::vector<Point2> v;
  v.reserve(pts_.size());
  for (const auto& bp : pts_) v.push_back({(1.0 - bp.t) / bp.psi, bp.t / bp.psi});
  return v;
}

std::vector<Point2> AbsoluteGauge::edge_normals() const {
  const auto v = vertices();
  std::vector<Point2> n;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const double det = v[k].a * v[k + 1].b - v[k + 1].a * v[k].b;
    n.push_back({(v[k + 1].b - v[k].b) / det, (v[k].a - v[k + 1].a) / det});
  }
  return n;
}

double AbsoluteGauge::dual_value(double c, double d) const {
  c = std::abs(c);
  d = std::abs(d);
  if (smooth_lp_) {
    const double q = p_ / (p_ - 1.0);
    const double m = std::max(c, d);
    if (m == 0.0) return 0.0;
    return m * std::pow(std::pow(c / m, q) + std::pow(d / m, q), 1.0 / q);
  }
  if (named_lp_) return p_ == 1.0 ? std::max(c, d) : c + d;
  double best = 0.0;
  for (const auto& v : vertices()) best = std::max(best, c * v.a + d * v.b);
  return best;
}

AbsoluteGauge AbsoluteGauge::dual() const {
  if (named_lp_) {
    if (p_ == 1.0) return linf();
    if (std::isinf(p_)) return l1();
    return lp(p_ / (p_ - 1.0));
  }
  std::vector<Point2> w{{1.0, 0.0}};
  for (const auto& n : edge_normals()) w.push_back(n);
  w.push_back({0.0, 1.0});
  std::vector<Breakpoint> bps;
  for (const auto& p : w) {
    const double s = p.a + p.b;
    const double t = p.b / s;
    if (!bps.empty() && std::abs(t - bps.back().t) <= 1e-14) continue;
    bps.push_back({t, 1.0 / s});
  }
  bps.front() = {0.0, 1.0};
  bps.back() = {1.0, 1.0};
  AbsoluteGauge g;
  g.pts_ = std::move(bps);
  return g;
}

std::vector<Point2> AbsoluteGauge::subdifferential(double a, double b, double tol) const {
  const double A = std::abs(a);
  const double B = std::abs(b);
  if (A == 0.0 && B == 0.0) throw std::invalid_argument("gauge subdifferential at the origin");
  if (smooth_lp_) {
    const double g = value(A, B);
    return {{sgn(a) * std::pow(A / g, p_ - 1.0), sgn(b) * std::pow(B / g, p_ - 1.0)}};
  }
  const double t = B / (A + B);
  const auto n = edge_normals();
  const std::size_t K = pts_.size();
  std::vector<Point2> out;
  std::size_t vertex = K;
  for (std::size_t k = 0; k < K; ++k)
    if (std::abs(t - pts_[k].t) <= tol) {
      vertex = k;
      break;
    }
  if (vertex == 0) {
    out = {{n.front().a, -n.front().b}, n.front()};
  } else if (vertex == K - 1) {
    out = {{-n.back().a, n.back().b}, n.back()};
  } else if (vertex < K) {
    out = {n[vertex - 1], n[vertex]};
  } else {
    for (std::size_t k = 0; k + 1 < K; ++k)
      if (t < pts_[k + 1].t) {
        out = {n[k]};
        break;
      }
  }
  for (auto& p : out) {
    p.a *= sgn(a);
    p.b *= sgn(b);
  }
  if (out.size() == 2 && std::abs(out[0].a - out[1].a) < 1e-15 && std::abs(out[0].b - out[1].b) < 1e-15)
    out.pop_back();
  return out;
}

Point2 AbsoluteGauge::attain(double c, double d, Point2 hint) const {
  c = std::abs(c);
  d = std::abs(d);
  hint = {std::abs(hint.a), std::abs(hint.b)};
  const double hn = value(hint);
  const Point2 h = hn > 0.0 ? Point2{hint.a / hn, hint.b / hn} : Point2{1.0, 0.0};
  if (c == 0.0 && d == 0.0) return h;
  if (smooth_lp_) {
    const double e = 1.0 / (p_ - 1.0);
    const double m = std::max(c, d);
    Point2 r{std::pow(c / m, e), std::pow(d / m, e)};
    const double g = value(r);
    return {r.a / g, r.b / g};
  }
  const auto v = vertices();
  double best = -kInf;
  for (const auto& p : v) best = std::max(best, c * p.a + d * p.b);
  const double slack = 1e-12 * std::max(1.0, best);
  std::size_t k1 = v.size(), k2 = 0;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (c * v[k].a + d * v[k].b >= best - slack) {
      k1 = std::min(k1, k);
      k2 = std::max(k2, k);
    }
  if (k1 == k2) return v[k1];
  const Point2 p = v[k1], q = v[k2];
  const double ex = q.a - p.a, ey = q.b - p.b;
  double lam = ((h.a - p.a) * ex + (h.b - p.b) * ey) / (ex * ex + ey * ey);
  lam = std::clamp(lam, 0.0, 1.0);
  return {p.a + lam * ex, p.b + lam * ey};
}

double compute_b0(const AbsoluteGauge& g) {
  // (1 + b^p)^(1/p) > 1 for every b > 0 when 1 < p < inf.
  if (!g.is_polyhedral()) return 0.0;
  constexpr double thr = 1.0 + 4.0 * std::numeric_limits<double>::epsilon();
  if (g.value(1.0, 1.0) <= thr) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (g.value(1.0, mid) <= thr ? lo : hi) = mid;
  }
  return lo;
}

GaugeRegionReport region_A_diameter(const AbsoluteGauge& g, double delta) {
  if (!(delta > 0.0 && delta < 2.0)) throw std::invalid_argument("delta must lie in (0, 2)");
  GaugeRegionReport rep;
  rep.b0 = compute_b0(g);
  rep.delta = delta;
  const double left = 1.0 - delta;

  // Upper end of the chord a = 1 - delta inside the ball.
  double lo = 0.0, hi = 1.0;
  if (g.value(left, 1.0) <= 1.0) {
    lo = 1.0;
  } else {
    while (hi - lo > 1e-14) {
      const double mid = 0.5 * (lo + hi);
      (g.value(left, mid) <= 1.0 ? lo : hi) = mid;
    }
  }
  const double btop = lo;

  std::vector<Point2> pts{{left, rep.b0}, {left, btop}, {1.0, rep.b0}};
  const double th0 = std::atan2(rep.b0, 1.0);
  const double th1 = std::atan2(btop, left);
  const int n = std::max(64, static_cast<int>(std::ceil((th1 - th0) / 1e-3)));
  for (int i = 0; i <= n; ++i) {
    const double th = th0 + (th1 - th0) * i / n;
    const double ca = std::cos(th), sb = std::sin(th);
    const double r = g.value(ca, sb);
    const Point2 p{ca / r, sb / r};
    if (p.a >= left - 1e-15 && p.b >= rep.b0 - 1e-15) pts.push_back(p);
  }
  if (pts.empty()) throw std::logic_error("A(delta) is empty");
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = g.value(pts[i].a - pts[j].a, pts[i].b - pts[j].b);
      if (d > rep.diameter) {
        rep.diameter = d;
        rep.witnesses = {pts[i], pts[j]};
      }
    }
  if (rep.diameter == 0.0) rep.witnesses = {pts[0], pts[0]};
  return rep;
}

double delta_for_diameter(const AbsoluteGauge& g, double eps) {
  for (int k = 1; k <= 20; ++k) {
    const double delta = std::ldexp(1.0, -k);
    if (region_A_diameter(g, delta).diameter < eps) return delta;
  }
  throw std::runtime_error("no delta on the grid 2^-1..2^-20 brings diam A(delta) below " + fmt17(eps));
}

}  // namespace nrange
