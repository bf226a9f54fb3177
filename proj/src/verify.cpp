#include "nrange/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "nrange/absolute_repair.hpp"
#include "nrange/duality.hpp"
#include "nrange/families.hpp"
#include "nrange/gauge.hpp"
#include "nrange/moduli.hpp"
#include "nrange/oracles.hpp"
#include "nrange/ranges.hpp"
#include "nrange/report.hpp"
#include "nrange/rng.hpp"

namespace nrange {
namespace {

namespace fs = std::filesystem;
using oracle::lp;

std::string sci(double x) {
  std::ostringstream o;
  o.imbue(std::locale::classic());
  o.precision(3);
  o << std::scientific << x;
  return o.str();
}

std::string yn(bool b) { return b ? "true" : "false"; }

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::pair<std::string, CsvTable>> tables;
};

// Instances shared between C1 and C2.
struct RangeInstance {
  std::string label;
  double sup_w = 0.0;
  double upper = 0.0;
  double width = 0.0;
};

// ---- 1: finite-dimensional equality ----------------------------------------

struct RandomPair {
  int n, k;
  double p;
  Mat J, T;
};

RandomPair random_pair(std::uint64_t seed, int i) {
  CounterRng r = CounterRng(seed).derive(100 + i);
  RandomPair rp;
  rp.n = 2 + static_cast<int>(r.uniform() * 4);
  rp.k = std::min(rp.n, 1 + static_cast<int>(r.uniform() * 4));
  const double ps[3] = {1.5, 2.0, 3.0};
  rp.p = ps[i % 3];
  rp.J.resize(rp.n, rp.k);
  rp.T.resize(rp.n, rp.k);
  for (int a = 0; a < rp.n; ++a)
    for (int b = 0; b < rp.k; ++b) {
      rp.J(a, b) = r.normal();
      rp.T(a, b) = r.normal();
    }
  return rp;
}

std::vector<RangeInstance> c1_instances(std::uint64_t seed, CsvTable* table, double* worst) {
  std::vector<RangeInstance> out;
  *worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const RandomPair rp = random_pair(seed, i);
    const SubspacePair pair = SubspacePair::make(Norm::lp(rp.p, rp.n), rp.J);
    const OperatorSpec op{rp.T, "random"};
    RangeOptions o;
    o.budget = 6000;
    o.seed = seed + i;
    const SupWResult w = sup_re_W(pair, op, o);
    const MaxVResult v = max_re_V(pair, op, o, &w);
    const double diff = std::abs(v.upper - w.value);
    *worst = std::max(*worst, diff);
    out.push_back({"random-" + std::to_string(i), w.value, v.upper, std::max(0.0, v.width())});
    if (table)
      table->add_row({std::to_string(i), std::to_string(rp.n), std::to_string(rp.k), CsvTable::num(rp.p),
                      CsvTable::num(w.value), CsvTable::num(v.upper), CsvTable::num(diff), yn(diff <= 5e-3)});
  }
  return out;
}

Outcome c1(std::uint64_t seed) {
  Outcome o;
  CsvTable t({"instance", "n", "k", "p", "supReW", "maxReV_upper", "abs_diff", "pass"});
  double worst = 0.0;
  c1_instances(seed, &t, &worst);
  o.pass = worst <= 5e-3;
  o.detail = "20 random pairs in lp, worst |max Re V upper - sup Re W| = " + sci(worst) + " (tol 5e-3)";
  o.tables.emplace_back("c01_fr_equality.csv", t);
  return o;
}

// ---- 2: co W inside V -------------------------------------------------------

Outcome c2(std::uint64_t seed) {
  Outcome o;
  double worst = 0.0;
  std::vector<RangeInstance> all = c1_instances(seed, nullptr, &worst);

  // Nonsmooth pairs.
  Mat A(3, 3);
  A << 2, 0, 1, 0, 1, -1, 1, 1, 1;
  Mat B(2, 4);
  B << 1, -1, 0, 2, 0, 1, 1, -1;
  const std::vector<std::pair<std::string, Norm>> spaces = {
      {"linf4", Norm::lp(INFINITY, 4)},
      {"l1_4", Norm::lp(1.0, 4)},
      {"max_l1_pull", Norm::max_of({Norm::lp(1.0, 3), Norm::pullback(A, Norm::lp(INFINITY, 3))})},
      {"sum_linf_pull", Norm::sum_of({Norm::lp(INFINITY, 4), Norm::pullback(B, Norm::lp(1.0, 2))})},
      {"abssum_linf", Norm::absolute_sum(AbsoluteGauge::linf(), Norm::lp(1.0, 3), Norm::lp(INFINITY, 3))},
      {"abssum_l2", Norm::absolute_sum(AbsoluteGauge::l2(), Norm::lp(3.0, 2), Norm::lp(INFINITY, 2))},
  };
  for (std::size_t s = 0; s < spaces.size(); ++s)
    for (int rep = 0; rep < 3; ++rep) {
      CounterRng r = CounterRng(seed).derive(200 + 10 * s + rep);
      const int n = spaces[s].second.dim();
      const int k = std::min(n, 1 + rep);
      Mat J(n, k), T(n, k);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < k; ++b) {
          J(a, b) = r.normal();
          T(a, b) = r.normal();
        }
      const SubspacePair pair = SubspacePair::make(spaces[s].second, J);
      RangeOptions ro;
      ro.budget = 3000;
      ro.seed = seed + 31 * s + rep;
      const SupWResult w = sup_re_W(pair, {T, "T"}, ro);
      const MaxVResult v = max_re_V(pair, {T, "T"}, ro, &w);
      all.push_back({spaces[s].first + "-" + std::to_string(rep), w.value, v.upper, std::max(0.0, v.width())});
    }
  // Families through the searched W side and the structured V side.
  for (FamilyId id : all_families()) {
    const FamilyInstance f = make_family(id, 8);
    RangeOptions ro;
    ro.budget = 1200;
    ro.seed = seed;
    ro.exact_opnorm = f.exact_opnorm;
    const SupWResult w = sup_re_W(f.pair, f.T, ro);
    const MaxVResult v = max_re_V(f.pair, f.T, ro, &w);
    all.push_back({std::string(to_string(id)) + "-m8", w.value, v.upper, std::max(0.0, v.width())});
  }

  CsvTable t({"instance", "supReW", "maxReV_upper", "width", "excess", "pass"});
  int violations = 0;
  double worst_excess = -INFINITY;
  for (const auto& in : all) {
    const double excess = in.sup_w - (in.upper + 1e-6 + in.width);
    const bool ok = excess <= 0.0;
    violations += ok ? 0 : 1;
    worst_excess = std::max(worst_excess, in.sup_w - in.upper);
    t.add_row({in.label, CsvTable::num(in.sup_w), CsvTable::num(in.upper), CsvTable::num(in.width),
               CsvTable::num(excess), yn(ok)});
  }
  o.pass = violations == 0;
  o.detail = std::to_string(all.size()) + " instances, " + std::to_string(violations) +
             " violations, max(sup Re W - upper) = " + sci(worst_excess);
  o.tables.emplace_back("c02_containment.csv", t);
  return o;
}

// ---- 3: example34 gap law -------------------------------------------------

Outcome c3(std::uint64_t seed) {
  Outcome o;
  SweepOptions so;
  so.seed = seed;
  const std::vector<double> alphas = {1.0, 0.3, 0.1, 0.03};
  const GapProfile prof = sweep(FamilyId::Example34, {4, 16, 64, 256}, alphas, so);
  CsvTable t({"m", "alpha", "quotient", "reference", "abs_err", "supW", "pass"});
  double worst = 0.0, worst_w = 0.0;
  for (const GapRow& r : prof.rows) {
    const double ref = oracle::law_example34(r.m, r.alpha);
    const double err = std::abs(r.quotient - ref);
    worst = std::max(worst, err);
    worst_w = std::max(worst_w, r.sup_re_W);
    t.add_row({std::to_string(r.m), CsvTable::num(r.alpha), CsvTable::num(r.quotient), CsvTable::num(ref),
               CsvTable::num(err), CsvTable::num(r.sup_re_W), yn(err <= 1e-6 && r.sup_re_W <= 1e-8)});
  }
  so.with_sup_w = false;
  const GapRow big = sweep(FamilyId::Example34, {999}, {1.0}, so).rows.at(0);
  const double ref = oracle::law_example34(999, 1.0);
  const bool big_ok = std::abs(big.quotient - ref) <= 1e-6 && big.quotient >= 0.99;
  t.add_row({"999", CsvTable::num(1.0), CsvTable::num(big.quotient), CsvTable::num(ref),
             CsvTable::num(std::abs(big.quotient - ref)), CsvTable::num(big.sup_re_W), yn(big_ok)});
  o.pass = worst <= 1e-6 && worst_w <= 1e-8 && big_ok;
  o.detail = "worst |err| " + sci(worst) + " (tol 1e-6), max sup Re W " + sci(worst_w) +
             " (tol 1e-8), quotient(m=999, a=1) = " + format_double(big.quotient);
  o.tables.emplace_back("c03_example34.csv", t);
  return o;
}

// ---- 4: c0-type gap law -----------------------------------------------------

Outcome c4(std::uint64_t seed) {
  Outcome o;
  SweepOptions so;
  so.seed = seed;
  CsvTable t({"family", "m", "alpha", "quotient", "reference", "abs_err", "supW", "pass"});
  double worst = 0.0, worst_w = 0.0, echo = NAN;
  for (FamilyId id : {FamilyId::Example32, FamilyId::RemarkCase1}) {
    const GapProfile prof = sweep(id, {8, 20}, {0.1, 0.01}, so);
    for (const GapRow& r : prof.rows) {
      const double ref = oracle::law_c0(r.m, r.alpha);
      const double err = std::abs(r.quotient - ref);
      worst = std::max(worst, err);
      worst_w = std::max(worst_w, r.sup_re_W);
      if (r.m == 20 && r.alpha == 0.1 && id == FamilyId::Example32) echo = r.quotient;
      t.add_row({to_string(id), std::to_string(r.m), CsvTable::num(r.alpha), CsvTable::num(r.quotient),
                 CsvTable::num(ref), CsvTable::num(err), CsvTable::num(r.sup_re_W), yn(err <= 1e-6)});
    }
  }
  const bool echo_ok = std::abs(echo - 0.99999) <= 1e-5;
  o.pass = worst <= 1e-6 && worst_w <= 1e-8 && echo_ok;
  o.detail = "worst |err| " + sci(worst) + " (tol 1e-6), max sup Re W " + sci(worst_w) +
             ", quotient(m=20, a=0.1) = " + format_double(echo);
  o.tables.emplace_back("c04_c0_gap.csv", t);
  return o;
}

// ---- 5: classical BPB repair ------------------------------------------------

// State of ℓp at unit u (a vertex choice for p = inf).
Vec lp_state(const Vec& u, double p) {
  Vec f = Vec::Zero(u.size());
  if (std::isinf(p)) {
    Eigen::Index i = 0;
    u.cwiseAbs().maxCoeff(&i);
    f(i) = u(i) < 0 ? -1.0 : 1.0;
    return f;
  }
  for (Eigen::Index i = 0; i < u.size(); ++i)
    f(i) = (u(i) < 0 ? -1.0 : 1.0) * std::pow(std::abs(u(i)), p - 1.0);
  return f / std::pow(lp(u, p), p - 1.0);
}

Outcome c5(std::uint64_t seed) {
  Outcome o;
  CsvTable t({"space", "eps", "trial", "deficiency", "y_distance", "ystar_distance", "pairing_error", "pass"});
  int total = 0, good = 0;
  double worst_ratio = 0.0;
  for (const auto& [name, p, n] : {std::tuple{"l3_4", 3.0, 4}, std::tuple{"linf_3", double(INFINITY), 3}}) {
    const Norm Y = Norm::lp(p, n);
    const double q = oracle::conjugate(p);
    for (double eps : {0.1, 0.3}) {
      for (int trial = 0; trial < 100; ++trial) {
        CounterRng r = CounterRng(seed).derive(5000 + 1000 * (n) + 100 * static_cast<int>(eps * 10) + trial);
        Vec u = r.normal_vector(n);
        u /= lp(u, p);
        const Vec f = lp_state(u, p);
        Vec y0, ys;
        double def = 1.0;
        double s = 0.5 * eps;
        for (int tries = 0; tries < 60 && !(def < eps * eps / 4.0); ++tries, s *= 0.7) {
          y0 = u + s * r.uniform() * r.normal_vector(n);
          y0 /= lp(y0, p);
          ys = f + s * r.uniform() * r.normal_vector(n);
          ys /= lp(ys, q);
          def = 1.0 - ys.dot(y0);
        }
        ++total;
        double dy = NAN, dys = NAN, perr = NAN;
        bool ok = false;
        try {
          const AttainingPair a = bpb_repair_classical(Y, y0, ys, eps, seed + trial, 400);
          dy = lp(a.x - y0, p);
          dys = lp(a.ystar - ys, q);
          perr = std::max({std::abs(a.ystar.dot(a.x) - 1.0), std::abs(lp(a.x, p) - 1.0), std::abs(lp(a.ystar, q) - 1.0)});
          ok = dy < eps && dys < eps && perr <= 1e-8;
          worst_ratio = std::max(worst_ratio, std::max(dy, dys) / eps);
        } catch (const std::exception&) {
          ok = false;
        }
        good += ok ? 1 : 0;
        t.add_row({name, CsvTable::num(eps), std::to_string(trial), CsvTable::num(def), CsvTable::num(dy),
                   CsvTable::num(dys), CsvTable::num(perr), yn(ok)});
      }
    }
  }
  o.pass = good == total;
  o.detail = std::to_string(good) + "/" + std::to_string(total) + " repaired; worst distance/eps = " + sci(worst_ratio);
  o.tables.emplace_back("c05_bpb_classical.csv", t);
  return o;
}

// ---- 6: diameter of A(delta) ------------------------------------------------

Outcome c6(std::uint64_t) {
  Outcome o;
  const std::vector<double> grid = {0.5,  0.3,   0.2,   0.1,   0.05, 0.03, 0.02,
                                    0.01, 0.005, 0.002, 0.001, 5e-4, 2e-4, 1e-4};
  CsvTable t({"gauge", "delta", "diameter", "brute_force", "abs_err", "pass"});
  bool ok = true;
  double worst = 0.0;
  std::string notes;
  std::map<std::string, double> at01;
  for (const auto& [name, p] : {std::pair{"l1", 1.0}, std::pair{"l2", 2.0}, std::pair{"linf", double(INFINITY)}}) {
    const AbsoluteGauge g = AbsoluteGauge::lp(p);
    double prev = INFINITY;
    std::vector<double> diam;
    for (double d : grid) {
      const double lib = region_A_diameter(g, d).diameter;
      const double bf = oracle::region_diameter(p, d);
      const double err = std::abs(lib - bf);
      worst = std::max(worst, err);
      const bool row_ok = err <= 1e-3 && lib <= prev + 1e-12;
      ok = ok && row_ok;
      prev = lib;
      diam.push_back(lib);
      if (d == 0.1) at01[name] = lib;
      t.add_row({name, CsvTable::num(d), CsvTable::num(lib), CsvTable::num(bf), CsvTable::num(err), yn(row_ok)});
    }
    for (double eps : {0.3, 0.1, 0.03}) {
      const bool drops = std::any_of(diam.begin(), diam.end(), [&](double x) { return x < eps; });
      if (!drops) notes += std::string(" ") + name + " never below " + format_double(eps) + ";";
      ok = ok && drops;
    }
  }
  ok = ok && std::abs(at01["l1"] - 0.2) <= 1e-3 && std::abs(at01["linf"] - 0.1) <= 1e-3;
  o.pass = ok;
  o.detail = "diam(l1, 0.1) = " + format_double(at01["l1"]) + ", diam(linf, 0.1) = " + format_double(at01["linf"]) +
             ", worst |lib - brute force| " + sci(worst) + notes;
  o.tables.emplace_back("c06_gauge_region.csv", t);
  return o;
}

// ---- 7: repair in absolute sums ---------------------------------------------

Outcome c7(std::uint64_t seed) {
  Outcome o;
  const double eps = 0.3;
  Mat J = Mat::Zero(5, 3);
  J.topRows(3).setIdentity();
  CsvTable t({"gauge", "trial", "deficiency", "threshold", "branch", "x_distance", "y_distance", "pairing_error", "pass"});
  int total = 0, good = 0;
  double worst_pair = 0.0;
  for (const auto& [name, p] : {std::pair{"l1", 1.0}, std::pair{"l2", 2.0}, std::pair{"linf", double(INFINITY)}}) {
    const AbsoluteGauge g = AbsoluteGauge::lp(p);
    const double q = oracle::conjugate(p);
    const SubspacePair pair = SubspacePair::make(Norm::absolute_sum(g, Norm::lp(INFINITY, 3), Norm::lp(2.0, 2)), J);
    const double threshold = absolute_repair_threshold(g, eps).delta;
    // Norm of Y* = ℓ1^3 (+)_{g*} ℓ2^2.
    auto dual = [&](const Vec& f) { return oracle::gauge2(lp(f.head(3), 1.0), lp(f.tail(2), 2.0), q); };
    // Largest |z*| completing a state at (x, 0): b0 of the dual gauge.
    const double zmax = std::isinf(q) ? 1.0 : 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      CounterRng r = CounterRng(seed).derive(7000 + 1000 * static_cast<int>(q == 1.0 ? 1 : q == 2.0 ? 2 : 3) + trial);
      Vec x = r.normal_vector(3);
      x /= lp(x, INFINITY);
      Vec f = Vec::Zero(5);
      f.head(3) = lp_state(x, INFINITY);
      if (zmax > 0) {
        Vec z = r.normal_vector(2);
        f.tail(2) = z / lp(z, 2.0) * zmax * r.uniform();
      }
      Vec x0, y0;
      double def = 1.0;
      double s = 0.05;
      for (int tries = 0; tries < 80 && !(def < threshold); ++tries, s *= 0.7) {
        x0 = x + s * r.uniform() * r.normal_vector(3);
        x0 /= lp(x0, INFINITY);
        y0 = f + s * r.uniform() * r.normal_vector(5);
        y0 /= dual(y0);
        def = 1.0 - y0.head(3).dot(x0);
      }
      ++total;
      double dx = NAN, dy = NAN, perr = NAN;
      int branch = 0;
      bool ok = false;
      try {
        const AbsoluteRepairResult res = bpb_repair_absolute(pair, x0, y0, eps, seed + trial, 400);
        branch = res.branch;
        dx = lp(res.pair.x - x0, INFINITY);
        dy = dual(res.pair.ystar - y0);
        perr = std::max({std::abs(res.pair.ystar.dot(J * res.pair.x) - 1.0), std::abs(lp(res.pair.x, INFINITY) - 1.0),
                         std::abs(dual(res.pair.ystar) - 1.0)});
        worst_pair = std::max(worst_pair, perr);
        ok = dx < eps && dy < eps && perr <= 1e-8;
      } catch (const std::exception&) {
        ok = false;
      }
      good += ok ? 1 : 0;
      t.add_row({name, std::to_string(trial), CsvTable::num(def), CsvTable::num(threshold), std::to_string(branch),
                 CsvTable::num(dx), CsvTable::num(dy), CsvTable::num(perr), yn(ok)});
    }
  }
  o.pass = good == total;
  o.detail = std::to_string(good) + "/" + std::to_string(total) + " repaired at eps 0.3; worst attaining error " +
             sci(worst_pair) + " (tol 1e-8)";
  o.tables.emplace_back("c07_absolute_repair.csv", t);
  return o;
}

// ---- 8: tau bracket ---------------------------------------------------------

Outcome c8(std::uint64_t seed) {
  Outcome o;
  CsvTable t({"norm", "samples", "max_width", "max_face_error", "monotone_violations", "pass"});
  bool ok = true;
  int mono_bad_total = 0;
  double worst_width = 0.0, worst_face = 0.0;

  const std::vector<std::pair<std::string, Norm>> smooth = {
      {"l1.5_3", Norm::lp(1.5, 3)},
      {"l2_4", Norm::lp(2.0, 4)},
      {"l3_5", Norm::lp(3.0, 5)},
      {"l4_2", Norm::lp(4.0, 2)},
      {"abssum_l2_l3_l2", Norm::absolute_sum(AbsoluteGauge::l2(), Norm::lp(3.0, 3), Norm::lp(2.0, 2))},
  };
  for (std::size_t s = 0; s < smooth.size(); ++s) {
    const Norm& N = smooth[s].second;
    double w = 0.0;
    int mono_bad = 0;
    for (int i = 0; i < 200; ++i) {
      CounterRng r = CounterRng(seed).derive(8000 + 1000 * s + i);
      const Vec u = project_to_sphere(N, r.normal_vector(N.dim()));
      const Vec y = r.normal_vector(N.dim());
      const TauBracket b = tau(N, u, y);
      w = std::max(w, b.width());
      if (monotone_quotient_violation(difference_quotients(N, u, y)) > 0.0) ++mono_bad;
    }
    const bool row_ok = w <= 1e-6 && mono_bad == 0;
    ok = ok && row_ok;
    worst_width = std::max(worst_width, w);
    mono_bad_total += mono_bad;
    t.add_row({smooth[s].first, "200", CsvTable::num(w), "", std::to_string(mono_bad), yn(row_ok)});
  }

  // Polyhedral trees against lattice one-sided derivatives of hand-coded norms.
  Mat A(3, 3);
  A << 2, 0, 1, 0, 1, -1, 1, 1, 1;
  Mat B(2, 4);
  B << 1, -1, 0, 2, 0, 1, 1, -1;
  using F = std::function<double(const Vec&)>;
  const std::vector<std::tuple<std::string, Norm, F>> trees = {
      {"linf_4", Norm::lp(INFINITY, 4), [](const Vec& v) { return v.cwiseAbs().maxCoeff(); }},
      {"l1_5", Norm::lp(1.0, 5), [](const Vec& v) { return v.cwiseAbs().sum(); }},
      {"max(l1_3, A*linf_3)", Norm::max_of({Norm::lp(1.0, 3), Norm::pullback(A, Norm::lp(INFINITY, 3))}),
       [A](const Vec& v) { return std::max(v.cwiseAbs().sum(), (A * v).cwiseAbs().maxCoeff()); }},
      {"sum(linf_4, B*l1_2)", Norm::sum_of({Norm::lp(INFINITY, 4), Norm::pullback(B, Norm::lp(1.0, 2))}),
       [B](const Vec& v) { return v.cwiseAbs().maxCoeff() + (B * v).cwiseAbs().sum(); }},
      {"abssum_linf(l1_3, linf_3)",
       Norm::absolute_sum(AbsoluteGauge::linf(), Norm::lp(1.0, 3), Norm::lp(INFINITY, 3)),
       [](const Vec& v) { return std::max(v.head(3).cwiseAbs().sum(), v.tail(3).cwiseAbs().maxCoeff()); }},
      {"abssum_l1(linf_2, l1_2)", Norm::absolute_sum(AbsoluteGauge::l1(), Norm::lp(INFINITY, 2), Norm::lp(1.0, 2)),
       [](const Vec& v) { return v.head(2).cwiseAbs().maxCoeff() + v.tail(2).cwiseAbs().sum(); }},
  };
  for (std::size_t s = 0; s < trees.size(); ++s) {
    const auto& [name, N, f] = trees[s];
    const int n = N.dim();
    double face = 0.0;
    int mono_bad = 0;
    for (int i = 0; i < 200; ++i) {
      CounterRng r = CounterRng(seed).derive(9000 + 1000 * s + i);
      Vec u(n), y(n);
      do {
        for (int j = 0; j < n; ++j) u(j) = std::floor(r.uniform() * 5) - 2;
      } while (u.cwiseAbs().maxCoeff() == 0.0);
      for (int j = 0; j < n; ++j) y(j) = std::floor(r.uniform() * 5) - 2;
      const double exact = oracle::lattice_derivative(f, u, y);
      const Vec un = u / f(u);
      const TauBracket b = tau(N, un, y);
      const double err = std::max(std::abs(b.lower - exact), exact - b.upper);
      face = std::max(face, err);
      if (monotone_quotient_violation(difference_quotients(N, un, y)) > 0.0) ++mono_bad;
    }
    const bool row_ok = face <= 1e-6 && mono_bad == 0;
    ok = ok && row_ok;
    worst_face = std::max(worst_face, face);
    mono_bad_total += mono_bad;
    t.add_row({name, "200", "", CsvTable::num(face), std::to_string(mono_bad), yn(row_ok)});
  }
  o.pass = ok;
  o.detail = "smooth width max " + sci(worst_width) + " (tol 1e-6) over 1000; polyhedral face error max " +
             sci(worst_face) + " (tol 1e-6) over 1200; monotone violations " + std::to_string(mono_bad_total);
  o.tables.emplace_back("c08_tau.csv", t);
  return o;
}

// ---- 9: modulus of convexity ------------------------------------------------

Outcome c9(std::uint64_t seed) {
  Outcome o;
  ModulusOptions mo;
  mo.seed = seed;
  CsvTable t({"space", "eps", "estimate", "reference", "abs_err", "pass"});
  double worst2 = 0.0, worst_inf = 0.0;
  for (double eps : {0.5, 1.0}) {
    const double d2 = modulus_of_convexity(Norm::lp(2.0, 2), eps, mo).delta;
    const double ref = oracle::convexity_l2(eps);
    worst2 = std::max(worst2, std::abs(d2 - ref));
    t.add_row({"l2_2", CsvTable::num(eps), CsvTable::num(d2), CsvTable::num(ref), CsvTable::num(std::abs(d2 - ref)),
               yn(std::abs(d2 - ref) <= 1e-4)});
    const double dinf = modulus_of_convexity(Norm::lp(INFINITY, 2), eps, mo).delta;
    worst_inf = std::max(worst_inf, dinf);
    t.add_row({"linf_2", CsvTable::num(eps), CsvTable::num(dinf), CsvTable::num(0.0), CsvTable::num(std::abs(dinf)),
               yn(dinf <= 1e-6)});
  }
  o.pass = worst2 <= 1e-4 && worst_inf <= 1e-6;
  o.detail = "l2 worst |err| " + sci(worst2) + " (tol 1e-4), linf max estimate " + sci(worst_inf) + " (tol 1e-6)";
  o.tables.emplace_back("c09_convexity.csv", t);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(std::uint64_t)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = {
      {1, "finite-dimensional FR equality", c1},
      {2, "co W inside V", c2},
      {3, "example34 gap law", c3},
      {4, "c0 gap law (example32, remark case 1)", c4},
      {5, "classical BPB repair", c5},
      {6, "diameter of A(delta)", c6},
      {7, "absolute-sum repair", c7},
      {8, "tau bracket soundness", c8},
      {9, "modulus of convexity", c9},
  };
  return c;
}

bool wanted(const VerifyOptions& opt, int id) {
  return opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), id) != opt.only.end();
}

// name -> CSV text, for criteria 1..9.
using Artifacts = std::map<std::string, std::string>;

std::vector<CriterionResult> run_core(const VerifyOptions& opt, const std::vector<int>& ids, Artifacts* art,
                                      const std::string& dir) {
  std::vector<CriterionResult> out;
  for (const Criterion& c : criteria()) {
    if (std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    if (opt.verbose) std::cerr << "[verify] C" << c.id << " " << c.name << " ..." << std::endl;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r{c.id, c.name, false, "", 0.0};
    try {
      Outcome o = c.run(opt.seed);
      r.pass = o.pass;
      r.detail = o.detail;
      for (const auto& [file, table] : o.tables) {
        const std::string text = table.str();
        (*art)[file] = text;
        if (!dir.empty()) write_text_file((fs::path(dir) / file).string(), text);
      }
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(r);
  }
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<CriterionResult> run_verify(const VerifyOptions& opt) {
  std::vector<int> ids;
  for (const Criterion& c : criteria())
    if (wanted(opt, c.id)) ids.push_back(c.id);
  Artifacts first;
  std::vector<CriterionResult> results = run_core(opt, ids, &first, opt.out_dir);

  if (wanted(opt, 10)) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<int> all;
    for (const Criterion& c : criteria()) all.push_back(c.id);
    // The first pass may have skipped criteria; run them now so both passes cover 1..9.
    std::vector<int> missing;
    for (int id : all)
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) missing.push_back(id);
    if (!missing.empty()) run_core(opt, missing, &first, opt.out_dir);
    const std::string rerun_dir = opt.out_dir.empty() ? "" : (fs::path(opt.out_dir) / "rerun").string();
    Artifacts second;
    run_core(opt, all, &second, rerun_dir);

    int differing = 0;
    for (const auto& [file, text] : first) {
      std::string a = text, b = second.count(file) ? second.at(file) : std::string("\x01missing");
      if (!opt.out_dir.empty()) {
        a = read_file(fs::path(opt.out_dir) / file);
        b = read_file(fs::path(rerun_dir) / file);
      }
      if (a != b) ++differing;
    }
    CriterionResult r{10, "determinism", differing == 0 && first.size() == second.size(), "", 0.0};
    r.detail = std::to_string(first.size()) + " CSVs compared byte for byte, " + std::to_string(differing) + " differ";
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back(r);
  }
  if (!opt.out_dir.empty()) {
    CsvTable summary({"criterion", "name", "pass", "detail"});
    for (const auto& r : results) summary.add_row({std::to_string(r.id), r.name, yn(r.pass), r.detail});
    write_text_file((fs::path(opt.out_dir) / "summary.csv").string(), summary.str());
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream o;
  o.imbue(std::locale::classic());
  o << (r.pass ? "PASS" : "FAIL") << "  C" << r.id << (r.id < 10 ? "  " : " ") << r.name << ": " << r.detail;
  o.precision(2);
  o << std::fixed << "  [" << r.seconds << " s]";
  return o.str();
}

}  // namespace nrange
