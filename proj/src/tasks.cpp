#include "nrange/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <limits>
#include <sstream>

#include "nrange/absolute_repair.hpp"
#include "nrange/duality.hpp"
#include "nrange/gauge.hpp"
#include "nrange/moduli.hpp"
#include "nrange/ranges.hpp"
#include "nrange/report.hpp"
#include "nrange/verify.hpp"

namespace nrange {
namespace {

namespace fs = std::filesystem;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Ctx {
  const SpecFile& spec;
  const TaskRecord& task;
  const TaskOverrides& ov;

  std::uint64_t seed() const {
    if (ov.seed) return *ov.seed;
    return task.has("seed") ? std::stoull(task.get("seed")) : 1;
  }
  int budget(int fallback) const {
    if (ov.budget) return *ov.budget;
    return task.has("budget") ? std::stoi(task.get("budget")) : fallback;
  }
  int starts(int fallback) const {
    if (ov.starts) return *ov.starts;
    return task.has("starts") ? std::stoi(task.get("starts")) : fallback;
  }
  fs::path resolve(const std::string& p) const {
    fs::path path(p);
    if (path.is_absolute()) return path;
    return fs::path(ov.out_dir.value_or(".")) / path;
  }
  fs::path csv_path() const { return resolve(task.get_or("out", task.name + ".csv")); }
  std::vector<double> list(const std::string& key) const { return parse_number_list(task.get(key)); }
  Vec vec(const std::string& key) const {
    const auto v = list(key);
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
};

std::string yesno(bool b) { return b ? "true" : "false"; }

void emit(const Ctx& c, const CsvTable& t, TaskOutcome& out) {
  const fs::path p = c.csv_path();
  t.write(p.string());
  out.artifacts.push_back(p.string());
}

void emit_svg(const Ctx& c, SvgPlot plot, TaskOutcome& out) {
  if (!c.task.has("svg")) return;
  const fs::path p = c.resolve(c.task.get("svg"));
  plot.write(p.string());
  out.artifacts.push_back(p.string());
}

void fail_post(TaskOutcome& out, const std::string& msg) {
  out.exit_code = std::max<int>(out.exit_code, kPostcondition);
  if (!out.message.empty()) out.message += "; ";
  out.message += msg;
}

void run_eval(const Ctx& c, TaskOutcome& out) {
  const Norm& Y = *c.spec.find_space(c.task.get("space"));
  const Vec v = c.vec("vector");
  CsvTable t({"norm", "dual_lower", "dual_upper", "dual_exact", "pairing"});
  double lo = kNaN, up = kNaN, pairing = kNaN;
  bool exact = false;
  if (c.task.has("functional")) {
    const Vec f = c.vec("functional");
    const DualNormValue d = eval_dual_norm(Y, f, {c.budget(4000), c.seed()});
    lo = d.lower;
    up = d.upper;
    exact = d.exact;
    pairing = f.dot(v);
  }
  t.add_row({CsvTable::num(eval_norm(Y, v)), CsvTable::num(lo), CsvTable::num(up), yesno(exact),
             CsvTable::num(pairing)});
  emit(c, t, out);
}

void run_tau(const Ctx& c, TaskOutcome& out) {
  const Norm& Y = *c.spec.find_space(c.task.get("space"));
  Vec u = c.vec("point");
  const Vec y = c.vec("direction");
  u = project_to_sphere(Y, u);
  const TauBracket b = tau(Y, u, y);
  const double mono = monotone_quotient_violation(difference_quotients(Y, u, y));
  CsvTable t({"tau_lower", "tau_upper", "width", "state_kind", "quotients", "monotone_violation"});
  t.add_row({CsvTable::num(b.lower), CsvTable::num(b.upper), CsvTable::num(b.width()), to_string(b.kind),
             std::to_string(b.quotients), CsvTable::num(mono)});
  emit(c, t, out);
  if (mono > 0.0) fail_post(out, "difference quotients are not monotone");
  if (b.lower > b.upper) fail_post(out, "inverted tau bracket");
}

void run_range(const Ctx& c, TaskOutcome& out) {
  const OperatorDef& od = *c.spec.find_operator(c.task.get("operator"));
  const PairDef& pd = *c.spec.find_pair(od.pair);
  RangeOptions opt;
  opt.budget = c.budget(opt.budget);
  opt.starts = c.starts(opt.starts);
  opt.seed = c.seed();
  if (c.task.has("alphas")) opt.alphas = c.list("alphas");
  std::sort(opt.alphas.begin(), opt.alphas.end(), std::greater<>());
  if (od.from_family)
    if (const FamilyDef* f = c.spec.find_family(od.name)) opt.exact_opnorm = make_family(f->id, f->m).exact_opnorm;

  const GapReport r = gap_report(pd.pair, od.op, opt);
  CsvTable t({"direction", "supReW", "maxReV_lower", "maxReV_upper", "gap"});
  for (const GapEntry* e : {&r.plus, &r.minus}) {
    t.add_row({std::to_string(e->direction), CsvTable::num(e->sup_re_W), CsvTable::num(e->max_re_V_lower),
               CsvTable::num(e->max_re_V_upper), CsvTable::num(e->gap)});
    const double width = e->max_re_V_upper - e->max_re_V_lower;
    if (e->sup_re_W > e->max_re_V_upper + 1e-6 + std::max(0.0, width))
      fail_post(out, "sup Re W exceeds the max Re V upper bound");
  }
  emit(c, t, out);

  if (c.task.has("points")) {
    const auto pts = range_points(pd.pair, od.op, std::stoi(c.task.get("points")), c.seed());
    CsvTable pt({"index", "value"});
    for (std::size_t i = 0; i < pts.size(); ++i) pt.add_row({std::to_string(i), CsvTable::num(pts[i])});
    fs::path p = c.csv_path();
    p.replace_filename(p.stem().string() + "_points.csv");
    pt.write(p.string());
    out.artifacts.push_back(p.string());
  }
  if (c.task.has("svg")) {
    const MaxVResult v = max_re_V(pd.pair, od.op, opt);
    SvgPlot plot{"gap quotient (" + od.name + ")", "alpha", "(||J + aT|| - 1)/a", {{"quotient", {}}}, true};
    for (const auto& q : v.trace) plot.series[0].points.emplace_back(q.alpha, q.quotient);
    emit_svg(c, plot, out);
  }
}

void run_gap_sweep(const Ctx& c, TaskOutcome& out) {
  const FamilyId id = parse_family(c.task.get("family"));
  std::vector<int> ms;
  for (double m : c.list("m")) ms.push_back(static_cast<int>(m));
  const auto alphas = c.list("alpha");
  SweepOptions opt;
  opt.mode = c.task.get_or("mode", "structured-exact") == "optimizer" ? SweepMode::Optimizer : SweepMode::StructuredExact;
  opt.budget = c.budget(opt.budget);
  opt.seed = c.seed();
  opt.with_sup_w = c.task.get_or("supw", "true") == "true";
  const GapProfile prof = sweep(id, ms, alphas, opt);

  CsvTable t({"family", "m", "alpha", "quotient", "reference", "supW", "abs_err"});
  SvgPlot plot{std::string("gap quotient, ") + to_string(id), "alpha", "quotient", {}, true};
  for (const GapRow& r : prof.rows) {
    const double err = std::isnan(r.reference) ? kNaN : std::abs(r.quotient - r.reference);
    t.add_row({to_string(id), std::to_string(r.m), CsvTable::num(r.alpha), CsvTable::num(r.quotient),
               CsvTable::num(r.reference), CsvTable::num(r.sup_re_W), CsvTable::num(err)});
    const std::string label = "m=" + std::to_string(r.m);
    if (plot.series.empty() || plot.series.back().label != label) plot.series.push_back({label, {}});
    plot.series.back().points.emplace_back(r.alpha, r.quotient);
    if (opt.mode == SweepMode::StructuredExact && !std::isnan(err) && err > 1e-6)
      fail_post(out, "quotient departs from the closed form at m=" + std::to_string(r.m));
    if (opt.with_sup_w && r.sup_re_W > r.quotient + 1e-6)
      fail_post(out, "sup Re W above the quotient at m=" + std::to_string(r.m));
  }
  emit(c, t, out);
  emit_svg(c, plot, out);
}

void run_bpb_repair(const Ctx& c, TaskOutcome& out) {
  const bool on_space = c.task.has("space");
  const SubspacePair pair =
      on_space ? SubspacePair::identity(*c.spec.find_space(c.task.get("space"))) : c.spec.find_pair(c.task.get("pair"))->pair;
  const std::string method = c.task.get_or("method", on_space ? "classical" : "search");
  if (method == "classical" && !on_space) throw std::invalid_argument("method classical needs 'space'");
  if (method == "absolute" && !is_left_summand_pair(pair))
    throw std::invalid_argument("method absolute needs a pair X -> X (+)_g Z with J = [I; 0]");

  // Inputs are normalized: x0 onto S_X, y0 by its dual norm.
  const Vec x0 = project_to_sphere(pair.X, c.vec("x0"));
  Vec y0 = c.vec("y0");
  y0 /= dual_norm_upper(pair.Y, y0);
  const double deficiency = 1.0 - y0.dot(pair.J * x0);
  const int budget = c.budget(400);

  CsvTable t({"eps", "method", "deficiency", "threshold", "x_distance", "y_distance", "pairing_error", "success"});
  for (double eps : c.list("eps")) {
    double threshold = kNaN, dx = kNaN, dy = kNaN, perr = kNaN;
    bool ok = false;
    std::string why;
    auto record = [&](const AttainingPair& w) {
      dx = eval_norm(pair.X, w.x - x0);
      dy = dual_distance(pair.Y, w.ystar, y0);
      perr = check_attaining(pair, w).pairing_error;
      ok = dx < eps && dy < eps && perr <= 1e-8;
    };
    if (method == "classical") {
      threshold = eps * eps / 4.0;
      try {
        record(bpb_repair_classical(pair.Y, x0, y0, eps, c.seed(), budget));
      } catch (const RepairFailure& e) {
        record(e.best().witness);
        ok = false;
        why = e.what();
      } catch (const std::invalid_argument& e) {
        why = e.what();
      }
    } else if (method == "absolute") {
      try {
        const AbsoluteRepairResult r = bpb_repair_absolute(pair, x0, y0, eps, c.seed(), budget);
        threshold = r.threshold.delta;
        record(r.pair);
      } catch (const DeficiencyTooLarge& e) {
        threshold = e.threshold();
        why = e.what();
      } catch (const RepairFailure& e) {
        record(e.best().witness);
        ok = false;
        why = e.what();
      }
    } else {
      const RepairResult r = repair_distance(pair, x0, y0, {budget, c.seed(), eps / 2});
      record(r.witness);
    }
    if (!ok) fail_post(out, why.empty() ? "no repair within eps=" + format_double(eps) : why);
    t.add_row({CsvTable::num(eps), method, CsvTable::num(deficiency), CsvTable::num(threshold), CsvTable::num(dx),
               CsvTable::num(dy), CsvTable::num(perr), yesno(ok)});
  }
  emit(c, t, out);
}

ModulusOptions modulus_options(const Ctx& c) {
  ModulusOptions opt;
  opt.budget = c.budget(opt.budget);
  opt.seed = c.seed();
  if (c.task.has("repair_budget")) opt.repair_budget = std::stoi(c.task.get("repair_budget"));
  return opt;
}

void run_bpb_modulus(const Ctx& c, TaskOutcome& out) {
  const SubspacePair& pair = c.spec.find_pair(c.task.get("pair"))->pair;
  const ModulusOptions opt = modulus_options(c);
  CsvTable t({"eps", "delta_upper", "repair_distance", "certification"});
  SvgPlot plot{"BPB modulus upper bound", "eps", "delta", {{"delta_upper", {}}}};
  for (double eps : c.list("eps")) {
    const BpbModulusResult r = bpb_modulus(pair, eps, opt);
    t.add_row({CsvTable::num(eps), CsvTable::num(r.delta_upper), CsvTable::num(r.repair_distance), to_string(r.cert)});
    plot.series[0].points.emplace_back(eps, r.delta_upper);
  }
  emit(c, t, out);
  emit_svg(c, plot, out);
}

void run_ssd(const Ctx& c, TaskOutcome& out) {
  const Norm& Y = *c.spec.find_space(c.task.get("space"));
  const Vec u = project_to_sphere(Y, c.vec("point"));
  const ModulusOptions opt = modulus_options(c);
  CsvTable t({"eps", "zeta_upper", "distance", "certification"});
  SvgPlot plot{"strong subdifferentiability modulus", "eps", "zeta", {{"zeta_upper", {}}}};
  for (double eps : c.list("eps")) {
    const SsdResult r = ssd_modulus(Y, u, eps, opt);
    t.add_row({CsvTable::num(eps), CsvTable::num(r.zeta_upper), CsvTable::num(r.distance), to_string(r.cert)});
    plot.series[0].points.emplace_back(eps, r.zeta_upper);
  }
  emit(c, t, out);
  emit_svg(c, plot, out);
}

void run_convexity(const Ctx& c, TaskOutcome& out) {
  const Norm& N = *c.spec.find_space(c.task.get("space"));
  const ModulusOptions opt = modulus_options(c);
  CsvTable t({"eps", "delta"});
  ModulusCurve curve;
  SvgPlot plot{"modulus of convexity", "eps", "delta", {{"delta", {}}}};
  for (double eps : c.list("eps")) {
    const ConvexityResult r = modulus_of_convexity(N, eps, opt);
    t.add_row({CsvTable::num(eps), CsvTable::num(r.delta)});
    plot.series[0].points.emplace_back(eps, r.delta);
    curve.samples.push_back({eps, r.delta, Certification::WitnessedUpper});
  }
  emit(c, t, out);
  emit_svg(c, plot, out);
  std::sort(curve.samples.begin(), curve.samples.end(), [](const auto& a, const auto& b) { return a.eps < b.eps; });
  if (!curve.well_formed()) fail_post(out, "convexity modulus is not nondecreasing in eps");
}

void run_smoothness(const Ctx& c, TaskOutcome& out) {
  const Norm& N = *c.spec.find_space(c.task.get("space"));
  const auto prof = uniform_smoothness_profile(N, c.list("t"), modulus_options(c));
  CsvTable t({"t", "worst_defect"});
  SvgPlot plot{"uniform smoothness defect", "t", "defect", {{"worst_defect", {}}}, true};
  for (const auto& p : prof) {
    t.add_row({CsvTable::num(p.t), CsvTable::num(p.worst_defect)});
    plot.series[0].points.emplace_back(p.t, p.worst_defect);
  }
  emit(c, t, out);
  emit_svg(c, plot, out);
}

void run_absnorm(const Ctx& c, TaskOutcome& out) {
  const AbsoluteGauge g = AbsoluteGauge::parse(c.task.get("gauge"));
  const double b0 = compute_b0(g);
  std::vector<double> deltas = {0.5, 0.2, 0.1, 0.05, 0.02, 0.01};
  if (c.task.has("delta")) deltas = c.list("delta");
  CsvTable t({"quantity", "parameter", "b0", "value"});
  t.add_row({"b0", "", CsvTable::num(b0), CsvTable::num(b0)});
  SvgPlot plot{"diameter of A(delta), " + g.to_string(), "delta", "diameter", {{"diameter", {}}}, true};
  for (double d : deltas) {
    const GaugeRegionReport r = region_A_diameter(g, d);
    t.add_row({"diameter", CsvTable::num(d), CsvTable::num(b0), CsvTable::num(r.diameter)});
    plot.series[0].points.emplace_back(d, r.diameter);
  }
  if (c.task.has("eps"))
    for (double eps : c.list("eps")) {
      double d = kNaN;
      try {
        d = delta_for_diameter(g, eps);
      } catch (const std::runtime_error&) {
        fail_post(out, "no delta on the grid reaches diameter < " + format_double(eps));
      }
      t.add_row({"delta_for_diameter", CsvTable::num(eps), CsvTable::num(b0), CsvTable::num(d)});
      t.add_row({"repair_delta", CsvTable::num(eps), CsvTable::num(b0),
                 CsvTable::num(absolute_repair_threshold(g, eps).delta)});
    }
  emit(c, t, out);
  emit_svg(c, plot, out);
}

void run_verify_task(const Ctx& c, TaskOutcome& out) {
  VerifyOptions opt;
  opt.seed = c.seed();
  opt.out_dir = c.resolve(c.task.name).string();
  const auto results = run_verify(opt);
  CsvTable t({"criterion", "name", "pass", "detail"});
  for (const auto& r : results) {
    t.add_row({std::to_string(r.id), r.name, yesno(r.pass), r.detail});
    if (!r.pass) fail_post(out, "criterion " + std::to_string(r.id) + " failed");
  }
  emit(c, t, out);
}

}  // namespace

TaskOutcome run_task(const SpecFile& spec, const std::string& task_name, const TaskOverrides& overrides) {
  TaskOutcome out;
  const TaskRecord* task = spec.find_task(task_name);
  if (!task) {
    out.exit_code = kUsage;
    out.message = "no task named '" + task_name + "'";
    return out;
  }
  const Ctx c{spec, *task, overrides};
  try {
    const std::string& k = task->kind;
    if (k == "eval") run_eval(c, out);
    else if (k == "tau") run_tau(c, out);
    else if (k == "range") run_range(c, out);
    else if (k == "gap-sweep") run_gap_sweep(c, out);
    else if (k == "bpb-repair") run_bpb_repair(c, out);
    else if (k == "bpb-modulus") run_bpb_modulus(c, out);
    else if (k == "ssd") run_ssd(c, out);
    else if (k == "convexity") run_convexity(c, out);
    else if (k == "smoothness") run_smoothness(c, out);
    else if (k == "absnorm") run_absnorm(c, out);
    else if (k == "verify") run_verify_task(c, out);
    else throw std::invalid_argument("unknown task kind '" + k + "'");
  } catch (const std::invalid_argument& e) {
    out.exit_code = kUsage;
    out.message = std::string(task_name) + ": " + e.what();
  } catch (const std::exception& e) {
    // Unwritable outputs and numerical failures.
    out.exit_code = kPostcondition;
    out.message = std::string(task_name) + ": " + e.what();
  }
  return out;
}

int run_all_tasks(const SpecFile& spec, const TaskOverrides& overrides, int jobs, std::vector<TaskOutcome>* outcomes) {
  std::vector<TaskOutcome> res(spec.tasks.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < spec.tasks.size(); ++i) res[i] = run_task(spec, spec.tasks[i].name, overrides);
  } else {
    std::size_t next = 0;
    while (next < spec.tasks.size()) {
      std::vector<std::future<TaskOutcome>> batch;
      const std::size_t first = next;
      for (; next < spec.tasks.size() && batch.size() < static_cast<std::size_t>(jobs); ++next)
        batch.push_back(std::async(std::launch::async, [&, next] { return run_task(spec, spec.tasks[next].name, overrides); }));
      for (std::size_t j = 0; j < batch.size(); ++j) res[first + j] = batch[j].get();
    }
  }
  int code = kOk;
  for (const auto& r : res) code = std::max(code, r.exit_code);
  if (outcomes) *outcomes = std::move(res);
  return code;
}

}  // namespace nrange
