// nrange: batch front end over spec files.
#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "nrange/spec_file.hpp"
#include "nrange/tasks.hpp"
#include "nrange/verify.hpp"

namespace {

struct Common {
  std::string spec;
  std::string task;
  std::optional<std::uint64_t> seed;
  std::optional<int> budget;
  std::optional<int> starts;
  std::optional<std::string> out;
  int jobs = 1;
};

void add_common(CLI::App* sub, Common& c, bool spec_required) {
  auto* s = sub->add_option("--spec", c.spec, "spec file");
  if (spec_required) s->required();
  sub->add_option("--task", c.task, "task name (default: every task of this kind)");
  sub->add_option("--seed", c.seed, "override the task seed");
  sub->add_option("--budget", c.budget, "override the evaluation budget")->check(CLI::PositiveNumber);
  sub->add_option("--starts", c.starts, "override the number of search starts")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "output directory for relative paths");
  sub->add_option("--jobs", c.jobs, "run independent tasks concurrently")->check(CLI::PositiveNumber);
}

int run_kind(const std::string& kind, const Common& c, const std::string& spec_path) {
  nrange::SpecFile spec;
  try {
    spec = nrange::load_spec_file(spec_path);
  } catch (const nrange::SpecError& e) {
    std::cerr << spec_path << ": " << e.what() << "\n";
    return nrange::kUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return nrange::kUsage;
  }
  nrange::SpecFile selected = spec;
  selected.tasks.clear();
  for (const auto& t : spec.tasks)
    if ((kind.empty() || t.kind == kind) && (c.task.empty() || t.name == c.task)) selected.tasks.push_back(t);
  if (selected.tasks.empty()) {
    std::cerr << "no " << (kind.empty() ? "" : kind + " ") << "task" << (c.task.empty() ? "" : " named '" + c.task + "'")
              << " in " << spec_path << "\n";
    return nrange::kUsage;
  }
  nrange::TaskOverrides ov{c.seed, c.budget, c.starts, c.out};
  std::vector<nrange::TaskOutcome> outcomes;
  const int code = nrange::run_all_tasks(selected, ov, c.jobs, &outcomes);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    std::cout << selected.tasks[i].name << ": " << (o.exit_code == 0 ? "ok" : "failed (exit " + std::to_string(o.exit_code) + ")");
    for (const auto& a : o.artifacts) std::cout << " " << a;
    std::cout << "\n";
    if (!o.message.empty()) std::cerr << o.message << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical ranges of operators on subspaces, from declarative spec files"};
  app.require_subcommand(1);

  const std::map<std::string, std::string> simple = {
      {"eval", "norm and dual-norm evaluation"},
      {"tau", "directional derivative bracket"},
      {"range", "sup Re W against max Re V"},
      {"gap-sweep", "gap quotient over a family truncation"},
      {"ssd", "strong subdifferentiability modulus"},
      {"convexity", "modulus of convexity"},
      {"smoothness", "uniform smoothness profile"},
      {"absnorm", "absolute-gauge diagnostics"},
  };
  std::map<std::string, Common> opts;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : simple) {
    subs[name] = app.add_subcommand(name, help);
    add_common(subs[name], opts[name], true);
  }
  auto* run = app.add_subcommand("run", "every task in the spec file");
  add_common(run, opts["run"], true);

  auto* bpb = app.add_subcommand("bpb", "Bishop-Phelps-Bollobás tasks");
  bpb->require_subcommand(1);
  auto* repair = bpb->add_subcommand("repair", "repair near-attaining pairs");
  add_common(repair, opts["bpb-repair"], true);
  auto* modulus = bpb->add_subcommand("modulus", "BPB modulus upper bounds");
  add_common(modulus, opts["bpb-modulus"], true);

  auto* verify = app.add_subcommand("verify", "acceptance suite");
  add_common(verify, opts["verify"], false);
  std::vector<int> only;
  verify->add_option("--only", only, "criteria to run (1..10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nrange::kUsage;
  }

  for (const auto& [name, help] : simple)
    if (subs[name]->parsed()) return run_kind(name, opts[name], opts[name].spec);
  if (run->parsed()) return run_kind("", opts["run"], opts["run"].spec);
  if (repair->parsed()) return run_kind("bpb-repair", opts["bpb-repair"], opts["bpb-repair"].spec);
  if (modulus->parsed()) return run_kind("bpb-modulus", opts["bpb-modulus"], opts["bpb-modulus"].spec);

  const Common& c = opts["verify"];
  if (!c.spec.empty()) return run_kind("verify", c, c.spec);
  nrange::VerifyOptions vo;
  if (c.seed) vo.seed = *c.seed;
  vo.out_dir = c.out.value_or("");
  vo.only = only;
  vo.verbose = true;
  bool ok = true;
  for (const auto& r : nrange::run_verify(vo)) {
    std::cout << nrange::format_result(r) << "\n";
    ok = ok && r.pass;
  }
  return ok ? nrange::kOk : nrange::kPostcondition;
}
