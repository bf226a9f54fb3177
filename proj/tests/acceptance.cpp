// One line per acceptance criterion; exit status 1 if any is red.
#include <CLI11.hpp>

#include <iostream>

#include "nrange/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  nrange::VerifyOptions opt;
  app.add_option("--out", opt.out_dir, "directory for per-criterion CSVs");
  app.add_option("--seed", opt.seed, "suite seed");
  app.add_option("--only", opt.only, "criteria to run");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  for (const auto& r : nrange::run_verify(opt)) {
    std::cout << nrange::format_result(r) << std::endl;
    failed += r.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
