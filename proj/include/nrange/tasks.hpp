#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nrange/spec_file.hpp"

namespace nrange {

/// Command-line values that take precedence over the task's own keys.
struct TaskOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> budget;
  std::optional<int> starts;
  /// Relative output paths resolve against this directory (default ".").
  std::optional<std::string> out_dir;
};

enum ExitCode : int { kOk = 0, kUsage = 1, kPostcondition = 2 };

struct TaskOutcome {
  int exit_code = kOk;
  std::vector<std::string> artifacts;
  std::string message;
};

/// Runs one task and writes its CSV (and SVG when `svg` is set). CSV
/// columns per kind:
///   eval        norm, dual_lower, dual_upper, dual_exact, pairing
///   tau         tau_lower, tau_upper, width, state_kind, quotients, monotone_violation
///   range       direction, supReW, maxReV_lower, maxReV_upper, gap
///   gap-sweep   family, m, alpha, quotient, reference, supW, abs_err
///   bpb-repair  eps, method, deficiency, threshold, x_distance, y_distance, pairing_error, success
///   bpb-modulus eps, delta_upper, repair_distance, certification
///   ssd         eps, zeta_upper, distance, certification
///   convexity   eps, delta
///   smoothness  t, worst_defect
///   absnorm     quantity, parameter, b0, value
///   verify      criterion, name, pass, detail
TaskOutcome run_task(const SpecFile& spec, const std::string& task_name, const TaskOverrides& overrides = {});

/// All tasks in file order; `jobs` > 1 runs them concurrently. Each task
/// writes only its own files. Returns the largest exit code.
int run_all_tasks(const SpecFile& spec, const TaskOverrides& overrides, int jobs, std::vector<TaskOutcome>* outcomes);

}  // namespace nrange
