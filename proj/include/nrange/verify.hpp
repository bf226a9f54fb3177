#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nrange {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  /// One-line summary: worst observed error against its tolerance.
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  /// Per-criterion CSVs go here (nothing written when empty).
  std::string out_dir;
  /// Criteria to run (1..10); empty means all.
  std::vector<int> only;
  /// Progress lines on stderr.
  bool verbose = false;
};

/// Runs the acceptance criteria. Criterion 10 reruns 1..9 into
/// `<out_dir>/rerun` and compares the CSV bytes.
std::vector<CriterionResult> run_verify(const VerifyOptions& opt);

/// "PASS C3 example34 gap law: ..." per result.
std::string format_result(const CriterionResult& r);

}  // namespace nrange
