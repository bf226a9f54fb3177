#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nrange/pairs.hpp"

namespace nrange {

enum class FamilyId { Thm21, RemarkCase1, RemarkCase2, Example32, Prop33, Example34 };

const char* to_string(FamilyId id);
/// "thm21", "remark_case1", ... Throws std::invalid_argument otherwise.
FamilyId parse_family(const std::string& text);
std::vector<FamilyId> all_families();

/// Base data for the renorming family: a norm V on R^m and a functional of
/// dual norm at most 1.
struct Prop33Data {
  Norm V;
  Vec v0;
};

/// l_inf^m with weights 2^-k (dual norm 1 - 2^-m).
Prop33Data default_prop33_data(int m);

struct FamilyInstance {
  FamilyId id = FamilyId::Example34;
  int m = 0;
  SubspacePair pair;
  OperatorSpec T;
  /// The subspace's own norm before embedding (l_2^m, l_inf^m or V).
  Norm X_base;
  /// Closed-form quotient law in alpha; empty for oracle-only families.
  std::function<double(double)> reference;
  /// ||J + a T|| evaluated from the structure of the matrices.
  std::function<double(double)> exact_opnorm;
};

/// Throws std::invalid_argument for m < 2 or an invalid prop33 functional.
FamilyInstance make_family(FamilyId id, int m, const std::optional<Prop33Data>& prop33 = std::nullopt);

/// max |‖Jx‖_Y - ‖x‖_base| over seeded samples.
double isometry_defect(const FamilyInstance& f, int samples, std::uint64_t seed);

enum class SweepMode { StructuredExact, Optimizer };
const char* to_string(SweepMode m);

struct GapRow {
  int m = 0;
  double alpha = 0.0;
  double quotient = 0.0;
  /// NaN for oracle-only families.
  double reference = 0.0;
  double sup_re_W = 0.0;
};

struct GapProfile {
  FamilyId id = FamilyId::Example34;
  SweepMode mode = SweepMode::StructuredExact;
  std::vector<GapRow> rows;
};

struct SweepOptions {
  SweepMode mode = SweepMode::StructuredExact;
  int budget = 600;
  std::uint64_t seed = 1;
  /// Skip the W-side search (reported as NaN).
  bool with_sup_w = true;
};

GapProfile sweep(FamilyId id, const std::vector<int>& m_list, const std::vector<double>& alpha_list,
                 const SweepOptions& opt = {});

}  // namespace nrange
