#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nrange/families.hpp"
#include "nrange/norm.hpp"
#include "nrange/pairs.hpp"

namespace nrange {

/// Parse or validation failure with a 1-based source location.
class SpecError : public std::runtime_error {
 public:
  SpecError(int line, int column, const std::string& message);
  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct TaskRecord {
  std::string name;
  std::string kind;
  /// Parameters other than `kind`, in file order.
  std::vector<std::pair<std::string, std::string>> params;
  int line = 0;

  [[nodiscard]] bool has(const std::string& key) const;
  /// Throws std::out_of_range when absent.
  [[nodiscard]] const std::string& get(const std::string& key) const;
  [[nodiscard]] std::string get_or(const std::string& key, const std::string& fallback) const;
};

struct PairDef {
  std::string name;
  std::string space;
  std::string embedding;
  SubspacePair pair;
  bool from_family = false;
};

struct OperatorDef {
  std::string name;
  std::string pair;
  std::string matrix;
  OperatorSpec op;
  bool from_family = false;
};

struct FamilyDef {
  std::string name;
  FamilyId id;
  int m;
};

struct SpecFile {
  std::vector<std::pair<std::string, Norm>> spaces;
  std::vector<std::pair<std::string, Mat>> matrices;
  std::vector<FamilyDef> families;
  std::vector<PairDef> pairs;
  std::vector<OperatorDef> operators;
  std::vector<TaskRecord> tasks;

  [[nodiscard]] const Norm* find_space(const std::string& name) const;
  [[nodiscard]] const Mat* find_matrix(const std::string& name) const;
  [[nodiscard]] const PairDef* find_pair(const std::string& name) const;
  [[nodiscard]] const OperatorDef* find_operator(const std::string& name) const;
  [[nodiscard]] const FamilyDef* find_family(const std::string& name) const;
  [[nodiscard]] const TaskRecord* find_task(const std::string& name) const;
};

/// Line-oriented format:
///
///   # comment
///   [space Y]      expr = abssum(linf, lp(2,4), lp(1,2))
///   [matrix J]     rows = 3 / cols = 2 / data = 1 0; 0 1; 0 0
///                  (or identity = n, diag = d1 d2 ..., zeros = r c, vstack = A, B)
///   [pair P]       space = Y / embedding = J
///   [operator T]   pair = P / matrix = M
///   [family F]     id = example34 / m = 16   (defines pair F and operator F)
///   [task t]       kind = range / operator = T / seed = 1 / out = range.csv ...
///
/// Names resolve to earlier sections only. Unknown keys, duplicate keys,
/// unresolved names and dimension mismatches are errors with a location.
SpecFile parse_spec(const std::string& text);
SpecFile load_spec_file(const std::string& path);
/// Text that parses back to an equivalent SpecFile.
std::string emit_spec(const SpecFile& spec);

/// Norm expression grammar:
///   lp(p, n) | l1(n) | l2(n) | linf(n) | abssum(gauge, e, e)
///   | pullback(M, e) | max(e, ...) | sum(e, ...) | full(e) | semi(e) | NAME
/// where M is matrix(r, c, v11, v12, ...) or a matrix name. Locations in
/// errors are relative to the start of `text` at (line, column).
Norm parse_norm_expr(const std::string& text, const SpecFile* context = nullptr, int line = 1, int column = 1);

/// Whitespace / comma / semicolon separated reals ("inf" allowed).
std::vector<double> parse_number_list(const std::string& text);

/// Task kinds and the keys each accepts.
const std::vector<std::string>& task_kinds();

}  // namespace nrange
