#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrange/duality.hpp"
#include "nrange/norm.hpp"

namespace nrange {

/// X = (R^k, ||J . ||_Y) sitting isometrically inside Y through J (n x k).
struct SubspacePair {
  Norm Y;
  Mat J;
  Norm X;

  /// Throws std::invalid_argument unless Y is a norm on R^n and J is n x k
  /// of rank k.
  static SubspacePair make(Norm Y, Mat J);
  static SubspacePair identity(const Norm& Y);
  [[nodiscard]] int n() const { return Y.dim(); }
  [[nodiscard]] int k() const { return static_cast<int>(J.cols()); }
};

struct AttainingPair {
  Vec x;
  Vec ystar;
};

struct OperatorSpec {
  Mat T;
  std::string label;
};

/// Throws std::invalid_argument when T is not n x k for the pair.
void validate_operator(const SubspacePair& pair, const OperatorSpec& op);

struct AttainingCheck {
  double x_norm_error = 0.0;
  double ystar_norm_error = 0.0;
  double pairing_error = 0.0;
  [[nodiscard]] bool ok(double tol = 1e-8) const {
    return x_norm_error <= tol && ystar_norm_error <= tol && pairing_error <= tol;
  }
};

AttainingCheck check_attaining(const SubspacePair& pair, const AttainingPair& p);

/// Seeded points of S_X paired with states of D(Y, Jx) (support functional
/// and up to `per_point - 1` further face points).
std::vector<AttainingPair> sample_attaining(const SubspacePair& pair, int points, std::uint64_t seed,
                                            int per_point = 3);

/// ||f - g|| in Y*, as an upper bound (exact for closed-form duals).
double dual_distance(const Norm& Y, const Vec& f, const Vec& g);

struct NearestState {
  Vec state;
  double distance = 0.0;
};

/// Approximate argmin of ||f - y0||* over f in D(Y,u) by line searches from
/// the current iterate toward each face generator.
NearestState nearest_state(const Norm& Y, const Vec& u, const Vec& y0, const StateOptions& opt = {});
/// Same search over the convex hull of an explicit generating set.
NearestState nearest_in_hull(const Norm& Y, std::vector<Vec> gens, const Vec& y0);

struct RepairOptions {
  int budget = 400;
  std::uint64_t seed = 1;
  /// Stops searching once a witness this close is found (0: never).
  double stop_below = 0.0;
};

struct RepairResult {
  /// max(||x - x0||_X, ||y* - y0||_{Y*}) for the witness; an upper bound on
  /// the distance from (x0, y0) to the attaining set.
  double distance = 0.0;
  double x_distance = 0.0;
  double y_distance = 0.0;
  AttainingPair witness;
  int evaluations = 0;
  bool upper_bound_only = true;
};

RepairResult repair_distance(const SubspacePair& pair, const Vec& x0, const Vec& y0, const RepairOptions& opt = {});

class RepairFailure : public std::runtime_error {
 public:
  RepairFailure(const std::string& what, RepairResult best) : std::runtime_error(what), best_(std::move(best)) {}
  [[nodiscard]] const RepairResult& best() const { return best_; }

 private:
  RepairResult best_;
};

/// (y, y*) in Pi(Y) with ||y - y0|| < eps, ||y* - y0*|| < eps, given
/// 1 - y0*(y0) < eps^2/4. Throws std::invalid_argument when the hypothesis
/// fails and RepairFailure when the search does not reach the bound.
AttainingPair bpb_repair_classical(const Norm& Y, const Vec& y0, const Vec& y0star, double eps, std::uint64_t seed,
                                   int budget = 400);

struct StateRestrictionReport {
  int checked = 0;
  double worst_pairing_violation = 0.0;
  /// Largest witnessed excess of ||J^T f||_{X*} over 1.
  double worst_norm_excess = 0.0;
  bool pass = false;
};

/// Restrictions J^T f of states f in D(Y, Ju) are states of X at u.
StateRestrictionReport check_state_restriction(const SubspacePair& pair, const Vec& u, int trials,
                                               std::uint64_t seed = 7);

}  // namespace nrange
