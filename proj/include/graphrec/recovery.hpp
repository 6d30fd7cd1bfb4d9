#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "graphrec/measurement.hpp"
#include "graphrec/solver.hpp"

namespace graphrec {

enum class Scheme { ThreeStage, Heuristic, ColumnBP, VectorizedBP, VectorizedBPSym };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

inline constexpr long long kDefaultMaxSubsets = 5'000'000;

struct RecoveryConfig {
  Scheme scheme = Scheme::Heuristic;
  double gamma = 0.0;
  int K = 1;  // three-stage: number of columns allowed to be inconsistent
  int s = 0;  // heuristic: columns fixed per iteration, 0 = ceil(n / 2)
  std::optional<int> mu_hint;
  SolverOptions solver;  // solver.gamma is replaced by `gamma`
  std::uint64_t seed = 0;
  // Re <= 0, Im >= 0 off the diagonal and Re >= 0 on it.
  bool admittance_cones = false;
  // Extra slack in the pairwise symmetry test, relative to max |X_ij|.
  double consistency_tol = 1e-6;
  long long max_subsets = kDefaultMaxSubsets;
  int row_retries = 5;
  int jobs = 1;

  void validate(Index n) const;
  int effective_s(Index n) const;
};

enum class RecoveryStatus { Success, ConsistencyFailed, SolverFailed };
std::string to_string(RecoveryStatus s);

struct RecoveryResult {
  CMatrix X;
  RecoveryStatus status = RecoveryStatus::Success;
  Scheme scheme = Scheme::Heuristic;
  std::vector<int> accepted;  // three-stage: the consistent set S, sorted
  // heuristic: per iteration, (column, score) for every remaining column
  std::vector<std::vector<std::pair<int, double>>> scores;
  // heuristic: per iteration, the columns fixed, in rank order
  std::vector<std::vector<int>> fixed;
  double elapsed_ms = 0.0;
  long long solver_iterations = 0;
  int solves = 0;
  int unconverged = 0;  // solves that stopped at the iteration limit
  std::string message;
};

struct ColumnEstimate {
  CVector x;
  SolveStatus status = SolveStatus::Optimal;
  int iterations = 0;
};

/// Per-column l1 recovery with the full measurement matrix. Failed columns
/// are reported in their status and do not stop the batch.
std::vector<ColumnEstimate> retrieve_columns(const MeasurementSet& ms, const RecoveryConfig& cfg);

/// First subset S of size n - K, in lexicographic order, whose pairs satisfy
/// |X_ij - X_ji| <= 2 gamma (+ tol * max(1, max |X|)).
std::optional<std::vector<int>> consistency_check(const CMatrix& X, int K, double gamma,
                                                  double tol = 1e-6,
                                                  long long max_subsets = kDefaultMaxSubsets);

/// Completes the columns outside S: entries in rows S are copied by symmetry
/// and the remaining K entries solve a K x K subsystem of B_Sbar. Throws
/// SingularError when no well-conditioned row selection is found.
CMatrix resolve_unknowns(const MeasurementSet& ms, const CMatrix& X, const std::vector<int>& S,
                         const RecoveryConfig& cfg);

RecoveryResult three_stage(const MeasurementSet& ms, const RecoveryConfig& cfg);
RecoveryResult heuristic(const MeasurementSet& ms, const RecoveryConfig& cfg);
RecoveryResult column_bp(const MeasurementSet& ms, const RecoveryConfig& cfg);
/// symmetric = false is column_bp. symmetric = true solves one l1 problem
/// over the upper triangle.
RecoveryResult vectorized_bp(const MeasurementSet& ms, bool symmetric, const RecoveryConfig& cfg);

/// Dispatches on cfg.scheme.
RecoveryResult recover(const MeasurementSet& ms, const RecoveryConfig& cfg);

}  // namespace graphrec
