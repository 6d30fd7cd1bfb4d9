#pragma once

#include <vector>

#include "graphrec/types.hpp"

namespace graphrec {

enum class SignRule { Free, NonNeg, NonPos };

/// Per-entry sign constraint on the real and imaginary parts. The imaginary
/// rule is ignored for real scalars.
struct SignCone {
  SignRule re = SignRule::Free;
  SignRule im = SignRule::Free;

  bool is_free() const { return re == SignRule::Free && im == SignRule::Free; }

  /// Re <= 0, Im >= 0 (off-diagonal admittance entries).
  static SignCone off_diagonal_admittance() { return {SignRule::NonPos, SignRule::NonNeg}; }
  /// Re >= 0 (diagonal admittance entries).
  static SignCone diagonal_admittance() { return {SignRule::NonNeg, SignRule::Free}; }
};

struct SolverOptions {
  double gamma = 0.0;       // residual radius: ||B x - a||_2 <= gamma
  int max_iters = 20000;
  double tol = 1e-9;        // relative primal/dual residual tolerance
  double certificate_tol = 1e-6;
  double rho = 0.0;         // ADMM penalty, 0 = scaled from the data
  double relaxation = 1.6;  // over-relaxation in (0, 2)
  int polish_every = 20;
  std::vector<SignCone> cones;  // empty = unconstrained, else one per entry

  void validate(Index n) const;
};

enum class SolveStatus { Optimal, MaxIters, Infeasible };

std::string to_string(SolveStatus s);

template <typename Scalar>
struct SolveReport {
  Vec<Scalar> x;
  double residual = 0.0;   // ||B x - a||_2
  double objective = 0.0;  // sum_j |x_j|
  int iterations = 0;
  SolveStatus status = SolveStatus::MaxIters;
  bool polished = false;   // x came from the support-restricted refinement
};

/// l1 minimization
///
///     minimize  sum_j |x_j|   subject to  ||B x - a||_2 <= gamma,  x_j in cone_j
///
/// for Scalar = double or std::complex<double> (|.| is the modulus, so real
/// and imaginary parts share a support).
///
/// ADMM on the split x = z: the x-step is the exact Euclidean projection onto
/// {x : ||B x - a|| <= gamma} computed from a thin SVD of B cached at
/// construction (an affine projection when gamma = 0), the z-step is the
/// prox of |.| plus the sign cone (cone projection followed by magnitude
/// shrinkage, which keeps the phase). Iterates are periodically refined on
/// their support and a point is reported Optimal only when a dual
/// certificate for it has been found.
///
/// One L1Solver may serve many right-hand sides concurrently.
template <typename Scalar>
class L1Solver {
 public:
  explicit L1Solver(Mat<Scalar> B);

  SolveReport<Scalar> solve(const Vec<Scalar>& a, const SolverOptions& opts) const;

  const Mat<Scalar>& matrix() const { return B_; }
  Index rank() const { return sigma_.size(); }

 private:
  Mat<Scalar> B_;
  Mat<Scalar> U_;
  Eigen::VectorXd sigma_;
  Mat<Scalar> V_;
};

template <typename Scalar>
SolveReport<Scalar> solve_l1(const Mat<Scalar>& B, const Vec<Scalar>& a, const SolverOptions& opts);

/// Checks optimality of a feasible x through a dual vector nu built by least
/// squares on the support: B^H nu must lie in the subdifferential of
/// sum_j |x_j| + cone indicators, up to certificate_tol. For gamma > 0 the
/// dual is aligned with the residual, nu = lambda (a - B x), lambda >= 0.
template <typename Scalar>
bool certify_l1(const Mat<Scalar>& B, const Vec<Scalar>& a, const Vec<Scalar>& x,
                const SolverOptions& opts);

template <typename Scalar>
struct SquareSolution {
  Vec<Scalar> x;
  double condition = 0.0;  // 1-norm condition estimate
};

/// Solves a k x k system by partial-pivot LU. Throws SingularError when the
/// condition estimate exceeds 1e12.
template <typename Scalar>
SquareSolution<Scalar> solve_square(const Mat<Scalar>& Bsq, const Vec<Scalar>& rhs);

inline constexpr double kSingularCondition = 1e12;

}  // namespace graphrec
