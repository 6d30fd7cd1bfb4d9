#pragma once

#include "graphrec/graph.hpp"
#include "graphrec/rng.hpp"
#include "graphrec/types.hpp"

namespace graphrec {

/// Generator matrix B and measurements A = B Y + Z, both m x n. Rows are
/// measurement vectors (time samples); column j of A observes column j of Y.
struct MeasurementSet {
  CMatrix B;
  CMatrix A;
  Field field = Field::Real;
  double sigma_S = 1.0;
  double sigma_N = 0.0;

  Index m() const { return B.rows(); }
  Index n() const { return B.cols(); }

  /// Shape and field checks. `allow_tall` admits m > n (ingested data).
  void validate(bool allow_tall = false) const;
};

/// Nominal operating point: every row of B is b_bar^T and every row of A is
/// a_bar^T = b_bar^T Y.
struct NominalModel {
  CVector a_bar;
  CVector b_bar;

  static NominalModel from_graph_matrix(const GraphMatrix& y, const CVector& b_bar);
};

/// IID Gaussian generator. Real: N(0, sigma_S^2). Complex: real parts
/// N(mean_re, sigma_S^2), imaginary parts N(0, sigma_S^2).
CMatrix sample_generator(Index m, Index n, Field field, double sigma_S, Rng& rng,
                         double mean_re = 0.0);

/// A = B Y + Z with Z IID N(0, sigma_N^2) per entry (independent real and
/// imaginary parts in complex mode).
MeasurementSet synthesize(const CMatrix& B, const GraphMatrix& y, double sigma_N, Rng& rng,
                          double sigma_S = 1.0);

enum class NoisePlacement {
  OnA,  // currents observed with additive noise Z
  OnB,  // voltages perturbed before currents are computed; A = B Y exactly
};

/// Power-flow style data: row t of B is V_t = V_nominal + N(0, fluct^2),
/// row t of A is I_t = Y V_t plus noise placed according to `placement`.
MeasurementSet power_flow_like(const GraphMatrix& y, const CVector& v_nominal, double fluct_sigma,
                               Index m, double sigma_N, NoisePlacement placement, Rng& rng);

/// (A - A_bar, B - B_bar) with the nominal rows broadcast over all samples.
MeasurementSet extract_perturbation(const MeasurementSet& ms, const NominalModel& nominal);

}  // namespace graphrec
