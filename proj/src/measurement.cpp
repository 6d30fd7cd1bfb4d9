#include "graphrec/measurement.hpp"

#include <string>

namespace graphrec {

namespace {

bool is_real(const CMatrix& m) { return m.imag().isZero(0.0); }

CMatrix gaussian_noise(Index rows, Index cols, Field field, double sigma, Rng& rng) {
  CMatrix z = CMatrix::Zero(rows, cols);
  if (sigma == 0.0) return z;
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      double re = rng.normal(0.0, sigma);
      double im = field == Field::Complex ? rng.normal(0.0, sigma) : 0.0;
      z(i, j) = cplx(re, im);
    }
  }
  return z;
}

}  // namespace

void MeasurementSet::validate(bool allow_tall) const {
  if (B.rows() != A.rows() || B.cols() != A.cols()) {
    throw ShapeError("measurement set: B is " + std::to_string(B.rows()) + "x" +
                     std::to_string(B.cols()) + " but A is " + std::to_string(A.rows()) + "x" +
                     std::to_string(A.cols()));
  }
  if (B.rows() < 1) throw ShapeError("measurement set: need at least one measurement");
  if (!allow_tall && B.rows() > B.cols()) {
    throw ShapeError("measurement set: m must not exceed n");
  }
  if (field == Field::Real && (!is_real(B) || !is_real(A))) {
    throw ConfigError("measurement set: real field but complex entries present");
  }
}

NominalModel NominalModel::from_graph_matrix(const GraphMatrix& y, const CVector& b_bar) {
  if (b_bar.size() != y.n()) throw ShapeError("nominal vector length must equal n");
  return {y.values().transpose() * b_bar, b_bar};
}

CMatrix sample_generator(Index m, Index n, Field field, double sigma_S, Rng& rng, double mean_re) {
  require_config(m >= 1 && n >= 1, "sample_generator: m and n must be positive");
  require_config(sigma_S > 0.0, "sample_generator: sigma_S must be positive");
  CMatrix b(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) {
      double re = rng.normal(field == Field::Complex ? mean_re : 0.0, sigma_S);
      double im = field == Field::Complex ? rng.normal(0.0, sigma_S) : 0.0;
      b(i, j) = cplx(re, im);
    }
  }
  return b;
}

MeasurementSet synthesize(const CMatrix& B, const GraphMatrix& y, double sigma_N, Rng& rng,
                          double sigma_S) {
  if (B.cols() != y.n()) throw ShapeError("synthesize: B must have n columns");
  require_config(sigma_N >= 0.0, "synthesize: sigma_N must be non-negative");
  MeasurementSet ms;
  ms.field = y.field() == Field::Complex || !is_real(B) ? Field::Complex : Field::Real;
  ms.B = B;
  ms.A = B * y.values() + gaussian_noise(B.rows(), B.cols(), ms.field, sigma_N, rng);
  ms.sigma_S = sigma_S;
  ms.sigma_N = sigma_N;
  ms.validate();
  return ms;
}

MeasurementSet power_flow_like(const GraphMatrix& y, const CVector& v_nominal, double fluct_sigma,
                               Index m, double sigma_N, NoisePlacement placement, Rng& rng) {
  const Index n = y.n();
  if (v_nominal.size() != n) throw ShapeError("power_flow_like: nominal voltage must have length n");
  require_config(m >= 1, "power_flow_like: m must be positive");
  require_config(fluct_sigma >= 0.0 && sigma_N >= 0.0, "power_flow_like: sigmas must be non-negative");
  const Field field =
      y.field() == Field::Complex || !v_nominal.imag().isZero(0.0) ? Field::Complex : Field::Real;

  CMatrix v = v_nominal.transpose().replicate(m, 1) + gaussian_noise(m, n, field, fluct_sigma, rng);
  MeasurementSet ms;
  ms.field = field;
  ms.sigma_S = fluct_sigma;
  ms.sigma_N = sigma_N;
  if (placement == NoisePlacement::OnB) {
    ms.B = v + gaussian_noise(m, n, field, sigma_N, rng);
    ms.A = ms.B * y.values();
  } else {
    ms.B = v;
    ms.A = v * y.values() + gaussian_noise(m, n, field, sigma_N, rng);
  }
  ms.validate();
  return ms;
}

MeasurementSet extract_perturbation(const MeasurementSet& ms, const NominalModel& nominal) {
  if (nominal.a_bar.size() != ms.n() || nominal.b_bar.size() != ms.n()) {
    throw ShapeError("extract_perturbation: nominal rows must have length n");
  }
  MeasurementSet out = ms;
  out.A = ms.A - nominal.a_bar.transpose().replicate(ms.m(), 1);
  out.B = ms.B - nominal.b_bar.transpose().replicate(ms.m(), 1);
  return out;
}

}  // namespace graphrec
