#pragma once

#include <optional>

#include "graphrec/ensembles.hpp"
#include "graphrec/types.hpp"

namespace graphrec {

// Entropies and Fano floors use natural logarithms; the achievability count
// in sufficient_m_noiseless uses log base 2.

struct BoundInputs {
  int n = 0;
  int m = 1;
  double sigma_S = 1.0;
  double sigma_N = 0.0;
  double Y_bar = 1.0;  // max |Y_ij|
  double entropy_nats = 0.0;
  int mu = 0;
  int K = 0;
};

/// h(p) = -p ln p - (1 - p) ln(1 - p).
double binary_entropy(double p);

/// ln of the number of labeled trees, (n - 2) ln n.
double entropy_uniform_trees(int n);
double entropy_er(int n, double p);

/// max(0, 1 - n m ln(2 pi e Y_bar sigma_S^2) / (2 H)), clamped to [0, 1].
double fano_floor_noiseless(const BoundInputs& in);
/// max(0, 1 - n m ln(1 + Y_bar sigma_S^2 / sigma_N^2) / (2 H)), clamped to [0, 1].
double fano_floor_noisy(const BoundInputs& in);

/// Smallest m >= 1 whose Fano floor is at most `epsilon_target`; empty when
/// the per-sample information is not positive so no m suffices.
std::optional<int> min_measurements(BoundInputs in, double epsilon_target, bool noisy);

struct SufficientM {
  long long m = 0;
  bool valid = true;  // false for mu < 4 or n / mu <= 2, where the constant is not established
};

/// ceil(48 mu (3 + 2 log2(n / mu))) + 2K.
SufficientM sufficient_m_noiseless(int mu, int K, int n);

SparsityProfile tree_sparsity_profile(int mu, int K);
/// mu_min = ceil(2 n h(p) / ln(1/p)), rho = min(1, n exp(-n h(p)) / K).
SparsityProfile er_sparsity_profile(int n, double p, int K);

/// Raised by eta_bound when delta_2K >= 1.
class DegenerateRicError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct EtaBound {
  double eta = 0.0;
  double delta_2K = 0.0;
  double xi = 0.0;
  double norm_B = 0.0;
};

/// 2 (n Gamma + (Gamma ||B||_2 + gamma) / (1 - delta_2K)) (2 (n - K) + K xi(B))
/// with delta_2K and xi computed by enumeration.
EtaBound eta_bound(const CMatrix& B, int K, double gamma, double Gamma);

/// Noise radius used for noisy data: sqrt(n) sigma_N.
double default_gamma(int n, double sigma_N);

}  // namespace graphrec
