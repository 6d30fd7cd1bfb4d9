#include "graphrec/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "graphrec/diagnostics.hpp"

namespace graphrec {

namespace {

double clamp01(double v) {
  if (std::isnan(v)) return 1.0;
  return std::min(1.0, std::max(0.0, v));
}

// Floor shape shared by both Fano bounds: 1 - n m I / (2 H), with I the
// per-entry information in nats.
double fano(const BoundInputs& in, double info) {
  require_config(in.n >= 1 && in.m >= 1, "bounds: n and m must be positive");
  require_config(in.entropy_nats >= 0.0, "bounds: entropy must be non-negative");
  if (in.entropy_nats == 0.0) return 0.0;
  if (std::isinf(in.entropy_nats)) return 1.0;
  return clamp01(1.0 - static_cast<double>(in.n) * in.m * info / (2.0 * in.entropy_nats));
}

double info_noiseless(const BoundInputs& in) {
  return std::log(2.0 * std::numbers::pi * std::numbers::e * in.Y_bar * in.sigma_S * in.sigma_S);
}

double info_noisy(const BoundInputs& in) {
  if (in.sigma_N == 0.0) return std::numeric_limits<double>::infinity();
  return std::log1p(in.sigma_S * in.sigma_S / (in.sigma_N * in.sigma_N) * in.Y_bar);
}

}  // namespace

double binary_entropy(double p) {
  require_config(p >= 0.0 && p <= 1.0, "binary entropy: p must lie in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double entropy_uniform_trees(int n) {
  require_config(n >= 2, "entropy of uniform trees needs n >= 2");
  return (n - 2) * std::log(static_cast<double>(n));
}

double entropy_er(int n, double p) {
  require_config(n >= 1, "entropy_er needs n >= 1");
  return binary_entropy(p) * n * (n - 1) / 2.0;
}

double fano_floor_noiseless(const BoundInputs& in) {
  require_config(in.Y_bar >= 0.0 && in.sigma_S > 0.0, "bounds: need Y_bar >= 0 and sigma_S > 0");
  if (in.Y_bar == 0.0) return in.entropy_nats > 0.0 ? 1.0 : 0.0;
  return fano(in, info_noiseless(in));
}

double fano_floor_noisy(const BoundInputs& in) {
  require_config(in.Y_bar >= 0.0 && in.sigma_S > 0.0 && in.sigma_N >= 0.0,
                 "bounds: need Y_bar >= 0, sigma_S > 0, sigma_N >= 0");
  return fano(in, info_noisy(in));
}

std::optional<int> min_measurements(BoundInputs in, double epsilon_target, bool noisy) {
  require_config(epsilon_target > 0.0 && epsilon_target < 1.0, "target error must lie in (0, 1)");
  auto floor_at = [&](int m) {
    in.m = m;
    return noisy ? fano_floor_noisy(in) : fano_floor_noiseless(in);
  };
  if (floor_at(1) <= epsilon_target) return 1;
  const double info = noisy ? info_noisy(in) : info_noiseless(in);
  if (!(info > 0.0)) return std::nullopt;
  // Closed-form guess, then settle rounding by evaluating the floor itself.
  double guess = 2.0 * in.entropy_nats * (1.0 - epsilon_target) / (in.n * info);
  if (guess > 1e9) return std::nullopt;
  int m = std::max(1, static_cast<int>(std::ceil(guess)));
  while (m > 1 && floor_at(m - 1) <= epsilon_target) --m;
  while (floor_at(m) > epsilon_target) ++m;
  return m;
}

SufficientM sufficient_m_noiseless(int mu, int K, int n) {
  require_config(mu >= 1 && K >= 0 && n >= 1, "sufficient_m: need mu >= 1, K >= 0, n >= 1");
  const double ratio = static_cast<double>(n) / mu;
  SufficientM out;
  out.m = static_cast<long long>(std::ceil(48.0 * mu * (3.0 + 2.0 * std::log2(ratio)))) + 2LL * K;
  out.valid = mu >= 4 && ratio > 2.0;
  return out;
}

SparsityProfile tree_sparsity_profile(int mu, int K) {
  require_config(mu >= 1 && K >= 1, "tree profile: need mu >= 1 and K >= 1");
  return {mu, K, 1.0 / K, false};
}

SparsityProfile er_sparsity_profile(int n, double p, int K) {
  require_config(n >= 2 && p > 0.0 && p < 1.0 && K >= 1,
                 "ER profile: need n >= 2, 0 < p < 1, K >= 1");
  const double h = binary_entropy(p);
  SparsityProfile out;
  out.K = K;
  out.mu = static_cast<int>(std::ceil(2.0 * n * h / std::log(1.0 / p)));
  out.rho = std::min(1.0, n * std::exp(-n * h) / K);
  out.degenerate = out.mu >= n - 1;
  return out;
}

EtaBound eta_bound(const CMatrix& B, int K, double gamma, double Gamma) {
  const int n = static_cast<int>(B.cols());
  require_config(gamma >= 0.0 && Gamma >= 0.0, "eta bound: gamma and Gamma must be >= 0");
  require_config(K >= 0 && 2 * K <= n, "eta bound: need 0 <= 2K <= n");
  EtaBound out;
  out.norm_B = Eigen::JacobiSVD<CMatrix>(B).singularValues()(0);
  if (K > 0) {
    out.delta_2K = ric(B, 2 * K);
    out.xi = xi(B, K).value;
  }
  if (out.delta_2K >= 1.0)
    throw DegenerateRicError("eta bound: delta_2K = " + std::to_string(out.delta_2K) + " >= 1");
  if (gamma == 0.0 && Gamma == 0.0) return out;
  const double first = n * Gamma + (Gamma * out.norm_B + gamma) / (1.0 - out.delta_2K);
  out.eta = 2.0 * first * (2.0 * (n - K) + K * out.xi);
  return out;
}

double default_gamma(int n, double sigma_N) { return std::sqrt(static_cast<double>(n)) * sigma_N; }

}  // namespace graphrec
