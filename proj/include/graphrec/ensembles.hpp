#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "graphrec/graph.hpp"
#include "graphrec/rng.hpp"

namespace graphrec {

/// (mu, K, rho): with probability at least 1 - rho, at most K nodes have
/// degree larger than mu.
struct SparsityProfile {
  int mu = 0;
  int K = 0;
  double rho = 1.0;
  // Set when the profile is vacuous for the given n (e.g. mu >= n).
  bool degenerate = false;
};

enum class EnsembleKind { UniformTree, ErdosRenyi, Star, Chain, Fixed };

std::string to_string(EnsembleKind k);
EnsembleKind ensemble_kind_from_string(const std::string& s);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::UniformTree;
  int n = 2;
  double p = 0.0;              // ErdosRenyi edge probability
  std::optional<Graph> fixed;  // Fixed
  std::uint64_t seed = 0;

  void validate() const;
};

/// Lowest-numbered-leaf Pruefer decoding. `seq` holds n-2 labels in [0, n).
Graph prufer_decode(std::span<const int> seq, int n);

Graph sample(const EnsembleSpec& spec, Rng& rng);

/// True iff at most K nodes have degree > mu.
bool in_sparsity_class(const Graph& g, int mu, int K);

struct RhoEstimate {
  double rho = 0.0;         // empirical P(G not in C(n, mu, K))
  double half_width = 0.0;  // 95% normal-approximation half-width
  int failures = 0;
  int trials = 0;
};

RhoEstimate estimate_rho(const EnsembleSpec& spec, int mu, int K, int trials, Rng& rng);

/// 95% normal-approximation half-width of a binomial proportion.
double binomial_half_width(double p_hat, int trials);

void to_json(nlohmann::json& j, const EnsembleSpec& spec);
/// Fixed ensembles load the graph CSV named by the "graph" key.
EnsembleSpec ensemble_from_json(const nlohmann::json& j);

}  // namespace graphrec
