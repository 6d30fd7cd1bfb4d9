#include "graphrec/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "graphrec/io.hpp"

namespace graphrec {

std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::UniformTree: return "tree";
    case EnsembleKind::ErdosRenyi: return "er";
    case EnsembleKind::Star: return "star";
    case EnsembleKind::Chain: return "chain";
    case EnsembleKind::Fixed: return "fixed";
  }
  return "?";
}

EnsembleKind ensemble_kind_from_string(const std::string& s) {
  if (s == "tree" || s == "uniform-tree") return EnsembleKind::UniformTree;
  if (s == "er" || s == "erdos-renyi") return EnsembleKind::ErdosRenyi;
  if (s == "star") return EnsembleKind::Star;
  if (s == "chain") return EnsembleKind::Chain;
  if (s == "fixed") return EnsembleKind::Fixed;
  throw ConfigError("unknown ensemble '" + s + "' (expected tree, er, star, chain or fixed)");
}

void EnsembleSpec::validate() const {
  require_config(n >= 2, "ensemble: n must be at least 2");
  if (kind == EnsembleKind::ErdosRenyi) {
    require_config(p > 0.0 && p <= 1.0, "ensemble: Erdos-Renyi needs 0 < p <= 1");
  }
  if (kind == EnsembleKind::Fixed) {
    require_config(fixed.has_value(), "ensemble: fixed ensemble needs a graph");
    require_config(fixed->n() == n, "ensemble: fixed graph size does not match n");
  }
}

Graph prufer_decode(std::span<const int> seq, int n) {
  require_config(n >= 2, "prufer_decode: n must be at least 2");
  require_config(static_cast<int>(seq.size()) == n - 2, "prufer_decode: sequence must have length n-2");
  std::vector<int> degree(static_cast<std::size_t>(n), 1);
  for (int v : seq) {
    require_config(v >= 0 && v < n, "prufer_decode: label out of range");
    ++degree[v];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
  for (int v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.push(v);

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n - 1));
  for (int v : seq) {
    int leaf = leaves.top();
    leaves.pop();
    edges.push_back({leaf, v});
    if (--degree[v] == 1) leaves.push(v);
  }
  int a = leaves.top();
  leaves.pop();
  int b = leaves.top();
  edges.push_back({a, b});
  return Graph(n, std::move(edges));
}

Graph sample(const EnsembleSpec& spec, Rng& rng) {
  spec.validate();
  const int n = spec.n;
  switch (spec.kind) {
    case EnsembleKind::UniformTree: {
      std::vector<int> seq(static_cast<std::size_t>(n - 2));
      for (auto& v : seq) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      return prufer_decode(seq, n);
    }
    case EnsembleKind::ErdosRenyi: {
      std::vector<Edge> edges;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (rng.bernoulli(spec.p)) edges.push_back({i, j});
      return Graph(n, std::move(edges));
    }
    case EnsembleKind::Star: return Graph::star(n);
    case EnsembleKind::Chain: return Graph::chain(n);
    case EnsembleKind::Fixed: return *spec.fixed;
  }
  throw ConfigError("unknown ensemble kind");
}

bool in_sparsity_class(const Graph& g, int mu, int K) {
  auto d = g.degrees();
  auto large = std::count_if(d.begin(), d.end(), [&](int x) { return x > mu; });
  return large <= K;
}

double binomial_half_width(double p_hat, int trials) {
  if (trials <= 0) return 0.0;
  return 1.96 * std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) / trials);
}

RhoEstimate estimate_rho(const EnsembleSpec& spec, int mu, int K, int trials, Rng& rng) {
  require_config(trials >= 1, "estimate_rho: trials must be at least 1");
  RhoEstimate est;
  est.trials = trials;
  for (int t = 0; t < trials; ++t) {
    if (!in_sparsity_class(sample(spec, rng), mu, K)) ++est.failures;
  }
  est.rho = static_cast<double>(est.failures) / trials;
  est.half_width = binomial_half_width(est.rho, trials);
  return est;
}

void to_json(nlohmann::json& j, const EnsembleSpec& spec) {
  j = nlohmann::json{{"kind", to_string(spec.kind)}, {"n", spec.n}, {"seed", spec.seed}};
  if (spec.kind == EnsembleKind::ErdosRenyi) j["p"] = spec.p;
}

EnsembleSpec ensemble_from_json(const nlohmann::json& j) {
  EnsembleSpec spec;
  try {
    spec.kind = ensemble_kind_from_string(j.at("kind").get<std::string>());
    spec.n = j.at("n").get<int>();
    spec.p = j.value("p", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    if (spec.kind == EnsembleKind::Fixed) {
      spec.fixed = read_graph_csv(j.at("graph").get<std::string>(), spec.n).graph;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("ensemble spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace graphrec
