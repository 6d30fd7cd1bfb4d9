#pragma once

#include <map>
#include <utility>
#include <vector>

#include "graphrec/rng.hpp"
#include "graphrec/types.hpp"

namespace graphrec {

/// Undirected edge between 0-based nodes, stored with i < j.
struct Edge {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on nodes {0, ..., n-1}: no self-loops, no
/// duplicate edges. Edges are kept sorted.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  /// Throws ConfigError on self-loops, out-of-range or duplicate edges.
  /// Edges given as (j, i) with j > i are normalized.
  Graph(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_edge(int i, int j) const;
  std::vector<int> degrees() const;
  bool is_connected() const;

  static Graph star(int n);
  static Graph chain(int n);
  static Graph complete(int n);

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

/// Symmetric n x n matrix whose off-diagonal support encodes a graph.
/// Symmetry is checked exactly on construction.
class GraphMatrix {
 public:
  GraphMatrix() = default;
  GraphMatrix(CMatrix values, Field field);

  Index n() const { return values_.rows(); }
  Field field() const { return field_; }
  const CMatrix& values() const { return values_; }
  cplx operator()(Index i, Index j) const { return values_(i, j); }

  /// Underlying graph: off-diagonal entries that are exactly non-zero.
  Graph graph() const;

 private:
  CMatrix values_;
  Field field_ = Field::Real;
};

/// Off-diagonal weight distribution for synthetic graph matrices.
struct WeightSampler {
  enum class Kind { UniformBox, Constant };

  Kind kind = Kind::UniformBox;
  Field field = Field::Complex;
  // UniformBox: re and im uniform on [-bound, bound], redrawn until the
  // magnitude is at least `floor`.
  double bound = 100.0;
  double floor = 1.0;
  // Force Re <= 0 and Im >= 0 on the off-diagonal, which is the sign pattern
  // of physical line admittances entering as Y_ij = -y_ij.
  bool physical = false;
  cplx constant{1.0, 0.0};

  cplx draw(Rng& rng) const;
  /// Smallest magnitude this sampler can produce.
  double magnitude_floor() const;
};

/// How build_graph_matrix fills the diagonal.
struct DiagonalSpec {
  enum class Rule { RowSum, Zero, Explicit };
  Rule rule = Rule::RowSum;
  CVector values;  // used by Rule::Explicit

  static DiagonalSpec row_sum() { return {}; }
  static DiagonalSpec zero() { return {Rule::Zero, {}}; }
  static DiagonalSpec explicit_values(CVector v) { return {Rule::Explicit, std::move(v)}; }
};

/// Random graph matrix with support exactly g. The default diagonal is the
/// admittance row-sum Y_ii = -sum_{k != i} Y_ik, so rows sum to zero.
GraphMatrix build_graph_matrix(const Graph& g, const WeightSampler& sampler, Rng& rng,
                               const DiagonalSpec& diagonal = DiagonalSpec::row_sum());

using LineAdmittances = std::map<std::pair<int, int>, cplx>;

/// Nodal admittance matrix: Y_ij = -y_ij on edges and
/// Y_ii = y_i + sum_k y_ik. Keys are 0-based (i, j) with i < j and must match
/// the edge set exactly.
GraphMatrix build_admittance(const Graph& g, const LineAdmittances& lines,
                             const CVector& self_admittances, Field field);

/// Edge set {(i, j), i < j : max(|X_ij|, |X_ji|) >= threshold}.
Graph support(const CMatrix& x, double threshold);

struct DegreeProfile {
  std::vector<int> degrees;
  int mu = 0;
  int large_count = 0;  // #{j : degrees[j] > mu}
  bool mu_clamped = false;
};

/// Degree statistics; mu outside [0, n-2] is clamped and flagged.
DegreeProfile degree_profile(const Graph& g, int mu);

}  // namespace graphrec
