#include "graphrec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace graphrec {

Graph::Graph(int n) : n_(n) { require_config(n >= 0, "graph: node count must be non-negative"); }

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  require_config(n >= 0, "graph: node count must be non-negative");
  for (auto& e : edges_) {
    if (e.i == e.j) throw ConfigError("graph: self-loop at node " + std::to_string(e.i + 1));
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) {
      throw ConfigError("graph: edge (" + std::to_string(e.i + 1) + "," + std::to_string(e.j + 1) +
                        ") out of range for n=" + std::to_string(n));
    }
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw ConfigError("graph: duplicate edge (" + std::to_string(dup->i + 1) + "," +
                      std::to_string(dup->j + 1) + ")");
  }
}

bool Graph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(static_cast<std::size_t>(n_), 0);
  for (const auto& e : edges_) {
    ++d[e.i];
    ++d[e.j];
  }
  return d;
}

bool Graph::is_connected() const {
  if (n_ <= 1) return true;
  std::vector<int> parent(static_cast<std::size_t>(n_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int components = n_;
  for (const auto& e : edges_) {
    int a = find(e.i), b = find(e.j);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

Graph Graph::star(int n) {
  std::vector<Edge> e;
  for (int j = 1; j < n; ++j) e.push_back({0, j});
  return Graph(n, std::move(e));
}

Graph Graph::chain(int n) {
  std::vector<Edge> e;
  for (int j = 1; j < n; ++j) e.push_back({j - 1, j});
  return Graph(n, std::move(e));
}

Graph Graph::complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  return Graph(n, std::move(e));
}

GraphMatrix::GraphMatrix(CMatrix values, Field field) : values_(std::move(values)), field_(field) {
  if (values_.rows() != values_.cols()) throw ShapeError("graph matrix must be square");
  for (Index j = 0; j < values_.cols(); ++j) {
    for (Index i = 0; i < values_.rows(); ++i) {
      if (values_(i, j) != values_(j, i)) throw ConfigError("graph matrix must be symmetric");
      if (field_ == Field::Real && values_(i, j).imag() != 0.0) {
        throw ConfigError("real graph matrix has a non-zero imaginary part");
      }
    }
  }
}

Graph GraphMatrix::graph() const { return support(values_, 0.0); }

cplx WeightSampler::draw(Rng& rng) const {
  if (kind == Kind::Constant) {
    return field == Field::Real ? cplx(constant.real(), 0.0) : constant;
  }
  require_config(bound > 0.0 && floor >= 0.0 && floor < bound,
                 "weight sampler needs 0 <= floor < bound");
  cplx w;
  do {
    double re = rng.uniform(-bound, bound);
    double im = field == Field::Complex ? rng.uniform(-bound, bound) : 0.0;
    w = cplx(re, im);
  } while (std::abs(w) < floor || std::abs(w) == 0.0);
  if (physical) w = cplx(-std::abs(w.real()), std::abs(w.imag()));
  return w;
}

double WeightSampler::magnitude_floor() const {
  return kind == Kind::Constant ? std::abs(constant) : floor;
}

GraphMatrix build_graph_matrix(const Graph& g, const WeightSampler& sampler, Rng& rng,
                               const DiagonalSpec& diagonal) {
  const Index n = g.n();
  CMatrix y = CMatrix::Zero(n, n);
  for (const auto& e : g.edges()) {
    cplx w = sampler.draw(rng);
    y(e.i, e.j) = w;
    y(e.j, e.i) = w;
  }
  switch (diagonal.rule) {
    case DiagonalSpec::Rule::RowSum:
      for (Index i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (Index k = 0; k < n; ++k)
          if (k != i) s += y(i, k);
        y(i, i) = -s;
      }
      break;
    case DiagonalSpec::Rule::Zero:
      break;
    case DiagonalSpec::Rule::Explicit:
      if (diagonal.values.size() != n) throw ShapeError("explicit diagonal has wrong length");
      for (Index i = 0; i < n; ++i) y(i, i) = diagonal.values(i);
      break;
  }
  if (sampler.field == Field::Real) y = y.real().cast<cplx>();
  return GraphMatrix(std::move(y), sampler.field);
}

GraphMatrix build_admittance(const Graph& g, const LineAdmittances& lines,
                             const CVector& self_admittances, Field field) {
  const Index n = g.n();
  if (self_admittances.size() != n) throw ShapeError("self admittances must have length n");
  if (lines.size() != g.edge_count()) {
    throw ConfigError("line admittances must be keyed exactly by the edge set");
  }
  CMatrix y = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) y(i, i) = self_admittances(i);
  for (const auto& e : g.edges()) {
    auto it = lines.find({e.i, e.j});
    if (it == lines.end()) {
      throw ConfigError("missing line admittance for edge (" + std::to_string(e.i + 1) + "," +
                        std::to_string(e.j + 1) + ")");
    }
    if (it->second == cplx(0.0)) throw ConfigError("line admittances must be non-zero");
    y(e.i, e.j) = -it->second;
    y(e.j, e.i) = -it->second;
    y(e.i, e.i) += it->second;
    y(e.j, e.j) += it->second;
  }
  if (field == Field::Real) y = y.real().cast<cplx>();
  return GraphMatrix(std::move(y), field);
}

Graph support(const CMatrix& x, double threshold) {
  if (x.rows() != x.cols()) throw ShapeError("support: matrix must be square");
  const auto n = static_cast<int>(x.rows());
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double mag = std::max(std::abs(x(i, j)), std::abs(x(j, i)));
      bool present = threshold > 0.0 ? mag >= threshold : mag > 0.0;
      if (present) edges.push_back({i, j});
    }
  }
  return Graph(n, std::move(edges));
}

DegreeProfile degree_profile(const Graph& g, int mu) {
  DegreeProfile p;
  p.degrees = g.degrees();
  int hi = std::max(0, g.n() - 2);
  p.mu = std::clamp(mu, 0, hi);
  p.mu_clamped = p.mu != mu;
  p.large_count = static_cast<int>(
      std::count_if(p.degrees.begin(), p.degrees.end(), [&](int d) { return d > p.mu; }));
  return p;
}

}  // namespace graphrec
