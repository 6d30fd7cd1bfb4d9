#include <doctest.h>

#include "graphrec/graph.hpp"
#include "graphrec/ensembles.hpp"
#include "helpers.hpp"

using namespace graphrec;

TEST_SUITE("graph") {

TEST_CASE("graph validation rejects self-loops, duplicates and out-of-range nodes") {
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), ConfigError);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), ConfigError);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), ConfigError);
  Graph g(3, {{2, 0}});
  REQUIRE(g.edge_count() == 1);
  CHECK(g.edges()[0] == Edge{0, 2});
}

TEST_CASE("edgeless graph gives a zero off-diagonal") {
  Rng rng(1);
  GraphMatrix y = build_graph_matrix(Graph(4), WeightSampler{}, rng);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      if (i != j) CHECK(y(i, j) == cplx(0.0));
  CHECK(y.graph().edge_count() == 0);
}

TEST_CASE("single edge with unit weight and zero diagonal") {
  Rng rng(1);
  WeightSampler w;
  w.kind = WeightSampler::Kind::Constant;
  GraphMatrix y = build_graph_matrix(Graph(2, {{0, 1}}), w, rng, DiagonalSpec::zero());
  CMatrix expected(2, 2);
  expected << 0.0, 1.0, 1.0, 0.0;
  CHECK(y.values() == expected);
}

TEST_CASE("star with hub 1 has 4 non-zeros in the hub column and 1 per leaf") {
  Rng rng(3);
  GraphMatrix y = build_graph_matrix(Graph::star(5), WeightSampler{}, rng);
  for (Index j = 0; j < 5; ++j) {
    int nz = 0;
    for (Index i = 0; i < 5; ++i)
      if (i != j && y(i, j) != cplx(0.0)) ++nz;
    CHECK(nz == (j == 0 ? 4 : 1));
  }
}

TEST_CASE("graph matrix is exactly symmetric and real in real mode") {
  Rng rng(11);
  WeightSampler w;
  w.field = Field::Real;
  EnsembleSpec spec;
  spec.n = 12;
  GraphMatrix y = build_graph_matrix(sample(spec, rng), w, rng);
  CHECK(y.values() == y.values().transpose());
  CHECK(y.values().imag().cwiseAbs().maxCoeff() == 0.0);
  CMatrix bad = y.values();
  bad(0, 1) += 1e-12;
  CHECK_THROWS_AS(GraphMatrix(bad, Field::Real), ConfigError);
}

TEST_CASE("physical sampler keeps Re <= 0 and Im >= 0 off the diagonal") {
  Rng rng(5);
  WeightSampler w;
  w.physical = true;
  for (int k = 0; k < 200; ++k) {
    cplx v = w.draw(rng);
    CHECK(v.real() <= 0.0);
    CHECK(v.imag() >= 0.0);
    CHECK(std::abs(v) >= w.magnitude_floor());
  }
}

TEST_CASE("admittance of a single line is the edge Laplacian") {
  LineAdmittances y{{{0, 1}, cplx(1.0)}};
  GraphMatrix Y = build_admittance(Graph(2, {{0, 1}}), y, CVector::Zero(2), Field::Real);
  CMatrix expected(2, 2);
  expected << 1.0, -1.0, -1.0, 1.0;
  CHECK(Y.values() == expected);
}

TEST_CASE("admittance of the chain 1-2-3 with unit lines") {
  LineAdmittances y{{{0, 1}, cplx(1.0)}, {{1, 2}, cplx(1.0)}};
  GraphMatrix Y = build_admittance(Graph::chain(3), y, CVector::Zero(3), Field::Real);
  CMatrix expected(3, 3);
  expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK(Y.values() == expected);
}

TEST_CASE("admittance of an edgeless graph is the self-admittance diagonal") {
  CVector v(3);
  v << cplx(1, 2), cplx(3, 0), cplx(0, -1);
  GraphMatrix Y = build_admittance(Graph(3), {}, v, Field::Complex);
  CHECK(Y.values() == CMatrix(v.asDiagonal()));
}

TEST_CASE("admittance input errors") {
  Graph g = Graph::chain(3);
  LineAdmittances missing{{{0, 1}, cplx(1.0)}};
  CHECK_THROWS_AS(build_admittance(g, missing, CVector::Zero(3), Field::Real), ConfigError);
  LineAdmittances extra{{{0, 1}, cplx(1.0)}, {{1, 2}, cplx(1.0)}, {{0, 2}, cplx(1.0)}};
  CHECK_THROWS_AS(build_admittance(g, extra, CVector::Zero(3), Field::Real), ConfigError);
  LineAdmittances zero{{{0, 1}, cplx(1.0)}, {{1, 2}, cplx(0.0)}};
  CHECK_THROWS_AS(build_admittance(g, zero, CVector::Zero(3), Field::Real), ConfigError);
}

TEST_CASE("admittance rows sum to zero without self-admittance") {
  Rng rng(9);
  EnsembleSpec spec;
  spec.kind = EnsembleKind::ErdosRenyi;
  spec.n = 15;
  spec.p = 0.3;
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = sample(spec, rng);
    LineAdmittances lines;
    for (const auto& e : g.edges()) lines[{e.i, e.j}] = cplx(rng.uniform(1, 50), rng.uniform(-50, 50));
    GraphMatrix Y = build_admittance(g, lines, CVector::Zero(15), Field::Complex);
    double scale = Y.values().cwiseAbs().maxCoeff();
    CHECK(Y.values().rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("support thresholds by the larger of the two mirrored magnitudes") {
  Rng rng(4);
  GraphMatrix y = build_graph_matrix(Graph::star(6), WeightSampler{}, rng);
  CHECK(support(y.values(), 1e-5) == Graph::star(6));
  CHECK(support(CMatrix::Zero(4, 4), 1e-5).edge_count() == 0);
  CMatrix x = CMatrix::Zero(3, 3);
  x(0, 1) = 1e-6;
  CHECK(support(x, 1e-5).edge_count() == 0);
  x(1, 0) = 2e-5;
  CHECK(support(x, 1e-5).has_edge(0, 1));
}

TEST_CASE("support below the magnitude floor recovers the graph") {
  Rng rng(21);
  WeightSampler w;
  EnsembleSpec spec;
  spec.kind = EnsembleKind::ErdosRenyi;
  spec.n = 20;
  spec.p = 0.2;
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = sample(spec, rng);
    GraphMatrix y = build_graph_matrix(g, w, rng);
    CHECK(support(y.values(), 0.5 * w.magnitude_floor()) == g);
    CHECK(support(y.values(), w.magnitude_floor()) == g);
  }
}

TEST_CASE("degree profile counts") {
  CHECK(degree_profile(Graph::star(5), 1).large_count == 1);
  CHECK(degree_profile(Graph::chain(5), 2).large_count == 0);
  CHECK(degree_profile(Graph(5), 0).large_count == 0);
  auto clamped = degree_profile(Graph::star(5), 10);
  CHECK(clamped.mu_clamped);
  CHECK(clamped.mu == 3);
}

TEST_CASE("degree profile is monotone in mu and degrees sum to twice the edges") {
  Rng rng(8);
  EnsembleSpec spec;
  spec.n = 30;
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = sample(spec, rng);
    int prev = g.n();
    for (int mu = 0; mu <= g.n() - 2; ++mu) {
      auto p = degree_profile(g, mu);
      CHECK(p.large_count <= prev);
      prev = p.large_count;
      int total = 0;
      for (int d : p.degrees) total += d;
      CHECK(total == 2 * static_cast<int>(g.edge_count()));
    }
  }
}

}
