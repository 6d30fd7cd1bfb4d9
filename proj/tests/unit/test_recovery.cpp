#include <doctest.h>

#include "graphrec/ensembles.hpp"
#include "graphrec/measurement.hpp"
#include "graphrec/recovery.hpp"

#include <numeric>

using namespace graphrec;

namespace {

struct Problem {
  GraphMatrix Y;
  MeasurementSet ms;
};

Problem make_problem(const Graph& g, Index m, Field field, std::uint64_t seed, double mean_re = 0.0) {
  Rng rng(seed);
  WeightSampler w;
  w.field = field;
  GraphMatrix y = build_graph_matrix(g, w, rng);
  CMatrix B = sample_generator(m, g.n(), field, 1.0, rng, mean_re);
  return {y, synthesize(B, y, 0.0, rng)};
}

Problem with_identity(const Graph& g, Field field, std::uint64_t seed) {
  Rng rng(seed);
  WeightSampler w;
  w.field = field;
  GraphMatrix y = build_graph_matrix(g, w, rng);
  return {y, synthesize(CMatrix::Identity(g.n(), g.n()), y, 0.0, rng)};
}

double err(const CMatrix& x, const GraphMatrix& y) { return (x - y.values()).norm() / y.values().norm(); }

bool column_exact(const CMatrix& x, const GraphMatrix& y, Index j) {
  return (x.col(j) - y.values().col(j)).norm() <= 1e-6 * y.values().col(j).norm();
}

RecoveryConfig config(Scheme s) {
  RecoveryConfig cfg;
  cfg.scheme = s;
  return cfg;
}

}  // namespace

TEST_SUITE("recovery") {

TEST_CASE("column retrieval with the identity returns A") {
  auto p = with_identity(Graph::chain(5), Field::Real, 1);
  auto cols = retrieve_columns(p.ms, RecoveryConfig{});
  for (Index j = 0; j < 5; ++j) CHECK((cols[j].x - p.ms.A.col(j)).norm() <= 1e-9);
}

TEST_CASE("chain columns are exact from six Gaussian measurements") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto p = make_problem(Graph::chain(6), 6, Field::Real, seed);
    auto cols = retrieve_columns(p.ms, RecoveryConfig{});
    for (Index j = 0; j < 6; ++j) {
      CHECK(cols[j].status == SolveStatus::Optimal);
      CHECK((cols[j].x - p.Y.values().col(j)).norm() <= 1e-6);
    }
  }
}

TEST_CASE("star with four measurements: hub always wrong, leaves mostly exact") {
  int hub_wrong = 0, leaves_exact = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto p = make_problem(Graph::star(6), 4, Field::Complex, seed);
    auto cols = retrieve_columns(p.ms, RecoveryConfig{});
    CMatrix X(6, 6);
    for (Index j = 0; j < 6; ++j) X.col(j) = cols[j].x;
    for (Index j = 1; j < 6; ++j) leaves_exact += column_exact(X, p.Y, j);
    hub_wrong += !column_exact(X, p.Y, 0);
  }
  CHECK(hub_wrong == 20);
  CHECK(leaves_exact >= 70);
}

TEST_CASE("consistency check examples") {
  Rng rng(3);
  GraphMatrix y = build_graph_matrix(Graph::star(6), WeightSampler{}, rng);
  for (int K = 0; K <= 3; ++K) {
    auto S = consistency_check(y.values(), K, 0.0);
    REQUIRE(S);
    std::vector<int> first(static_cast<std::size_t>(6 - K));
    std::iota(first.begin(), first.end(), 0);
    CHECK(*S == first);
  }
  CMatrix bad = y.values();
  for (Index i = 0; i < 5; ++i) bad(i, 5) += cplx(0.5, 0.0);
  auto S = consistency_check(bad, 1, 0.0);
  REQUIRE(S);
  CHECK(*S == std::vector<int>{0, 1, 2, 3, 4});

  CMatrix upper = CMatrix::Zero(4, 4);
  for (Index j = 0; j < 4; ++j)
    for (Index i = 0; i < j; ++i) upper(i, j) = 1.0;
  CHECK_FALSE(consistency_check(upper, 1, 0.0));
}

TEST_CASE("consistency slack scales with gamma") {
  CMatrix x = CMatrix::Zero(3, 3);
  x(0, 1) = 0.3;
  CHECK_FALSE(consistency_check(x, 0, 0.1));
  CHECK(consistency_check(x, 0, 0.15));
}

TEST_CASE("consistency check refuses large enumerations") {
  CMatrix x = CMatrix::Zero(40, 40);
  CHECK_THROWS_AS(consistency_check(x, 2, 0.0), SizeGuardError);
  CMatrix y = CMatrix::Zero(30, 30);
  for (Index j = 0; j < 30; ++j)
    for (Index i = 0; i < j; ++i) y(i, j) = 1.0;
  CHECK_THROWS_AS(consistency_check(y, 3, 0.0, 1e-6, 1000), SizeGuardError);
}

TEST_CASE("resolve with K = 0 leaves X unchanged") {
  auto p = make_problem(Graph::chain(4), 3, Field::Real, 2);
  CMatrix X = CMatrix::Random(4, 4);
  CHECK(resolve_unknowns(p.ms, X, {0, 1, 2, 3}, RecoveryConfig{}) == X);
}

TEST_CASE("resolve completes the hub column of a star") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto p = make_problem(Graph::star(5), 4, Field::Complex, seed, 1.0);
    CMatrix X = p.Y.values();
    X.col(0).setConstant(cplx(7.0, -3.0));
    CMatrix out = resolve_unknowns(p.ms, X, {1, 2, 3, 4}, RecoveryConfig{});
    CHECK((out - p.Y.values()).norm() <= 1e-8 * p.Y.values().norm());
  }
}

TEST_CASE("resolve avoids rows that are zero on the unknown column") {
  Rng rng(4);
  GraphMatrix y = build_graph_matrix(Graph::star(4), WeightSampler{}, rng);
  CMatrix B = sample_generator(3, 4, Field::Real, 1.0, rng);
  B(0, 0) = 0.0;
  B(1, 0) = 0.0;
  MeasurementSet ms = synthesize(B, y, 0.0, rng);
  CMatrix X = y.values();
  X.col(0).setZero();
  CMatrix out = resolve_unknowns(ms, X, {1, 2, 3}, RecoveryConfig{});
  CHECK((out - y.values()).norm() <= 1e-8 * y.values().norm());

  B.col(0).setZero();
  MeasurementSet dead = synthesize(B, y, 0.0, rng);
  CHECK_THROWS_AS(resolve_unknowns(dead, X, {1, 2, 3}, RecoveryConfig{}), SingularError);
}

TEST_CASE("three-stage with the identity and K = 0 returns A") {
  auto p = with_identity(Graph::star(6), Field::Complex, 5);
  RecoveryConfig cfg = config(Scheme::ThreeStage);
  cfg.K = 0;
  auto r = recover(p.ms, cfg);
  CHECK(r.status == RecoveryStatus::Success);
  CHECK((r.X - p.ms.A).norm() <= 1e-9);
  CHECK(r.accepted.size() == 6u);
}

TEST_CASE("three-stage recovers a star where column BP misses the hub") {
  int three_ok = 0, bp_hub_wrong = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto p = make_problem(Graph::star(8), 6, Field::Complex, seed);
    RecoveryConfig cfg = config(Scheme::ThreeStage);
    cfg.K = 1;
    auto r = recover(p.ms, cfg);
    if (r.status == RecoveryStatus::Success && err(r.X, p.Y) <= 1e-6) ++three_ok;
    auto bp = recover(p.ms, config(Scheme::ColumnBP));
    if (!column_exact(bp.X, p.Y, 0)) ++bp_hub_wrong;
  }
  CHECK(three_ok >= 9);
  CHECK(bp_hub_wrong == 10);
}

TEST_CASE("three-stage K = 0 keeps the column solutions when they are consistent") {
  auto p = make_problem(Graph::chain(6), 6, Field::Real, 7);
  RecoveryConfig cfg = config(Scheme::ThreeStage);
  cfg.K = 0;
  auto r = recover(p.ms, cfg);
  auto cols = retrieve_columns(p.ms, cfg);
  REQUIRE(r.status == RecoveryStatus::Success);
  for (Index j = 0; j < 6; ++j) CHECK(r.X.col(j) == cols[j].x);
}

TEST_CASE("three-stage reports inconsistency") {
  auto p = make_problem(Graph::complete(6), 3, Field::Real, 8);
  RecoveryConfig cfg = config(Scheme::ThreeStage);
  cfg.K = 1;
  CHECK(recover(p.ms, cfg).status == RecoveryStatus::ConsistencyFailed);
}

TEST_CASE("heuristic with symmetric exact columns fixes the first s by index") {
  auto p = make_problem(Graph::chain(6), 6, Field::Real, 2);
  RecoveryConfig cfg = config(Scheme::Heuristic);
  cfg.s = 2;
  auto r = recover(p.ms, cfg);
  REQUIRE(r.status == RecoveryStatus::Success);
  REQUIRE(!r.scores.empty());
  for (auto [col, score] : r.scores[0]) CHECK(score <= 1e-9);
  CHECK(r.fixed[0] == std::vector<int>{0, 1});
  CHECK(r.fixed.size() == 3u);
  CHECK((r.X - p.Y.values()).norm() <= 1e-8 * p.Y.values().norm());
}

TEST_CASE("heuristic with s = n is one column BP pass") {
  auto exact = make_problem(Graph::chain(6), 6, Field::Real, 1);
  RecoveryConfig cfg = config(Scheme::Heuristic);
  cfg.s = 6;
  auto h = recover(exact.ms, cfg);
  auto bp = recover(exact.ms, config(Scheme::ColumnBP));
  CHECK(h.fixed.size() == 1u);
  CHECK((h.X - bp.X).norm() <= 1e-8);

  // Without exact columns each entry comes from one of the two mirrored
  // column solutions.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto p = make_problem(Graph::chain(8), 6, Field::Real, seed);
    cfg.s = 8;
    auto hh = recover(p.ms, cfg);
    auto cb = recover(p.ms, config(Scheme::ColumnBP));
    CHECK(hh.fixed.size() == 1u);
    for (Index j = 0; j < 8; ++j)
      for (Index i = 0; i < 8; ++i) CHECK((hh.X(i, j) == cb.X(i, j) || hh.X(i, j) == cb.X(j, i)));
  }
}

TEST_CASE("heuristic output is exactly symmetric") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    EnsembleSpec spec;
    spec.n = 12;
    Rng rng(seed);
    auto p = make_problem(sample(spec, rng), 5, Field::Complex, seed, 1.0);
    auto r = recover(p.ms, config(Scheme::Heuristic));
    CHECK((r.X - r.X.transpose()).norm() == 0.0);
  }
}

TEST_CASE("recovery is deterministic and independent of the job count") {
  auto p = make_problem(Graph::star(10), 5, Field::Complex, 11, 1.0);
  for (Scheme s : {Scheme::Heuristic, Scheme::ThreeStage, Scheme::ColumnBP}) {
    RecoveryConfig cfg = config(s);
    cfg.seed = 5;
    auto a = recover(p.ms, cfg);
    auto b = recover(p.ms, cfg);
    cfg.jobs = 3;
    auto c = recover(p.ms, cfg);
    CHECK(a.X == b.X);
    CHECK(a.X == c.X);
    CHECK(a.status == c.status);
  }
}

TEST_CASE("all schemes recover a fully determined system") {
  for (int n = 3; n <= 6; ++n) {
    for (Field f : {Field::Real, Field::Complex}) {
      auto p = make_problem(Graph::complete(n), n, f, static_cast<std::uint64_t>(n));
      for (Scheme s : {Scheme::ThreeStage, Scheme::Heuristic, Scheme::ColumnBP, Scheme::VectorizedBP,
                       Scheme::VectorizedBPSym}) {
        CAPTURE(n);
        CAPTURE(to_string(s));
        auto r = recover(p.ms, config(s));
        CHECK(r.status == RecoveryStatus::Success);
        CHECK((r.X - p.Y.values()).norm() <= 1e-8 * p.Y.values().norm());
      }
    }
  }
}

TEST_CASE("vectorized BP with the identity") {
  auto p = with_identity(Graph::star(5), Field::Complex, 3);
  CHECK((vectorized_bp(p.ms, false, RecoveryConfig{}).X - p.ms.A).norm() <= 1e-9);
  CHECK((vectorized_bp(p.ms, true, RecoveryConfig{}).X - p.ms.A).norm() <= 1e-8);
}

TEST_CASE("vectorized BP on a chain, both variants") {
  int plain_cols = 0, sym_exact = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto p = make_problem(Graph::chain(8), 6, Field::Complex, seed);
    auto plain = vectorized_bp(p.ms, false, RecoveryConfig{});
    auto sym = vectorized_bp(p.ms, true, RecoveryConfig{});
    for (Index j = 0; j < 8; ++j) plain_cols += column_exact(plain.X, p.Y, j);
    sym_exact += err(sym.X, p.Y) <= 1e-6;
    CHECK((sym.X - sym.X.transpose()).norm() == 0.0);
  }
  CHECK(plain_cols >= 120);
  CHECK(sym_exact >= 18);
}

TEST_CASE("scheme names round trip and configs validate") {
  for (Scheme s : {Scheme::ThreeStage, Scheme::Heuristic, Scheme::ColumnBP, Scheme::VectorizedBP,
                   Scheme::VectorizedBPSym})
    CHECK(scheme_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(scheme_from_string("lasso"), ConfigError);
  RecoveryConfig cfg;
  cfg.s = 9;
  CHECK_THROWS_AS(cfg.validate(8), ConfigError);
  cfg.s = 0;
  CHECK(cfg.effective_s(7) == 4);
  cfg.gamma = -1;
  CHECK_THROWS_AS(cfg.validate(8), ConfigError);
}

}
