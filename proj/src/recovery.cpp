#include "graphrec/recovery.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "graphrec/combinations.hpp"
#include "graphrec/parallel.hpp"
#include "graphrec/rng.hpp"

namespace graphrec {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::ThreeStage: return "three-stage";
    case Scheme::Heuristic: return "heuristic";
    case Scheme::ColumnBP: return "column-bp";
    case Scheme::VectorizedBP: return "vectorized-bp";
    case Scheme::VectorizedBPSym: return "vectorized-bp-sym";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  for (Scheme k : {Scheme::ThreeStage, Scheme::Heuristic, Scheme::ColumnBP, Scheme::VectorizedBP,
                   Scheme::VectorizedBPSym})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown scheme '" + s +
                    "' (three-stage, heuristic, column-bp, vectorized-bp, vectorized-bp-sym)");
}

std::string to_string(RecoveryStatus s) {
  switch (s) {
    case RecoveryStatus::Success: return "success";
    case RecoveryStatus::ConsistencyFailed: return "consistency-failed";
    case RecoveryStatus::SolverFailed: return "solver-failed";
  }
  return "?";
}

void RecoveryConfig::validate(Index n) const {
  require_config(gamma >= 0.0 && std::isfinite(gamma), "gamma must be finite and >= 0");
  require_config(K >= 0 && K <= n, "K must lie in [0, n]");
  require_config(s >= 0 && s <= n, "s must lie in [1, n] (0 selects ceil(n/2))");
  require_config(!mu_hint || *mu_hint >= 0, "mu must be >= 0");
  require_config(consistency_tol >= 0.0, "consistency tolerance must be >= 0");
  require_config(max_subsets >= 1, "subset budget must be positive");
  require_config(row_retries >= 0, "row retries must be >= 0");
  require_config(jobs >= 1, "jobs must be >= 1");
  SolverOptions probe = solver;
  probe.cones.clear();
  probe.validate(n);
}

int RecoveryConfig::effective_s(Index n) const {
  return s > 0 ? s : static_cast<int>((n + 1) / 2);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <typename S>
Mat<S> narrow(const CMatrix& x) {
  if constexpr (std::is_same_v<S, double>)
    return x.real();
  else
    return x;
}

template <typename S>
CMatrix widen(const Mat<S>& x) {
  return x.template cast<cplx>();
}

SignCone entry_cone(int row, int col) {
  return row == col ? SignCone::diagonal_admittance() : SignCone::off_diagonal_admittance();
}

/// Solver options for column `col` whose unknowns are the entries in rows `vars`.
SolverOptions column_options(const RecoveryConfig& cfg, const std::vector<int>& vars, int col) {
  SolverOptions o = cfg.solver;
  o.gamma = cfg.gamma;
  o.cones.clear();
  if (cfg.admittance_cones)
    for (int r : vars) o.cones.push_back(entry_cone(r, col));
  return o;
}

std::vector<int> iota_vec(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

void tally(RecoveryResult& r, SolveStatus status, int iterations) {
  r.solver_iterations += iterations;
  ++r.solves;
  if (status == SolveStatus::MaxIters) ++r.unconverged;
}

template <typename S>
Mat<S> pick(const Mat<S>& x, const std::vector<int>& rows, const std::vector<int>& cols) {
  Mat<S> out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows.size(); ++r)
      out(static_cast<Index>(r), static_cast<Index>(c)) = x(rows[r], cols[c]);
  return out;
}

template <typename S>
std::vector<ColumnEstimate> retrieve_impl(const MeasurementSet& ms, const RecoveryConfig& cfg) {
  const int n = static_cast<int>(ms.n());
  const L1Solver<S> solver(narrow<S>(ms.B));
  const Mat<S> A = narrow<S>(ms.A);
  const auto vars = iota_vec(n);
  std::vector<ColumnEstimate> out(static_cast<std::size_t>(n));
  parallel_for(n, cfg.jobs, [&](int j) {
    auto rep = solver.solve(A.col(j), column_options(cfg, vars, j));
    out[j].x = rep.x.template cast<cplx>();
    out[j].status = rep.status;
    out[j].iterations = rep.iterations;
  });
  return out;
}

template <typename S>
CMatrix resolve_impl(const MeasurementSet& ms, const CMatrix& Xin, const std::vector<int>& S_set,
                     const RecoveryConfig& cfg) {
  const int n = static_cast<int>(ms.n());
  const int m = static_cast<int>(ms.m());
  const auto sbar = complement(n, S_set);
  const int K = static_cast<int>(sbar.size());
  if (K == 0) return Xin;
  if (m < K)
    throw SingularError("cannot resolve " + std::to_string(K) + " unknowns from " +
                        std::to_string(m) + " measurements");
  const Mat<S> B = narrow<S>(ms.B);
  const Mat<S> A = narrow<S>(ms.A);
  Mat<S> X = narrow<S>(Xin);
  const Mat<S> Bsbar = pick<S>(B, iota_vec(m), sbar);

  // Best-conditioned rows first: column pivots of B_Sbar^H.
  Eigen::ColPivHouseholderQR<Mat<S>> qr(Bsbar.adjoint());
  std::vector<int> rows(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) rows[k] = static_cast<int>(qr.colsPermutation().indices()(k));
  std::sort(rows.begin(), rows.end());

  const Rng base(cfg.seed);
  for (int attempt = 0;; ++attempt) {
    const Mat<S> M = pick<S>(B, rows, sbar);
    try {
      Mat<S> solved(K, K);
      for (int c = 0; c < K; ++c) {
        const int j = sbar[c];
        for (int i : S_set) X(i, j) = X(j, i);
        Vec<S> rhs(K);
        for (int r = 0; r < K; ++r) {
          S acc = A(rows[r], j);
          for (int i : S_set) acc -= B(rows[r], i) * X(i, j);
          rhs(r) = acc;
        }
        solved.col(c) = solve_square<S>(M, rhs).x;
      }
      for (int c = 0; c < K; ++c)
        for (int r = 0; r < K; ++r) X(sbar[r], sbar[c]) = solved(r, c);
      return widen<S>(X);
    } catch (const SingularError&) {
      if (attempt >= cfg.row_retries)
        throw SingularError("no invertible " + std::to_string(K) + "x" + std::to_string(K) +
                            " row selection after " + std::to_string(attempt) + " retries");
      Rng rng = base.split(static_cast<std::uint64_t>(attempt));
      rows = rng.choose(m, K);
    }
  }
}

template <typename S>
RecoveryResult heuristic_impl(const MeasurementSet& ms, const RecoveryConfig& cfg) {
  const int n = static_cast<int>(ms.n());
  const int m = static_cast<int>(ms.m());
  const int s = cfg.effective_s(n);
  const Mat<S> B = narrow<S>(ms.B);
  Mat<S> residual = narrow<S>(ms.A);  // A_j(r) for the remaining columns
  Mat<S> X = Mat<S>::Zero(n, n);
  std::vector<char> known(static_cast<std::size_t>(n) * n, 0);
  auto is_known = [&](int i, int j) -> char& { return known[static_cast<std::size_t>(j) * n + i]; };

  RecoveryResult result;
  result.scheme = Scheme::Heuristic;
  std::vector<int> remaining = iota_vec(n);
  const Rng base(cfg.seed);

  for (int iter = 0; !remaining.empty(); ++iter) {
    const int k = static_cast<int>(remaining.size());
    std::vector<int> rows = iota_vec(m);
    if (k < m) {
      Rng rng = base.split(static_cast<std::uint64_t>(iter));
      rows = rng.choose(m, k);
    }
    const L1Solver<S> solver(pick<S>(B, rows, remaining));
    const Mat<S> rhs = pick<S>(residual, rows, remaining);
    Mat<S> Xr(k, k);
    std::vector<SolveReport<S>> reports(static_cast<std::size_t>(k));
    parallel_for(k, cfg.jobs, [&](int p) {
      reports[p] = solver.solve(rhs.col(p), column_options(cfg, remaining, remaining[p]));
    });
    for (int p = 0; p < k; ++p) {
      tally(result, reports[p].status, reports[p].iterations);
      if (reports[p].status == SolveStatus::Infeasible) {
        result.status = RecoveryStatus::SolverFailed;
        result.message = "reduced solve infeasible for column " + std::to_string(remaining[p] + 1);
        result.X = widen<S>(X);
        return result;
      }
      Xr.col(p) = reports[p].x;
    }

    // Mismatches within the consistency slack count as zero.
    const double slack = cfg.consistency_tol * std::max(1.0, Xr.cwiseAbs().maxCoeff());
    std::vector<std::pair<int, double>> scores;
    for (int p = 0; p < k; ++p) {
      double sc = 0.0;
      for (int q = 0; q < k; ++q) {
        const double d = std::abs(Xr(q, p) - Xr(p, q));
        if (d > slack) sc += d;
      }
      scores.emplace_back(remaining[p], sc);
    }
    std::vector<int> order = iota_vec(k);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a].second < scores[b].second; });
    const int take = std::min(s, k);
    std::vector<int> fix_pos(order.begin(), order.begin() + take);

    std::vector<int> fixed_cols;
    for (int p : fix_pos) {
      const int j = remaining[p];
      fixed_cols.push_back(j);
      for (int q = 0; q < k; ++q) {
        const int i = remaining[q];
        if (is_known(i, j)) continue;
        X(i, j) = Xr(q, p);
        X(j, i) = Xr(q, p);
        is_known(i, j) = 1;
        is_known(j, i) = 1;
      }
    }
    result.scores.push_back(std::move(scores));
    result.fixed.push_back(fixed_cols);

    std::vector<char> now_fixed(static_cast<std::size_t>(n), 0);
    for (int j : fixed_cols) now_fixed[j] = 1;
    std::vector<int> next;
    for (int j : remaining)
      if (!now_fixed[j]) next.push_back(j);
    for (int j : next)
      for (int i : fixed_cols) residual.col(j) -= B.col(i) * X(i, j);
    remaining = std::move(next);
  }
  result.X = widen<S>(X);
  return result;
}

template <typename S>
RecoveryResult vectorized_sym_impl(const MeasurementSet& ms, const RecoveryConfig& cfg) {
  const int n = static_cast<int>(ms.n());
  const int m = static_cast<int>(ms.m());
  const Mat<S> B = narrow<S>(ms.B);
  const Mat<S> A = narrow<S>(ms.A);
  // Variables: Y_jj and w_ij = 2 Y_ij (i < j), so the objective sum |v|
  // equals the entrywise l1 norm of the full symmetric matrix.
  std::vector<std::pair<int, int>> vars;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) vars.emplace_back(i, j);
  const Index N = static_cast<Index>(vars.size());
  Mat<S> M = Mat<S>::Zero(static_cast<Index>(m) * n, N);
  for (Index v = 0; v < N; ++v) {
    auto [i, j] = vars[v];
    if (i == j) {
      M.block(static_cast<Index>(i) * m, v, m, 1) = B.col(i);
    } else {
      M.block(static_cast<Index>(j) * m, v, m, 1) = B.col(i) / S(2);
      M.block(static_cast<Index>(i) * m, v, m, 1) = B.col(j) / S(2);
    }
  }
  Vec<S> a(static_cast<Index>(m) * n);
  for (int j = 0; j < n; ++j) a.segment(static_cast<Index>(j) * m, m) = A.col(j);

  SolverOptions o = cfg.solver;
  o.gamma = cfg.gamma * std::sqrt(static_cast<double>(n));
  o.cones.clear();
  if (cfg.admittance_cones)
    for (auto [i, j] : vars) o.cones.push_back(entry_cone(i, j));

  auto rep = solve_l1<S>(M, a, o);
  RecoveryResult result;
  result.scheme = Scheme::VectorizedBPSym;
  tally(result, rep.status, rep.iterations);
  Mat<S> X(n, n);
  for (Index v = 0; v < N; ++v) {
    auto [i, j] = vars[v];
    S val = i == j ? rep.x(v) : rep.x(v) / S(2);
    X(i, j) = val;
    X(j, i) = val;
  }
  result.X = widen<S>(X);
  if (rep.status == SolveStatus::Infeasible) {
    result.status = RecoveryStatus::SolverFailed;
    result.message = "joint solve infeasible";
  }
  return result;
}

template <typename Fn>
auto by_field(const MeasurementSet& ms, Fn&& fn) {
  if (ms.field == Field::Real) return fn(double{});
  return fn(cplx{});
}

void prepare(const MeasurementSet& ms, const RecoveryConfig& cfg) {
  ms.validate(true);
  cfg.validate(ms.n());
}

}  // namespace

std::vector<ColumnEstimate> retrieve_columns(const MeasurementSet& ms, const RecoveryConfig& cfg) {
  prepare(ms, cfg);
  return by_field(ms, [&](auto tag) { return retrieve_impl<decltype(tag)>(ms, cfg); });
}

std::optional<std::vector<int>> consistency_check(const CMatrix& X, int K, double gamma, double tol,
                                                  long long max_subsets) {
  const int n = static_cast<int>(X.rows());
  require_config(X.cols() == n, "consistency check needs a square matrix");
  require_config(K >= 0 && K <= n, "K must lie in [0, n]");
  if (!(K <= 1 || (n <= 30 && K <= 3)))
    throw SizeGuardError("consistency check enumerates C(n, K) subsets; needs n <= 30 and K <= 3, or K <= 1");
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  const double limit = 2.0 * gamma + tol * scale;
  std::vector<std::pair<int, int>> bad;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (std::abs(X(i, j) - X(j, i)) > limit) bad.emplace_back(i, j);

  std::optional<std::vector<int>> found;
  std::vector<char> in(static_cast<std::size_t>(n));
  long long visited = for_each_combination(n, n - K, [&](const std::vector<int>& S) {
    std::fill(in.begin(), in.end(), 0);
    for (int v : S) in[v] = 1;
    bool ok = std::none_of(bad.begin(), bad.end(), [&](auto pr) { return in[pr.first] && in[pr.second]; });
    if (ok) {
      found = S;
      return false;
    }
    return true;
  });
  if (!found && visited > max_subsets)
    throw SizeGuardError("consistency check examined " + std::to_string(visited) +
                         " subsets, over the budget of " + std::to_string(max_subsets));
  return found;
}

CMatrix resolve_unknowns(const MeasurementSet& ms, const CMatrix& X, const std::vector<int>& S,
                         const RecoveryConfig& cfg) {
  return by_field(ms, [&](auto tag) { return resolve_impl<decltype(tag)>(ms, X, S, cfg); });
}

RecoveryResult three_stage(const MeasurementSet& ms, const RecoveryConfig& cfg) {
  const auto t0 = Clock::now();
  prepare(ms, cfg);
  const int n = static_cast<int>(ms.n());
  RecoveryResult result;
  result.scheme = Scheme::ThreeStage;
  auto cols = by_field(ms, [&](auto tag) { return retrieve_impl<decltype(tag)>(ms, cfg); });
  result.X = CMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    result.X.col(j) = cols[j].x;
    tally(result, cols[j].status, cols[j].iterations);
  }
  auto S = consistency_check(result.X, cfg.K, cfg.gamma, cfg.consistency_tol, cfg.max_subsets);
  if (!S) {
    result.status = RecoveryStatus::ConsistencyFailed;
    result.message = "no subset of " + std::to_string(n - cfg.K) + " mutually consistent columns";
    result.elapsed_ms = ms_since(t0);
    return result;
  }
  result.accepted = *S;
  try {
    result.X = resolve_unknowns(ms, result.X, *S, cfg);
  } catch (const SingularError& e) {
    result.status = RecoveryStatus::SolverFailed;
    result.message = e.what();
  }
  result.elapsed_ms = ms_since(t0);
  return result;
}

RecoveryResult heuristic(const MeasurementSet& ms, const RecoveryConfig& cfg) {
  const auto t0 = Clock::now();
  prepare(ms, cfg);
  auto result = by_field(ms, [&](auto tag) { return heuristic_impl<decltype(tag)>(ms, cfg); });
  result.elapsed_ms = ms_since(t0);
  return result;
}

RecoveryResult column_bp(const MeasurementSet& ms, const RecoveryConfig& cfg) {
  const auto t0 = Clock::now();
  prepare(ms, cfg);
  const int n = static_cast<int>(ms.n());
  auto cols = by_field(ms, [&](auto tag) { return retrieve_impl<decltype(tag)>(ms, cfg); });
  RecoveryResult result;
  result.scheme = Scheme::ColumnBP;
  result.X = CMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    result.X.col(j) = cols[j].x;
    tally(result, cols[j].status, cols[j].iterations);
    if (cols[j].status == SolveStatus::Infeasible && result.status == RecoveryStatus::Success) {
      result.status = RecoveryStatus::SolverFailed;
      result.message = "column " + std::to_string(j + 1) + " infeasible";
    }
  }
  result.elapsed_ms = ms_since(t0);
  return result;
}

RecoveryResult vectorized_bp(const MeasurementSet& ms, bool symmetric, const RecoveryConfig& cfg) {
  if (!symmetric) {
    auto r = column_bp(ms, cfg);
    r.scheme = Scheme::VectorizedBP;
    return r;
  }
  const auto t0 = Clock::now();
  prepare(ms, cfg);
  auto result = by_field(ms, [&](auto tag) { return vectorized_sym_impl<decltype(tag)>(ms, cfg); });
  result.elapsed_ms = ms_since(t0);
  return result;
}

RecoveryResult recover(const MeasurementSet& ms, const RecoveryConfig& cfg) {
  switch (cfg.scheme) {
    case Scheme::ThreeStage: return three_stage(ms, cfg);
    case Scheme::Heuristic: return heuristic(ms, cfg);
    case Scheme::ColumnBP: return column_bp(ms, cfg);
    case Scheme::VectorizedBP: return vectorized_bp(ms, false, cfg);
    case Scheme::VectorizedBPSym: return vectorized_bp(ms, true, cfg);
  }
  throw ConfigError("unknown scheme");
}

}  // namespace graphrec
