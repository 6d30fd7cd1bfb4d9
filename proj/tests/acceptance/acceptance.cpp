// Acceptance checks. `acceptance` runs every criterion; `acceptance 3 5`
// runs the listed ones. Each criterion prints a single PASS/FAIL line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <algorithm>
#include <functional>
#include <optional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../common/oracles.hpp"
#include "graphrec/bounds.hpp"
#include "graphrec/diagnostics.hpp"
#include "graphrec/harness.hpp"
#include "graphrec/solver.hpp"

using namespace graphrec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. l1 solver against planted sparse vectors

Outcome solver_correctness() {
  Rng rng(20240601);
  int certified = 0, checked = 0, matched = 0;
  std::string first_problem;
  for (int inst = 0; inst < 200; ++inst) {
    const int m = 3 + static_cast<int>(rng.below(6));
    const int n = 5 + static_cast<int>(rng.below(8));
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(m / 3)));
    Eigen::MatrixXd B(m, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < m; ++i) B(i, j) = rng.normal(0, 1);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    std::vector<int> supp = rng.choose(n, k);
    for (int j : supp) x0(j) = (rng.bernoulli(0.5) ? 1 : -1) * rng.uniform(0.5, 2.0);
    Eigen::VectorXd a = B * x0;

    SolverOptions opts;
    auto r = solve_l1<double>(B, a, opts);
    const bool cert = r.status == SolveStatus::Optimal && certify_l1<double>(B, a, r.x, opts);
    certified += cert;
    if (!cert && first_problem.empty()) first_problem = fmt("instance %d did not certify", inst);

    // Recovery guarantees: RIC condition on B / sqrt(m), or spark > 2k plus
    // a strict dual certificate on the planted support.
    const CMatrix Bc = B.cast<cplx>() / std::sqrt(static_cast<double>(m));
    bool guaranteed = false;
    if (3 * k <= n && ric(Bc, 2 * k) + ric(Bc, 3 * k) < 1.0) guaranteed = true;
    if (!guaranteed && spark(Bc) > 2 * k) {
      Eigen::MatrixXd Bs(m, k);
      Eigen::VectorXd sg(k);
      for (int c = 0; c < k; ++c) {
        Bs.col(c) = B.col(supp[c]);
        sg(c) = x0(supp[c]) > 0 ? 1.0 : -1.0;
      }
      Eigen::VectorXd nu = Bs * (Bs.transpose() * Bs).ldlt().solve(sg);
      double off = 0.0;
      for (int j = 0; j < n; ++j)
        if (x0(j) == 0.0) off = std::max(off, std::abs(B.col(j).dot(nu)));
      guaranteed = off < 1.0 - 1e-6;
    }
    if (guaranteed) {
      ++checked;
      const bool ok = (r.x - x0).cwiseAbs().maxCoeff() <= 1e-6;
      matched += ok;
      if (!ok && first_problem.empty()) first_problem = fmt("instance %d missed the planted vector", inst);
    }
  }
  Outcome o;
  o.pass = certified == 200 && matched == checked && checked > 0;
  o.detail = fmt("certified %d/200, guaranteed %d, matched %d", certified, checked, matched);
  if (!first_problem.empty()) o.detail += "; " + first_problem;
  return o;
}

// ---------------------------------------------------------------------------
// 2. three-stage exactness on uniform trees

TrialSpec tree_three_stage(Field field, double mean_re, std::uint64_t seed) {
  TrialSpec t;
  t.ensemble.kind = EnsembleKind::UniformTree;
  t.ensemble.n = 10;
  t.m = 8;
  t.field = field;
  t.generator_mean_re = mean_re;
  t.recovery.scheme = Scheme::ThreeStage;
  t.recovery.K = 1;
  t.trials = 50;
  t.seed = seed;
  t.topo_threshold = 1e-5;
  return t;
}

Outcome three_stage_exactness() {
  TrialSummary c = run_trials(tree_three_stage(Field::Complex, 0.0, 1));
  TrialSummary r = run_trials(tree_three_stage(Field::Real, 0.0, 1));
  const double rate = 1.0 - c.eps_P;
  Outcome o;
  o.pass = rate >= 0.9;
  o.detail = fmt("complex Gaussian B: exact in %.0f%% of 50 trees (real B: %.0f%%)", 100 * rate,
                 100 * (1.0 - r.eps_P));
  return o;
}

// ---------------------------------------------------------------------------
// 3. star separation

std::optional<int> minimal_m(const SweepSpec& sw) {
  SweepResult r = sample_complexity_sweep(sw);
  return r.minimal.at(0).m;
}

SweepSpec star24(Scheme scheme) {
  SweepSpec sw;
  sw.base.ensemble.kind = EnsembleKind::Star;
  sw.base.ensemble.n = 24;
  sw.base.field = Field::Complex;
  sw.base.generator_mean_re = 1.0;
  sw.base.recovery.scheme = scheme;
  sw.base.recovery.s = 12;
  sw.base.trials = 20;
  sw.base.seed = 1;
  sw.n_list = {24};
  sw.schemes = {scheme};
  sw.m_start = 4;
  sw.q = 0.9;
  return sw;
}

std::string show(const std::optional<int>& m) { return m ? std::to_string(*m) : std::string("none"); }

Outcome star_separation() {
  auto h = minimal_m(star24(Scheme::Heuristic));
  auto sym = minimal_m(star24(Scheme::VectorizedBPSym));
  auto col = minimal_m(star24(Scheme::ColumnBP));
  const int big = 1 << 20;
  const int mh = h.value_or(big), ms = sym.value_or(big), mc = col.value_or(big);
  Outcome o;
  o.pass = h && mh < ms && mh < mc && mc >= 22;
  o.detail = fmt("minimal m: heuristic %s, vectorized-bp-sym %s, column-bp %s", show(h).c_str(),
                 show(sym).c_str(), show(col).c_str());
  return o;
}

// ---------------------------------------------------------------------------
// 4. logarithmic growth of the heuristic's minimal m

struct Fit {
  double a = 0, b = 0, r2 = 0;
};

Fit log_fit(const std::vector<int>& ns, const std::vector<double>& ms) {
  const double k = static_cast<double>(ns.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = std::log(static_cast<double>(ns[i]));
    sx += x;
    sy += ms[i];
    sxx += x * x;
    sxy += x * ms[i];
  }
  Fit f;
  f.b = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  f.a = (sy - f.b * sx) / k;
  const double mean = sy / k;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double pred = f.a + f.b * std::log(static_cast<double>(ns[i]));
    ss_res += (ms[i] - pred) * (ms[i] - pred);
    ss_tot += (ms[i] - mean) * (ms[i] - mean);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

Outcome log_scaling() {
  const std::vector<int> ns{8, 16, 32, 64};
  bool pass = true;
  std::string detail;
  for (EnsembleKind kind : {EnsembleKind::Star, EnsembleKind::Chain}) {
    SweepSpec sw;
    sw.base.ensemble.kind = kind;
    sw.base.field = Field::Complex;
    sw.base.generator_mean_re = 1.0;
    sw.base.recovery.scheme = Scheme::Heuristic;
    sw.base.trials = 20;
    sw.base.seed = 1;
    sw.n_list = ns;
    sw.schemes = {Scheme::Heuristic};
    sw.m_start = 2;
    SweepResult r = sample_complexity_sweep(sw);
    std::vector<double> ms;
    std::string seq;
    bool saturated = false;
    for (const auto& mm : r.minimal) {
      ms.push_back(mm.mean);
      saturated |= mm.saturated;
      seq += (seq.empty() ? "" : ",") + show(mm.m);
    }
    Fit f = log_fit(ns, ms);
    const double ratio = ms.back() / ms.front();
    const bool ok = !saturated && f.r2 >= 0.8 && ratio < 8.0;
    pass &= ok;
    detail += fmt("%s m=(%s) R2=%.3f m(64)/m(8)=%.2f; ", to_string(kind).c_str(), seq.c_str(), f.r2, ratio);
  }
  return {pass, detail.substr(0, detail.size() - 2)};
}

// ---------------------------------------------------------------------------
// 5, 6. sparsity Monte-Carlo

Outcome tree_sparsity() {
  EnsembleSpec spec;
  spec.n = 50;
  Rng rng(5);
  RhoEstimate e = estimate_rho(spec, 5, 10, 2000, rng);
  const double bound = tree_sparsity_profile(5, 10).rho;
  return {e.rho + e.half_width <= bound,
          fmt("empirical %.4f (+%.4f at 95%%) vs 1/K = %.2f", e.rho, e.half_width, bound)};
}

Outcome er_sparsity() {
  SparsityProfile prof = er_sparsity_profile(40, 0.05, 5);
  EnsembleSpec spec;
  spec.kind = EnsembleKind::ErdosRenyi;
  spec.n = 40;
  spec.p = 0.05;
  Rng rng(6);
  RhoEstimate e = estimate_rho(spec, prof.mu, 5, 2000, rng);
  return {e.rho <= prof.rho + e.half_width,
          fmt("mu=%d: empirical %.4f vs rho %.3g + %.4f", prof.mu, e.rho, prof.rho, e.half_width)};
}

// ---------------------------------------------------------------------------
// 7. bound arithmetic

Outcome bound_arithmetic() {
  BoundInputs in;
  in.n = 100;
  in.m = 1;
  in.sigma_S = 1.0;
  in.Y_bar = 1.0;
  in.entropy_nats = 98.0 * std::log(100.0);
  const double floor = fano_floor_noiseless(in);
  const auto mstar = min_measurements(in, 0.5, false);
  const long long suff = sufficient_m_noiseless(4, 2, 64).m;
  const double h3 = entropy_uniform_trees(3);
  const bool ok = std::abs(floor - 0.6855) <= 1e-3 && mstar == 2 && suff == 2116 && h3 == std::log(3.0);
  return {ok, fmt("floor %.4f, m* %s, sufficient m %lld, H(T(3)) %.17g", floor, show(mstar).c_str(), suff, h3)};
}

// ---------------------------------------------------------------------------
// 8. noise robustness

Outcome noise_robustness() {
  const std::vector<double> sigma2{1e-6, 1e-4, 1e-2};
  const std::vector<int> ms{12, 18, 24};
  std::vector<std::vector<TrialSummary>> grid(sigma2.size());
  for (std::size_t a = 0; a < sigma2.size(); ++a) {
    for (int m : ms) {
      TrialSpec t;
      t.ensemble.n = 24;
      t.m = m;
      t.field = Field::Complex;
      t.generator_mean_re = 1.0;
      t.sigma_N = std::sqrt(sigma2[a]);
      t.recovery.scheme = Scheme::Heuristic;
      t.trials = 20;
      t.seed = 8;
      grid[a].push_back(run_trials(t));
    }
  }
  auto soft_le = [](const TrialSummary& lo, const TrialSummary& hi) {
    return lo.mean_frob <= hi.mean_frob + lo.ci_frob + hi.ci_frob;
  };
  int violations = 0, strict = 0, pairs = 0;
  for (std::size_t a = 0; a < sigma2.size(); ++a)
    for (std::size_t b = 0; b < ms.size(); ++b) {
      if (a + 1 < sigma2.size()) {
        ++pairs;
        violations += !soft_le(grid[a][b], grid[a + 1][b]);
        strict += grid[a][b].mean_frob < grid[a + 1][b].mean_frob;
      }
      if (b + 1 < ms.size()) {
        ++pairs;
        violations += !soft_le(grid[a][b + 1], grid[a][b]);
        strict += grid[a][b + 1].mean_frob < grid[a][b].mean_frob;
      }
    }
  std::string table;
  for (std::size_t a = 0; a < sigma2.size(); ++a) {
    table += fmt(" s2=%.0e:", sigma2[a]);
    for (std::size_t b = 0; b < ms.size(); ++b) table += fmt(" %.2e", grid[a][b].mean_frob);
  }
  return {violations == 0,
          fmt("%d/%d pairs strictly monotone, %d outside bands;", strict, pairs, violations) + table};
}

// ---------------------------------------------------------------------------
// 9. diagnostics against brute force

Outcome diagnostics_bruteforce() {
  Rng rng(9);
  int agree = 0;
  std::string problem;
  for (int k = 0; k < 20; ++k) {
    const int n = 4 + static_cast<int>(rng.below(7));
    const int m = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 2)));
    const int K = 1 + static_cast<int>(rng.below(2));
    const int mu = 1 + static_cast<int>(rng.below(3));
    CMatrix B(m, n);
    const bool complex = k % 3 == 2;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < m; ++i)
        B(i, j) = cplx(rng.normal(0, 1), complex ? rng.normal(0, 1) : 0.0) / std::sqrt(static_cast<double>(m));
    if (k % 4 == 1) B.col(n - 1) = B.col(0) - 0.5 * B.col(1);
    if (k % 5 == 3) B.col(1) = 2.0 * B.col(0);

    const bool sp = spark(B) == oracle::spark(B);
    const double r_lib = ric(B, mu), r_or = oracle::ric(B, mu);
    const bool rc = std::abs(r_lib - r_or) <= 1e-9 * std::max(1.0, r_or);
    const double x_lib = xi(B, K).value, x_or = oracle::xi(B, K);
    const bool xc = (std::isinf(x_lib) && std::isinf(x_or)) ||
                    std::abs(x_lib - x_or) <= 1e-9 * std::max(1.0, std::abs(x_or));
    agree += sp && rc && xc;
    if (!(sp && rc && xc) && problem.empty())
      problem = fmt("; matrix %d (%dx%d) disagrees: spark %d/%d ric %.12g/%.12g xi %.12g/%.12g", k, m, n,
                    spark(B), oracle::spark(B), r_lib, r_or, x_lib, x_or);
  }
  return {agree == 20, fmt("%d/20 matrices agree on spark, ric and xi", agree) + problem};
}

// ---------------------------------------------------------------------------
// 10. determinism

Outcome determinism() {
  auto run = [](int jobs) {
    SweepSpec sw;
    sw.base.ensemble.kind = EnsembleKind::UniformTree;
    sw.base.trials = 8;
    sw.base.seed = 10;
    sw.base.jobs = jobs;
    sw.base.sigma_N = 1e-3;
    sw.n_list = {8, 12};
    sw.schemes = {Scheme::Heuristic, Scheme::ThreeStage, Scheme::ColumnBP};
    sw.m_start = 3;
    std::ostringstream out;
    write_sweep_csv(out, sample_complexity_sweep(sw));
    return out.str();
  };
  const std::string a = run(1), b = run(1), c = run(2);
  return {a == b && a == c, fmt("%zu bytes; repeat %s, jobs=2 %s", a.size(), a == b ? "identical" : "differs",
                                a == c ? "identical" : "differs")};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "solver correctness", 60, solver_correctness},
      {2, "three-stage exactness", 120, three_stage_exactness},
      {3, "star separation", 600, star_separation},
      {4, "logarithmic scaling", 1200, log_scaling},
      {5, "tree sparsity Monte-Carlo", 60, tree_sparsity},
      {6, "Erdos-Renyi sparsity Monte-Carlo", 60, er_sparsity},
      {7, "bound arithmetic", 1, bound_arithmetic},
      {8, "noise robustness", 600, noise_robustness},
      {9, "diagnostics brute force", 60, diagnostics_bruteforce},
      {10, "determinism", 120, determinism},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %d (%s): %s [%.1fs of %.0fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
