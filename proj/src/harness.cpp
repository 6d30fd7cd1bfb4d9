#include "graphrec/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "graphrec/bounds.hpp"
#include "graphrec/io.hpp"
#include "graphrec/parallel.hpp"

namespace graphrec {

Metrics metrics(const CMatrix& X, const GraphMatrix& Y, double topo_threshold) {
  const Index n = Y.n();
  if (X.rows() != n || X.cols() != n)
    throw ShapeError("metrics: X is " + std::to_string(X.rows()) + "x" + std::to_string(X.cols()) +
                     ", Y is " + std::to_string(n) + "x" + std::to_string(n));
  require_config(topo_threshold > 0.0, "metrics: threshold must be positive");
  Metrics out;
  out.frob = (X - Y.values()).norm();
  out.frob_normalized = out.frob / static_cast<double>(n * n);
  out.topo_ok = support(X, topo_threshold).edges() == Y.graph().edges();
  if (Y.field() == Field::Complex) {
    out.sign_ok = out.topo_ok;
  } else {
    auto sgn = [&](double v, double thr) { return std::abs(v) < thr ? 0 : (v > 0 ? 1 : -1); };
    out.sign_ok = true;
    for (Index j = 0; j < n && out.sign_ok; ++j)
      for (Index i = 0; i < n; ++i)
        if (sgn(X(i, j).real(), topo_threshold) != sgn(Y(i, j).real(), 0.0)) {
          out.sign_ok = false;
          break;
        }
  }
  return out;
}

void TrialSpec::validate() const {
  ensemble.validate();
  require_config(trials >= 1, "trials must be >= 1");
  require_config(m >= 1 && m <= ensemble.n, "m must lie in [1, n]");
  require_config(sigma_S > 0.0 && sigma_N >= 0.0, "need sigma_S > 0 and sigma_N >= 0");
  require_config(topo_threshold > 0.0, "topology threshold must be positive");
  require_config(!frob_threshold || *frob_threshold > 0.0, "Frobenius threshold must be positive");
  require_config(jobs >= 1, "jobs must be >= 1");
  recovery.validate(ensemble.n);
}

double TrialSpec::param_threshold() const {
  if (frob_threshold) return *frob_threshold;
  return sigma_N == 0.0 ? 1e-6 : 1e-4;
}

double TrialSpec::effective_sigma_S() const {
  return scale_sigma_S ? 1.0 / std::sqrt(static_cast<double>(m)) : sigma_S;
}

TrialData make_trial(const TrialSpec& spec, int t) {
  const Rng trial = Rng(spec.seed).split(static_cast<std::uint64_t>(t));
  Rng graph_rng = trial.split(0);
  Rng weight_rng = trial.split(1);
  Rng gen_rng = trial.split(2);
  Rng noise_rng = trial.split(3);
  const int n = spec.ensemble.n;

  Graph g = sample(spec.ensemble, graph_rng);
  WeightSampler ws = spec.weights;
  ws.field = spec.field;
  TrialData d;
  d.Y = build_graph_matrix(g, ws, weight_rng);

  CMatrix B;
  if (spec.generator == GeneratorPreset::Identity) {
    B = CMatrix::Identity(std::max<Index>(spec.m, n), n);
  } else {
    const Index rows = std::max<Index>(spec.m, n);
    B = sample_generator(rows, n, spec.field, spec.effective_sigma_S(), gen_rng,
                         spec.generator_mean_re);
  }
  MeasurementSet full = synthesize(B, d.Y, spec.sigma_N, noise_rng, spec.effective_sigma_S());
  d.ms = full;
  d.ms.B = full.B.topRows(spec.m);
  d.ms.A = full.A.topRows(spec.m);

  d.recovery = spec.recovery;
  d.recovery.seed = trial.split(4).seed();
  d.recovery.jobs = 1;
  if (spec.auto_gamma) d.recovery.gamma = default_gamma(n, spec.sigma_N);
  return d;
}

namespace {

TrialLog run_one(const TrialSpec& spec, int t) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  TrialLog log;
  log.index = t;
  TrialData d = make_trial(spec, t);
  try {
    RecoveryResult r = recover(d.ms, d.recovery);
    log.status = r.status;
    if (r.status == RecoveryStatus::Success) {
      Metrics mt = metrics(r.X, d.Y, spec.topo_threshold);
      log.topo_ok = mt.topo_ok;
      log.frob_normalized = mt.frob_normalized;
      log.param_ok = mt.frob_normalized < spec.param_threshold();
    } else {
      log.frob_normalized = metrics(r.X, d.Y, spec.topo_threshold).frob_normalized;
      log.error = r.message;
    }
  } catch (const NumericalError& e) {
    log.status = RecoveryStatus::SolverFailed;
    log.error = e.what();
    log.frob_normalized = std::numeric_limits<double>::infinity();
  }
  if (!std::isfinite(log.frob_normalized)) log.param_ok = false;
  if (spec.timing) log.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return log;
}

bool succeeded(const TrialLog& l) { return l.topo_ok && l.param_ok; }

TrialSummary summarize(std::vector<TrialLog> logs, bool keep) {
  TrialSummary s;
  s.trials = static_cast<int>(logs.size());
  int topo_fail = 0, param_fail = 0, finite = 0;
  double frob_sum = 0.0, frob_sq = 0.0, runtime = 0.0;
  for (const auto& l : logs) {
    topo_fail += !l.topo_ok;
    param_fail += !l.param_ok;
    s.successes += succeeded(l);
    runtime += l.runtime_ms;
    if (std::isfinite(l.frob_normalized)) {
      ++finite;
      frob_sum += l.frob_normalized;
      frob_sq += l.frob_normalized * l.frob_normalized;
    }
  }
  if (s.trials > 0) {
    s.eps_T = static_cast<double>(topo_fail) / s.trials;
    s.eps_P = static_cast<double>(param_fail) / s.trials;
    s.ci_T = binomial_half_width(s.eps_T, s.trials);
    s.ci_P = binomial_half_width(s.eps_P, s.trials);
    s.mean_runtime_ms = runtime / s.trials;
  }
  if (finite > 0) {
    s.mean_frob = frob_sum / finite;
    if (finite > 1) {
      double var = std::max(0.0, (frob_sq - finite * s.mean_frob * s.mean_frob) / (finite - 1));
      s.ci_frob = 1.96 * std::sqrt(var / finite);
    }
  }
  if (finite < s.trials) s.mean_frob = std::numeric_limits<double>::infinity();
  if (keep) s.logs = std::move(logs);
  return s;
}

}  // namespace

TrialSummary run_trials(const TrialSpec& spec, std::optional<int> max_failures) {
  spec.validate();
  std::vector<TrialLog> logs;
  if (!max_failures) {
    logs.resize(static_cast<std::size_t>(spec.trials));
    parallel_for(spec.trials, spec.jobs, [&](int t) { logs[t] = run_one(spec, t); });
    return summarize(std::move(logs), spec.keep_logs);
  }
  // Chunks of `jobs` trials; the stopping index depends only on the trial
  // outcomes, never on the chunking.
  int failures = 0;
  bool stop = false;
  for (int start = 0; start < spec.trials && !stop; start += spec.jobs) {
    const int count = std::min(spec.jobs, spec.trials - start);
    std::vector<TrialLog> chunk(static_cast<std::size_t>(count));
    parallel_for(count, spec.jobs, [&](int k) { chunk[k] = run_one(spec, start + k); });
    for (auto& l : chunk) {
      logs.push_back(std::move(l));
      if (!succeeded(logs.back()) && ++failures > *max_failures) {
        stop = true;
        break;
      }
    }
  }
  TrialSummary s = summarize(std::move(logs), spec.keep_logs);
  s.stopped_early = stop && s.trials < spec.trials;
  return s;
}

void SweepSpec::validate() const {
  require_config(!n_list.empty(), "sweep: n list must not be empty");
  require_config(!schemes.empty(), "sweep: at least one scheme is required");
  require_config(q > 0.0 && q <= 1.0, "sweep: q must lie in (0, 1]");
  require_config(m_start >= 1 && m_step >= 1, "sweep: m start and step must be >= 1");
  for (int n : n_list) require_config(n >= 2, "sweep: n must be >= 2");
  if (strategy == MStrategy::Grid) {
    require_config(!m_grid.empty(), "sweep: grid strategy needs an m grid");
    for (int m : m_grid) require_config(m >= 1, "sweep: grid values must be >= 1");
  }
}

namespace {

TrialSpec spec_for(const SweepSpec& sw, int n, int m, Scheme scheme) {
  TrialSpec t = sw.base;
  t.ensemble.n = n;
  t.m = m;
  t.recovery.scheme = scheme;
  return t;
}

SweepRow row_of(int n, int m, Scheme scheme, const TrialSummary& s) {
  return {n, m, scheme, s.eps_T, s.eps_P, s.mean_frob, s.mean_runtime_ms, s.trials};
}

}  // namespace

SweepResult sample_complexity_sweep(const SweepSpec& sw) {
  sw.validate();
  SweepResult out;
  const int trials = sw.base.trials;
  for (int n : sw.n_list) {
    for (Scheme scheme : sw.schemes) {
      if (sw.strategy == MStrategy::Grid) {
        for (int m : sw.m_grid) out.rows.push_back(row_of(n, m, scheme, run_trials(spec_for(sw, n, m, scheme))));
        continue;
      }
      MinimalM mm;
      mm.n = n;
      mm.scheme = scheme;
      if (sw.per_trial_min) {
        // Smallest succeeding m for every trial separately; saturated trials count as n.
        std::vector<int> per(static_cast<std::size_t>(trials), -1);
        std::vector<double> frob(static_cast<std::size_t>(trials), 0.0);
        std::vector<double> runtime(static_cast<std::size_t>(trials), 0.0);
        parallel_for(trials, sw.base.jobs, [&](int t) {
          for (int m = std::min(sw.m_start, n); m <= n; m += sw.m_step) {
            TrialSpec ts = spec_for(sw, n, m, scheme);
            TrialLog l = run_one(ts, t);
            frob[t] = l.frob_normalized;
            runtime[t] += l.runtime_ms;
            if (succeeded(l)) {
              per[t] = m;
              return;
            }
          }
        });
        int saturated = 0;
        double sum = 0.0, fsum = 0.0, rsum = 0.0;
        for (int t = 0; t < trials; ++t) {
          saturated += per[t] < 0;
          sum += per[t] < 0 ? n : per[t];
          fsum += frob[t];
          rsum += runtime[t];
        }
        mm.mean = sum / trials;
        mm.saturated = saturated > 0;
        mm.m = static_cast<int>(std::ceil(mm.mean));
        double sat = static_cast<double>(saturated) / trials;
        out.rows.push_back({n, *mm.m, scheme, sat, sat, fsum / trials, rsum / trials, trials});
        out.minimal.push_back(mm);
        continue;
      }
      const int allowed = static_cast<int>(std::floor((1.0 - sw.q) * trials + 1e-9));
      const int needed = trials - allowed;
      for (int m = std::min(sw.m_start, n); m <= n; m += sw.m_step) {
        TrialSpec ts = spec_for(sw, n, m, scheme);
        TrialSummary s = run_trials(ts, sw.early_stop ? std::optional<int>(allowed) : std::nullopt);
        out.rows.push_back(row_of(n, m, scheme, s));
        if (s.trials == trials && s.successes >= needed) {
          mm.m = m;
          mm.mean = m;
          break;
        }
      }
      mm.saturated = !mm.m;
      if (mm.saturated) mm.mean = n;
      out.minimal.push_back(mm);
    }
  }
  auto key = [](const SweepRow& r) { return std::make_tuple(r.n, static_cast<int>(r.scheme), r.m); };
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [&](const SweepRow& a, const SweepRow& b) { return key(a) < key(b); });
  return out;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "n,m,scheme,topo_err,param_err,mean_frob,runtime_ms,trials\n";
  char buf[256];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%s,%.6g,%.6g,%.10g,%.6g,%d\n", r.n, r.m,
                  to_string(r.scheme).c_str(), r.topo_err, r.param_err, r.mean_frob, r.runtime_ms,
                  r.trials);
    out << buf;
  }
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  write_sweep_csv(out, result);
}

std::string status_json(const RecoveryResult& r, const std::optional<Metrics>& m, bool include_timing) {
  nlohmann::ordered_json j;
  j["scheme"] = to_string(r.scheme);
  j["status"] = to_string(r.status);
  j["n"] = r.X.rows();
  if (!r.message.empty()) j["message"] = r.message;
  if (r.scheme == Scheme::ThreeStage && r.status != RecoveryStatus::ConsistencyFailed) {
    std::vector<int> s;
    for (int v : r.accepted) s.push_back(v + 1);
    j["accepted"] = s;
  }
  if (!r.fixed.empty()) {
    nlohmann::ordered_json its = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < r.fixed.size(); ++k) {
      nlohmann::ordered_json it;
      std::vector<int> fixed;
      for (int v : r.fixed[k]) fixed.push_back(v + 1);
      it["fixed"] = fixed;
      nlohmann::ordered_json scores = nlohmann::ordered_json::array();
      for (auto [col, sc] : r.scores[k]) scores.push_back({{"column", col + 1}, {"score", sc}});
      it["scores"] = scores;
      its.push_back(it);
    }
    j["iterations"] = its;
  }
  j["solves"] = r.solves;
  j["solver_iterations"] = r.solver_iterations;
  j["unconverged"] = r.unconverged;
  if (include_timing) j["elapsed_ms"] = r.elapsed_ms;
  if (m) {
    j["metrics"] = {{"topo_ok", m->topo_ok},
                    {"sign_ok", m->sign_ok},
                    {"frob", m->frob},
                    {"frob_normalized", m->frob_normalized}};
  }
  return j.dump(2);
}

void emit_result(const std::string& matrix_path, const std::string& status_path,
                 const RecoveryResult& r, const std::optional<Metrics>& m, bool include_timing) {
  write_matrix_csv(matrix_path, r.X);
  std::ofstream out(status_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + status_path);
  out << status_json(r, m, include_timing) << '\n';
}

}  // namespace graphrec
