#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "graphrec/ensembles.hpp"
#include "graphrec/graph.hpp"
#include "graphrec/recovery.hpp"

namespace graphrec {

struct Metrics {
  bool topo_ok = false;   // support(X, threshold) equals the true edge set
  bool sign_ok = false;   // real: entrywise sign agreement; complex: same as topo_ok
  double frob = 0.0;      // ||X - Y||_F
  double frob_normalized = 0.0;  // ||X - Y||_F / n^2
};

Metrics metrics(const CMatrix& X, const GraphMatrix& Y, double topo_threshold = 1e-5);

// Identity: B is the first m rows of the n x n identity.
enum class GeneratorPreset { Gaussian, Identity };

struct TrialSpec {
  EnsembleSpec ensemble;
  Index m = 1;
  Field field = Field::Complex;
  double sigma_S = 1.0;
  double sigma_N = 0.0;
  bool scale_sigma_S = false;      // use sigma_S = 1 / sqrt(m)
  double generator_mean_re = 0.0;  // mean of Re B_ij
  GeneratorPreset generator = GeneratorPreset::Gaussian;
  WeightSampler weights;           // field is taken from `field`
  RecoveryConfig recovery;
  // Replace recovery.gamma by sqrt(n) sigma_N (0 for noiseless data).
  bool auto_gamma = true;
  int trials = 20;
  std::uint64_t seed = 0;
  double topo_threshold = 1e-5;
  std::optional<double> frob_threshold;  // default 1e-6 noiseless, 1e-4 noisy
  int jobs = 1;
  bool keep_logs = false;
  bool timing = false;  // record wall-clock times (breaks byte-identical output)

  void validate() const;
  double param_threshold() const;
  double effective_sigma_S() const;
};

struct TrialLog {
  int index = 0;
  RecoveryStatus status = RecoveryStatus::Success;
  bool topo_ok = false;
  bool param_ok = false;
  double frob_normalized = 0.0;
  double runtime_ms = 0.0;
  std::string error;  // numerical failure message, if any
};

struct TrialSummary {
  double eps_T = 0.0;  // fraction of trials with a topology error
  double eps_P = 0.0;  // fraction with normalized Frobenius error above threshold
  double mean_frob = 0.0;  // mean normalized Frobenius error
  double ci_T = 0.0;       // 95% half-widths
  double ci_P = 0.0;
  double ci_frob = 0.0;
  double mean_runtime_ms = 0.0;
  int trials = 0;          // trials actually run
  int successes = 0;       // both criteria met
  bool stopped_early = false;
  std::vector<TrialLog> logs;
};

/// Trial t draws its graph, weights, B and noise from Rng(seed).split(t).
/// B is drawn with max(m, n) rows and truncated to m, so for a fixed seed
/// the data at m is a prefix of the data at m + 1.
struct TrialData {
  GraphMatrix Y;
  MeasurementSet ms;
  RecoveryConfig recovery;
};
TrialData make_trial(const TrialSpec& spec, int t);

/// With `max_failures` set, trials are evaluated in index order and the run
/// stops at the first trial that pushes the failure count past it.
TrialSummary run_trials(const TrialSpec& spec, std::optional<int> max_failures = std::nullopt);

enum class MStrategy { ScanUp, Grid };

struct SweepSpec {
  TrialSpec base;
  std::vector<int> n_list;
  std::vector<Scheme> schemes;
  MStrategy strategy = MStrategy::ScanUp;
  std::vector<int> m_grid;  // Grid
  int m_start = 1;          // ScanUp
  int m_step = 1;
  double q = 0.9;           // ScanUp success fraction
  bool per_trial_min = false;  // ScanUp: average the per-trial minimal m instead
  bool early_stop = true;

  void validate() const;
};

struct SweepRow {
  int n = 0;
  int m = 0;
  Scheme scheme = Scheme::Heuristic;
  double topo_err = 0.0;
  double param_err = 0.0;
  double mean_frob = 0.0;
  double runtime_ms = 0.0;
  int trials = 0;
};

struct MinimalM {
  int n = 0;
  Scheme scheme = Scheme::Heuristic;
  std::optional<int> m;  // empty when saturated
  double mean = 0.0;     // per-trial mode: average per-trial minimal m
  bool saturated = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<MinimalM> minimal;  // ScanUp only
};

SweepResult sample_complexity_sweep(const SweepSpec& spec);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_sweep_csv(const std::string& path, const SweepResult& result);

/// RecoveryResult as JSON (matrix itself goes to a matrix CSV).
std::string status_json(const RecoveryResult& r, const std::optional<Metrics>& m = std::nullopt,
                        bool include_timing = false);
void emit_result(const std::string& matrix_path, const std::string& status_path,
                 const RecoveryResult& r, const std::optional<Metrics>& m = std::nullopt,
                 bool include_timing = false);

}  // namespace graphrec
