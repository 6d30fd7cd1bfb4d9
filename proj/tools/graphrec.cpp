// graphrec: generate graphs and measurements, recover graph matrices, run
// sample-complexity sweeps, and evaluate bounds and matrix diagnostics.
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical
// failure, 4 refused by a size guard.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphrec/bounds.hpp"
#include "graphrec/diagnostics.hpp"
#include "graphrec/ensembles.hpp"
#include "graphrec/harness.hpp"
#include "graphrec/io.hpp"
#include "graphrec/recovery.hpp"

using namespace graphrec;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitSizeGuard = 4;

// Reads a JSON config file. Top-level keys are options of the main command;
// an object keyed by a subcommand name holds that subcommand's options:
//   {"sweep": {"ensemble": "star", "n-list": [8, 16], "seed": 7}}
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames()[0];
      if (opt->count() > 0) {
        auto res = opt->results();
        j[name] = res.size() == 1 ? json(res[0]) : json(res);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      auto text = to_config(sub, default_also, false, "");
      json child = json::parse(text);
      if (!child.empty()) j[sub->get_name()] = child;
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      j = json::parse(input);
    } catch (const json::parse_error& e) {
      throw CLI::ConversionError("config file: " + std::string(e.what()));
    }
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const json& j, std::vector<std::string> parents,
                      std::vector<CLI::ConfigItem>& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_object()) {
        auto p = parents;
        p.push_back(it.key());
        // Register the subcommand itself so CLI11 activates it.
        out.push_back({parents, it.key(), {}});
        flatten(*it, p, out);
        out.push_back({p, "--", {}});
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_array())
        for (const auto& v : *it) item.inputs.push_back(scalar(v));
      else
        item.inputs.push_back(scalar(*it));
      out.push_back(std::move(item));
    }
  }
};

struct EnsembleOpts {
  std::string kind = "tree";
  int n = 10;
  double p = 0.1;
  std::string graph;

  void add(CLI::App* app) {
    app->add_option("--ensemble", kind, "tree, er, star, chain or fixed")->capture_default_str();
    app->add_option("--n", n, "number of nodes")->capture_default_str();
    app->add_option("--p", p, "edge probability (er)")->capture_default_str();
    app->add_option("--graph", graph, "graph CSV (fixed)");
  }

  EnsembleSpec spec(std::uint64_t seed) const {
    EnsembleSpec s;
    s.kind = ensemble_kind_from_string(kind);
    s.n = n;
    s.p = p;
    s.seed = seed;
    if (s.kind == EnsembleKind::Fixed) {
      require_config(!graph.empty(), "--graph is required for the fixed ensemble");
      s.fixed = read_graph_csv(graph, n).graph;
    }
    s.validate();
    return s;
  }
};

struct WeightOpts {
  std::string kind = "box";
  double bound = 100.0;
  double floor = 1.0;
  bool physical = false;

  void add(CLI::App* app) {
    app->add_option("--weights", kind, "box (uniform re/im) or unit")->capture_default_str();
    app->add_option("--weight-bound", bound, "box half-width")->capture_default_str();
    app->add_option("--weight-floor", floor, "minimum off-diagonal magnitude")->capture_default_str();
    app->add_flag("--physical", physical, "off-diagonal Re <= 0, Im >= 0");
  }

  WeightSampler sampler(Field field) const {
    WeightSampler w;
    w.field = field;
    w.physical = physical;
    if (kind == "unit") {
      w.kind = WeightSampler::Kind::Constant;
      w.constant = physical ? cplx(-1.0, 0.0) : cplx(1.0, 0.0);
    } else {
      require_config(kind == "box", "--weights must be box or unit");
      require_config(bound > 0.0 && floor >= 0.0 && floor < bound, "need 0 <= floor < bound");
      w.bound = bound;
      w.floor = floor;
    }
    return w;
  }
};

struct RecoveryOpts {
  std::string scheme = "heuristic";
  double gamma = 0.0;
  int K = 1;
  int s = 0;
  bool cones = false;
  int max_iters = 20000;
  double tol = 1e-9;
  double consistency_tol = 1e-6;

  void add(CLI::App* app, bool with_gamma) {
    app->add_option("--scheme", scheme,
                    "three-stage, heuristic, column-bp, vectorized-bp, vectorized-bp-sym")
        ->capture_default_str();
    if (with_gamma) app->add_option("--gamma", gamma, "residual radius")->capture_default_str();
    app->add_option("--K", K, "three-stage: columns allowed to be inconsistent")->capture_default_str();
    app->add_option("--s", s, "heuristic: columns fixed per iteration (0 = ceil(n/2))")
        ->capture_default_str();
    app->add_flag("--cones", cones, "admittance sign constraints");
    app->add_option("--max-iters", max_iters, "solver iteration limit")->capture_default_str();
    app->add_option("--tol", tol, "solver tolerance")->capture_default_str();
    app->add_option("--consistency-tol", consistency_tol, "relative slack of the symmetry test")
        ->capture_default_str();
  }

  RecoveryConfig config(std::uint64_t seed, int jobs) const {
    RecoveryConfig c;
    c.scheme = scheme_from_string(scheme);
    c.gamma = gamma;
    c.K = K;
    c.s = s;
    c.admittance_cones = cones;
    c.solver.max_iters = max_iters;
    c.solver.tol = tol;
    c.consistency_tol = consistency_tol;
    c.seed = seed;
    c.jobs = jobs;
    return c;
  }
};

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recover symmetric graph matrices from linear measurements A = B Y + Z"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON configuration file");
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int jobs = 1;
  std::string field_name = "complex";

  // gen-graph
  auto* gen_graph = app.add_subcommand("gen-graph", "sample a graph and write its graph matrix");
  EnsembleOpts gg_ens;
  WeightOpts gg_w;
  std::string gg_out, gg_matrix;
  gg_ens.add(gen_graph);
  gg_w.add(gen_graph);
  gen_graph->add_option("--field", field_name, "real or complex")->capture_default_str();
  gen_graph->add_option("--seed", seed, "random seed")->required();
  gen_graph->add_option("--out", gg_out, "graph CSV to write")->required();
  gen_graph->add_option("--matrix-out", gg_matrix, "also write the dense graph matrix");

  // gen-data
  auto* gen_data = app.add_subcommand("gen-data", "sample B and A = B Y + Z for a graph");
  EnsembleOpts gd_ens;
  WeightOpts gd_w;
  int gd_m = 0;
  double gd_sigma_s = 1.0, gd_sigma_n = 0.0, gd_mean_re = 0.0;
  std::string gd_dir, gd_graph_in;
  gd_ens.add(gen_data);
  gd_w.add(gen_data);
  gen_data->add_option("--graph-matrix", gd_graph_in, "use Y from a dense matrix CSV");
  gen_data->add_option("--m", gd_m, "number of measurements")->required();
  gen_data->add_option("--field", field_name, "real or complex")->capture_default_str();
  gen_data->add_option("--sigma-s", gd_sigma_s, "generator standard deviation")->capture_default_str();
  gen_data->add_option("--sigma-n", gd_sigma_n, "noise standard deviation")->capture_default_str();
  gen_data->add_option("--mean-re", gd_mean_re, "mean of Re B")->capture_default_str();
  gen_data->add_option("--seed", seed, "random seed")->required();
  gen_data->add_option("--out-dir", gd_dir, "directory for B.csv, A.csv, Y.csv, manifest.json")
      ->required();

  // recover
  auto* rec = app.add_subcommand("recover", "recover Y from a measurement manifest");
  RecoveryOpts rc;
  std::string rc_manifest, rc_out, rc_status;
  bool rc_timing = false;
  bool rc_auto_gamma = false;
  rc.add(rec, true);
  rec->add_option("--manifest", rc_manifest, "measurement manifest")->required();
  rec->add_flag("--auto-gamma", rc_auto_gamma, "gamma = sqrt(n) sigma_N from the manifest");
  rec->add_option("--seed", seed, "random seed")->required();
  rec->add_option("--jobs", jobs, "parallel column solves")->capture_default_str();
  rec->add_option("--out", rc_out, "estimated matrix CSV")->required();
  rec->add_option("--status", rc_status, "status JSON (default: <out>.json)");
  rec->add_flag("--timing", rc_timing, "include wall-clock time in the status");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sample-complexity sweep");
  EnsembleOpts sw_ens;
  WeightOpts sw_w;
  RecoveryOpts sw_rec;
  std::vector<int> sw_n, sw_grid;
  std::vector<std::string> sw_schemes{"heuristic"};
  std::string sw_strategy = "scan", sw_out, sw_generator = "gaussian";
  int sw_trials = 20, sw_m_start = 1, sw_m_step = 1;
  double sw_q = 0.9, sw_sigma_s = 1.0, sw_sigma_n = 0.0, sw_mean_re = 0.0;
  double sw_frob = 0.0, sw_topo = 1e-5;
  bool sw_per_trial = false, sw_timing = false, sw_scale_s = false;
  sw_ens.add(sweep);
  sw_w.add(sweep);
  sw_rec.add(sweep, false);
  sweep->add_option("--n-list", sw_n, "graph sizes")->delimiter(',')->required();
  sweep->add_option("--schemes", sw_schemes, "schemes to compare")->delimiter(',');
  sweep->add_option("--strategy", sw_strategy, "scan or grid")->capture_default_str();
  sweep->add_option("--m-grid", sw_grid, "m values for the grid strategy")->delimiter(',');
  sweep->add_option("--m-start", sw_m_start, "first m of the scan")->capture_default_str();
  sweep->add_option("--m-step", sw_m_step, "scan increment")->capture_default_str();
  sweep->add_option("--q", sw_q, "required success fraction")->capture_default_str();
  sweep->add_flag("--per-trial-min", sw_per_trial, "average per-trial minimal m instead");
  sweep->add_option("--trials", sw_trials, "trials per point")->capture_default_str();
  sweep->add_option("--field", field_name, "real or complex")->capture_default_str();
  sweep->add_option("--generator", sw_generator, "gaussian or identity")->capture_default_str();
  sweep->add_option("--sigma-s", sw_sigma_s, "generator standard deviation")->capture_default_str();
  sweep->add_flag("--sigma-s-per-m", sw_scale_s, "use sigma_S = 1/sqrt(m)");
  sweep->add_option("--sigma-n", sw_sigma_n, "noise standard deviation")->capture_default_str();
  sweep->add_option("--mean-re", sw_mean_re, "mean of Re B")->capture_default_str();
  sweep->add_option("--frob-threshold", sw_frob, "normalized Frobenius threshold (0 = default)");
  sweep->add_option("--topo-threshold", sw_topo, "support threshold")->capture_default_str();
  sweep->add_option("--seed", seed, "random seed")->required();
  sweep->add_option("--jobs", jobs, "parallel trials")->capture_default_str();
  sweep->add_option("--out", sw_out, "sweep CSV")->required();
  sweep->add_flag("--timing", sw_timing, "record runtimes (output no longer reproducible)");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "information-theoretic and achievability bounds");
  int b_n = 10, b_m = 1, b_mu = 4, b_K = 1;
  double b_sigma_s = 1.0, b_sigma_n = 0.0, b_ybar = 1.0, b_p = 0.1, b_target = 0.5;
  std::string b_ensemble = "tree";
  double b_entropy = -1.0;
  bnd->add_option("--n", b_n, "number of nodes")->capture_default_str();
  bnd->add_option("--m", b_m, "number of measurements")->capture_default_str();
  bnd->add_option("--sigma-s", b_sigma_s)->capture_default_str();
  bnd->add_option("--sigma-n", b_sigma_n)->capture_default_str();
  bnd->add_option("--y-bar", b_ybar, "max |Y_ij|")->capture_default_str();
  bnd->add_option("--ensemble", b_ensemble, "tree or er (sets the entropy)")->capture_default_str();
  bnd->add_option("--p", b_p, "edge probability (er)")->capture_default_str();
  bnd->add_option("--entropy", b_entropy, "entropy in nats (overrides --ensemble)");
  bnd->add_option("--mu", b_mu, "degree threshold")->capture_default_str();
  bnd->add_option("--K", b_K, "number of high-degree nodes")->capture_default_str();
  bnd->add_option("--target", b_target, "target error probability")->capture_default_str();

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "spark, restricted isometry constant and xi of B");
  std::string d_matrix, d_manifest;
  int d_mu = 2, d_K = 1;
  bool d_normalize = false;
  diag->add_option("--matrix", d_matrix, "dense matrix CSV");
  diag->add_option("--manifest", d_manifest, "take B from a manifest");
  diag->add_option("--mu", d_mu, "subset size for the isometry constant")->capture_default_str();
  diag->add_option("--K", d_K, "subset size for xi")->capture_default_str();
  diag->add_flag("--normalize", d_normalize, "scale columns to unit norm first");

  // ingest-check
  auto* ing = app.add_subcommand("ingest-check", "validate a measurement manifest");
  std::string i_manifest;
  ing->add_option("--manifest", i_manifest, "measurement manifest")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen_graph) {
      const Field field = field_from_string(field_name);
      Rng rng(seed);
      EnsembleSpec es = gg_ens.spec(seed);
      Graph g = sample(es, rng);
      GraphMatrix y = build_graph_matrix(g, gg_w.sampler(field), rng);
      write_graph_csv(gg_out, y);
      if (!gg_matrix.empty()) write_matrix_csv(gg_matrix, y.values());
      print({{"n", g.n()}, {"edges", g.edge_count()}, {"connected", g.is_connected()}});
    } else if (*gen_data) {
      const Field field = field_from_string(field_name);
      Rng rng(seed);
      Rng graph_rng = rng.split(0), weight_rng = rng.split(1), gen_rng = rng.split(2),
          noise_rng = rng.split(3);
      GraphMatrix y;
      if (!gd_graph_in.empty()) {
        y = GraphMatrix(read_matrix_csv(gd_graph_in), field);
      } else {
        EnsembleSpec es = gd_ens.spec(seed);
        y = build_graph_matrix(sample(es, graph_rng), gd_w.sampler(field), weight_rng);
      }
      CMatrix B = sample_generator(gd_m, y.n(), field, gd_sigma_s, gen_rng, gd_mean_re);
      MeasurementSet ms = synthesize(B, y, gd_sigma_n, noise_rng, gd_sigma_s);
      auto path = emit_measurements(gd_dir, ms, seed, &y);
      print({{"manifest", path}, {"m", ms.m()}, {"n", ms.n()}});
    } else if (*rec) {
      Ingested in = ingest(rc_manifest);
      RecoveryConfig cfg = rc.config(seed, jobs);
      if (rc_auto_gamma) cfg.gamma = default_gamma(static_cast<int>(in.ms.n()), in.ms.sigma_N);
      RecoveryResult r = recover(in.ms, cfg);
      std::optional<Metrics> mt;
      if (in.truth) mt = metrics(r.X, *in.truth);
      if (rc_status.empty()) rc_status = rc_out + ".json";
      emit_result(rc_out, rc_status, r, mt, rc_timing);
      std::cout << status_json(r, mt, rc_timing) << '\n';
      if (r.status != RecoveryStatus::Success) return kExitNumerical;
    } else if (*sweep) {
      SweepSpec sw;
      sw.base.field = field_from_string(field_name);
      sw.base.ensemble = sw_ens.spec(seed);
      sw.base.weights = sw_w.sampler(sw.base.field);
      sw.base.recovery = sw_rec.config(seed, 1);
      sw.base.sigma_S = sw_sigma_s;
      sw.base.sigma_N = sw_sigma_n;
      sw.base.scale_sigma_S = sw_scale_s;
      sw.base.generator_mean_re = sw_mean_re;
      require_config(sw_generator == "gaussian" || sw_generator == "identity",
                     "--generator must be gaussian or identity");
      sw.base.generator =
          sw_generator == "identity" ? GeneratorPreset::Identity : GeneratorPreset::Gaussian;
      sw.base.trials = sw_trials;
      sw.base.seed = seed;
      sw.base.jobs = jobs;
      sw.base.timing = sw_timing;
      sw.base.topo_threshold = sw_topo;
      if (sw_frob > 0.0) sw.base.frob_threshold = sw_frob;
      sw.n_list = sw_n;
      for (const auto& s : sw_schemes) sw.schemes.push_back(scheme_from_string(s));
      require_config(sw_strategy == "scan" || sw_strategy == "grid", "--strategy must be scan or grid");
      sw.strategy = sw_strategy == "grid" ? MStrategy::Grid : MStrategy::ScanUp;
      sw.m_grid = sw_grid;
      sw.m_start = sw_m_start;
      sw.m_step = sw_m_step;
      sw.q = sw_q;
      sw.per_trial_min = sw_per_trial;
      SweepResult res = sample_complexity_sweep(sw);
      write_sweep_csv(sw_out, res);
      json mins = json::array();
      for (const auto& mm : res.minimal)
        mins.push_back({{"n", mm.n},
                        {"scheme", to_string(mm.scheme)},
                        {"minimal_m", mm.m ? json(*mm.m) : json(nullptr)},
                        {"mean", mm.mean},
                        {"saturated", mm.saturated}});
      print({{"out", sw_out}, {"rows", res.rows.size()}, {"minimal", mins}});
    } else if (*bnd) {
      BoundInputs in;
      in.n = b_n;
      in.m = b_m;
      in.sigma_S = b_sigma_s;
      in.sigma_N = b_sigma_n;
      in.Y_bar = b_ybar;
      in.mu = b_mu;
      in.K = b_K;
      json j;
      SparsityProfile prof;
      if (b_entropy >= 0.0) {
        in.entropy_nats = b_entropy;
      } else if (b_ensemble == "tree") {
        in.entropy_nats = entropy_uniform_trees(b_n);
        prof = tree_sparsity_profile(b_mu, b_K);
      } else if (b_ensemble == "er") {
        in.entropy_nats = entropy_er(b_n, b_p);
        prof = er_sparsity_profile(b_n, b_p, b_K);
      } else {
        throw ConfigError("--ensemble must be tree or er");
      }
      j["entropy_nats"] = in.entropy_nats;
      j["fano_floor_noiseless"] = fano_floor_noiseless(in);
      auto m0 = min_measurements(in, b_target, false);
      j["min_measurements_noiseless"] = m0 ? json(*m0) : json(nullptr);
      if (b_sigma_n > 0.0) {
        j["fano_floor_noisy"] = fano_floor_noisy(in);
        auto m1 = min_measurements(in, b_target, true);
        j["min_measurements_noisy"] = m1 ? json(*m1) : json(nullptr);
        j["gamma"] = default_gamma(b_n, b_sigma_n);
      }
      auto suff = sufficient_m_noiseless(b_mu, b_K, b_n);
      j["sufficient_m_noiseless"] = {{"m", suff.m}, {"valid", suff.valid}};
      if (b_entropy < 0.0)
        j["sparsity_profile"] = {
            {"mu", prof.mu}, {"K", prof.K}, {"rho", prof.rho}, {"degenerate", prof.degenerate}};
      print(j);
    } else if (*diag) {
      require_config(d_matrix.empty() != d_manifest.empty(), "give exactly one of --matrix, --manifest");
      CMatrix B = d_matrix.empty() ? ingest(d_manifest).ms.B : read_matrix_csv(d_matrix);
      if (d_normalize)
        for (Index j = 0; j < B.cols(); ++j)
          if (B.col(j).norm() > 0) B.col(j).normalize();
      json j;
      j["m"] = B.rows();
      j["n"] = B.cols();
      j["spark"] = spark(B);
      j["ric"] = {{"mu", d_mu}, {"delta", ric(B, d_mu)}};
      auto x = xi(B, d_K);
      j["xi"] = {{"K", d_K}, {"value", json_number(x.value)}, {"singular_blocks", x.singular_blocks}};
      print(j);
    } else if (*ing) {
      Ingested in = ingest(i_manifest);
      print({{"ok", true},
             {"m", in.ms.m()},
             {"n", in.ms.n()},
             {"field", to_string(in.ms.field)},
             {"has_truth", in.truth.has_value()}});
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SizeGuardError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitSizeGuard;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
