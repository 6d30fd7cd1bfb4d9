#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "graphrec/bounds.hpp"
#include "graphrec/diagnostics.hpp"
#include "graphrec/ensembles.hpp"
#include "graphrec/harness.hpp"
#include "graphrec/io.hpp"
#include "graphrec/recovery.hpp"
#include "graphrec/solver.hpp"

namespace py = pybind11;
using namespace graphrec;

namespace {

EnsembleSpec ensemble(const std::string& kind, int n, double p) {
  EnsembleSpec e;
  e.kind = ensemble_kind_from_string(kind);
  e.n = n;
  e.p = p;
  e.validate();
  return e;
}

py::list edge_list(const Graph& g) {
  py::list out;
  for (const auto& e : g.edges()) out.append(py::make_tuple(e.i, e.j));
  return out;
}

RecoveryConfig recovery_config(const std::string& scheme, double gamma, int K, int s, std::uint64_t seed,
                               bool cones, int jobs) {
  RecoveryConfig cfg;
  cfg.scheme = scheme_from_string(scheme);
  cfg.gamma = gamma;
  cfg.K = K;
  cfg.s = s;
  cfg.seed = seed;
  cfg.admittance_cones = cones;
  cfg.jobs = jobs;
  return cfg;
}

MeasurementSet measurements(const CMatrix& B, const CMatrix& A, double sigma_N) {
  MeasurementSet ms;
  ms.B = B;
  ms.A = A;
  ms.field = B.imag().isZero(0.0) && A.imag().isZero(0.0) ? Field::Real : Field::Complex;
  ms.sigma_N = sigma_N;
  ms.validate(true);
  return ms;
}

py::dict result_dict(const RecoveryResult& r) {
  py::dict d;
  d["X"] = r.X;
  d["status"] = to_string(r.status);
  d["scheme"] = to_string(r.scheme);
  d["accepted"] = r.accepted;
  d["fixed"] = r.fixed;
  d["solves"] = r.solves;
  d["solver_iterations"] = r.solver_iterations;
  d["message"] = r.message;
  return d;
}

}  // namespace

PYBIND11_MODULE(_graphrec, m) {
  m.doc() = "Sparse recovery of symmetric graph matrices from linear measurements";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<SizeGuardError>(m, "SizeGuardError", base.ptr());

  m.def(
      "sample_graph",
      [](const std::string& kind, int n, double p, std::uint64_t seed) {
        Rng rng(seed);
        return edge_list(sample(ensemble(kind, n, p), rng));
      },
      py::arg("kind"), py::arg("n"), py::arg("p") = 0.0, py::arg("seed") = 0,
      "Edges (i, j), i < j, 0-based, of a graph drawn from an ensemble.");

  m.def(
      "synthetic_problem",
      [](const std::string& kind, int n, int m_, const std::string& field, double sigma_S,
         double sigma_N, double mean_re, double p, std::uint64_t seed) {
        TrialSpec t;
        t.ensemble = ensemble(kind, n, p);
        t.m = m_;
        t.field = field_from_string(field);
        t.sigma_S = sigma_S;
        t.sigma_N = sigma_N;
        t.generator_mean_re = mean_re;
        t.seed = seed;
        t.validate();
        TrialData d = make_trial(t, 0);
        return py::make_tuple(d.Y.values(), d.ms.B, d.ms.A);
      },
      py::arg("kind"), py::arg("n"), py::arg("m"), py::arg("field") = "complex", py::arg("sigma_S") = 1.0,
      py::arg("sigma_N") = 0.0, py::arg("mean_re") = 0.0, py::arg("p") = 0.0, py::arg("seed") = 0,
      "(Y, B, A) with A = B Y + Z, drawn exactly as trial 0 of the Monte-Carlo harness.");

  m.def(
      "solve_l1",
      [](const CMatrix& B, const CVector& a, double gamma, int max_iters, double tol) {
        SolverOptions opts;
        opts.gamma = gamma;
        opts.max_iters = max_iters;
        opts.tol = tol;
        auto r = solve_l1<cplx>(B, a, opts);
        py::dict d;
        d["x"] = r.x;
        d["status"] = to_string(r.status);
        d["objective"] = r.objective;
        d["residual"] = r.residual;
        d["iterations"] = r.iterations;
        d["certified"] = r.status == SolveStatus::Optimal && certify_l1<cplx>(B, a, r.x, opts);
        return d;
      },
      py::arg("B"), py::arg("a"), py::arg("gamma") = 0.0, py::arg("max_iters") = 20000, py::arg("tol") = 1e-9,
      "min sum|x_j| subject to ||B x - a|| <= gamma.");

  m.def(
      "recover",
      [](const CMatrix& B, const CMatrix& A, const std::string& scheme, double gamma, int K, int s,
         std::uint64_t seed, bool cones, int jobs) {
        return result_dict(recover(measurements(B, A, 0.0), recovery_config(scheme, gamma, K, s, seed, cones, jobs)));
      },
      py::arg("B"), py::arg("A"), py::arg("scheme") = "heuristic", py::arg("gamma") = 0.0, py::arg("K") = 1,
      py::arg("s") = 0, py::arg("seed") = 0, py::arg("cones") = false, py::arg("jobs") = 1,
      "Recover the n x n graph matrix Y from B (m x n) and A = B Y + Z.");

  m.def(
      "metrics",
      [](const CMatrix& X, const CMatrix& Y, const std::string& field, double threshold) {
        Metrics mt = metrics(X, GraphMatrix(Y, field_from_string(field)), threshold);
        py::dict d;
        d["topo_ok"] = mt.topo_ok;
        d["sign_ok"] = mt.sign_ok;
        d["frob"] = mt.frob;
        d["frob_normalized"] = mt.frob_normalized;
        return d;
      },
      py::arg("X"), py::arg("Y"), py::arg("field") = "complex", py::arg("threshold") = 1e-5);

  m.def("spark", &spark, py::arg("B"));
  m.def("ric", &ric, py::arg("B"), py::arg("mu"));
  m.def(
      "xi", [](const CMatrix& B, int K) { return xi(B, K).value; }, py::arg("B"), py::arg("K"));

  m.def("entropy_uniform_trees", &entropy_uniform_trees, py::arg("n"));
  m.def("entropy_er", &entropy_er, py::arg("n"), py::arg("p"));
  auto inputs = [](int n, int m_, double sigma_S, double sigma_N, double Y_bar, double H) {
    BoundInputs in;
    in.n = n;
    in.m = m_;
    in.sigma_S = sigma_S;
    in.sigma_N = sigma_N;
    in.Y_bar = Y_bar;
    in.entropy_nats = H;
    return in;
  };
  m.def(
      "fano_floor",
      [inputs](int n, int m_, double H, double sigma_S, double sigma_N, double Y_bar) {
        BoundInputs in = inputs(n, m_, sigma_S, sigma_N, Y_bar, H);
        return sigma_N > 0.0 ? fano_floor_noisy(in) : fano_floor_noiseless(in);
      },
      py::arg("n"), py::arg("m"), py::arg("entropy"), py::arg("sigma_S") = 1.0, py::arg("sigma_N") = 0.0,
      py::arg("Y_bar") = 1.0, "Noiseless floor when sigma_N = 0, noisy floor otherwise.");
  m.def(
      "min_measurements",
      [inputs](int n, double H, double target, double sigma_S, double sigma_N, double Y_bar) {
        return min_measurements(inputs(n, 1, sigma_S, sigma_N, Y_bar, H), target, sigma_N > 0.0);
      },
      py::arg("n"), py::arg("entropy"), py::arg("target"), py::arg("sigma_S") = 1.0, py::arg("sigma_N") = 0.0,
      py::arg("Y_bar") = 1.0);
  m.def(
      "sufficient_m_noiseless",
      [](int mu, int K, int n) {
        auto s = sufficient_m_noiseless(mu, K, n);
        return py::make_tuple(s.m, s.valid);
      },
      py::arg("mu"), py::arg("K"), py::arg("n"));
  m.def(
      "er_sparsity_profile",
      [](int n, double p, int K) {
        auto s = er_sparsity_profile(n, p, K);
        py::dict d;
        d["mu"] = s.mu;
        d["K"] = s.K;
        d["rho"] = s.rho;
        d["degenerate"] = s.degenerate;
        return d;
      },
      py::arg("n"), py::arg("p"), py::arg("K"));

  m.def(
      "run_trials",
      [](const std::string& kind, int n, int m_, const std::string& scheme, int trials, std::uint64_t seed,
         const std::string& field, double sigma_N, double mean_re, double p, int jobs) {
        TrialSpec t;
        t.ensemble = ensemble(kind, n, p);
        t.m = m_;
        t.field = field_from_string(field);
        t.sigma_N = sigma_N;
        t.generator_mean_re = mean_re;
        t.recovery.scheme = scheme_from_string(scheme);
        t.trials = trials;
        t.seed = seed;
        t.jobs = jobs;
        TrialSummary s;
        {
          py::gil_scoped_release release;
          s = run_trials(t);
        }
        py::dict d;
        d["eps_T"] = s.eps_T;
        d["eps_P"] = s.eps_P;
        d["mean_frob"] = s.mean_frob;
        d["ci_T"] = s.ci_T;
        d["ci_P"] = s.ci_P;
        d["trials"] = s.trials;
        d["successes"] = s.successes;
        return d;
      },
      py::arg("kind"), py::arg("n"), py::arg("m"), py::arg("scheme") = "heuristic", py::arg("trials") = 20,
      py::arg("seed") = 0, py::arg("field") = "complex", py::arg("sigma_N") = 0.0, py::arg("mean_re") = 0.0,
      py::arg("p") = 0.0, py::arg("jobs") = 1);

  m.def(
      "sweep_csv",
      [](const std::string& kind, const std::vector<int>& n_list, const std::vector<std::string>& schemes,
         int trials, std::uint64_t seed, const std::vector<int>& m_grid, int m_start, double q,
         const std::string& field, double mean_re, int jobs) {
        SweepSpec sw;
        sw.base.ensemble.kind = ensemble_kind_from_string(kind);
        sw.base.field = field_from_string(field);
        sw.base.generator_mean_re = mean_re;
        sw.base.trials = trials;
        sw.base.seed = seed;
        sw.base.jobs = jobs;
        sw.n_list = n_list;
        for (const auto& s : schemes) sw.schemes.push_back(scheme_from_string(s));
        sw.strategy = m_grid.empty() ? MStrategy::ScanUp : MStrategy::Grid;
        sw.m_grid = m_grid;
        sw.m_start = m_start;
        sw.q = q;
        std::ostringstream out;
        {
          py::gil_scoped_release release;
          write_sweep_csv(out, sample_complexity_sweep(sw));
        }
        return out.str();
      },
      py::arg("kind"), py::arg("n_list"), py::arg("schemes") = std::vector<std::string>{"heuristic"},
      py::arg("trials") = 20, py::arg("seed") = 0, py::arg("m_grid") = std::vector<int>{}, py::arg("m_start") = 1,
      py::arg("q") = 0.9, py::arg("field") = "complex", py::arg("mean_re") = 0.0, py::arg("jobs") = 1,
      "Sample-complexity sweep as CSV text; scan-up unless m_grid is given.");

  m.def("read_matrix_csv", &read_matrix_csv, py::arg("path"));
  m.def(
      "write_matrix_csv", [](const std::string& path, const CMatrix& x) { write_matrix_csv(path, x); },
      py::arg("path"), py::arg("X"));
  m.def(
      "ingest",
      [](const std::string& path) {
        Ingested in = ingest(path);
        py::dict d;
        d["B"] = in.ms.B;
        d["A"] = in.ms.A;
        d["field"] = to_string(in.ms.field);
        d["sigma_N"] = in.ms.sigma_N;
        d["Y"] = in.truth ? py::cast(in.truth->values()) : py::none();
        return d;
      },
      py::arg("manifest"));
}
