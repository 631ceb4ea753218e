// Python bindings for the core operations: generators, the three solvers,
// spectral clustering, and the convergence diagnostics. Matrices cross the
// boundary as numpy arrays via Eigen. SolverConfig's sparse weight is
// exposed as "lam" because "lambda" is a python keyword, and RateCheck's
// flag as "passed" for the same reason.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slrkit/clustering.hpp"
#include "slrkit/completion.hpp"
#include "slrkit/diagnostics.hpp"
#include "slrkit/errors.hpp"
#include "slrkit/generators.hpp"
#include "slrkit/lrr.hpp"
#include "slrkit/prox.hpp"
#include "slrkit/regularizers.hpp"
#include "slrkit/rpca.hpp"

namespace py = pybind11;
using namespace slrkit;

namespace {

FactorDistribution parse_factors(const std::string& name) {
  if (name == "normal") return FactorDistribution::kStandardNormal;
  if (name == "uniform") return FactorDistribution::kUniform01;
  throw std::invalid_argument("unknown factor distribution: " + name);
}

AlphaSchedule parse_schedule(const std::string& name) {
  if (name == "sqrt") return AlphaSchedule::kSqrtGrowth;
  if (name == "fista") return AlphaSchedule::kFista;
  throw std::invalid_argument("unknown momentum schedule: " + name);
}

std::string schedule_name(AlphaSchedule schedule) {
  return schedule == AlphaSchedule::kSqrtGrowth ? "sqrt" : "fista";
}

ObservationMask mask_from_indicator(const Matrix& indicator) {
  std::vector<std::pair<Index, Index>> positions;
  for (Index j = 0; j < indicator.cols(); ++j) {
    for (Index i = 0; i < indicator.rows(); ++i) {
      if (indicator(i, j) != 0.0) positions.emplace_back(i, j);
    }
  }
  return ObservationMask(indicator.rows(), indicator.cols(),
                         std::move(positions));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "sparse-plus-low-rank recovery toolkit";

  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<RegularizerSpec>(m, "RegularizerSpec")
      .def_static("nuclear", &RegularizerSpec::nuclear, py::arg("scale") = 1.0)
      .def_static("lp", &RegularizerSpec::lp, py::arg("scale"), py::arg("p"))
      .def_static("capped_l1", &RegularizerSpec::capped_l1, py::arg("scale"),
                  py::arg("theta"))
      .def_static("etp", &RegularizerSpec::etp, py::arg("scale"),
                  py::arg("theta"))
      .def_static("scad", &RegularizerSpec::scad, py::arg("scale"),
                  py::arg("theta"))
      .def_static("mcp", &RegularizerSpec::mcp, py::arg("scale"),
                  py::arg("theta"))
      .def_static("piecewise", &RegularizerSpec::piecewise, py::arg("scale"),
                  py::arg("a1"), py::arg("a2"), py::arg("p1"), py::arg("p2"),
                  py::arg("p3"));

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("lam", &SolverConfig::lambda)
      .def_readwrite("mu0", &SolverConfig::mu0)
      .def_readwrite("kappa", &SolverConfig::kappa)
      .def_readwrite("max_iter", &SolverConfig::max_iter)
      .def_readwrite("feas_tol", &SolverConfig::feas_tol)
      .def_readwrite("momentum", &SolverConfig::momentum)
      .def_readwrite("spec", &SolverConfig::spec)
      .def_readwrite("rank_cap", &SolverConfig::rank_cap)
      .def_property(
          "schedule",
          [](const SolverConfig& c) { return schedule_name(c.alpha_schedule); },
          [](SolverConfig& c, const std::string& name) {
            c.alpha_schedule = parse_schedule(name);
          });

  py::class_<SolveTrace>(m, "SolveTrace")
      .def("__len__",
           [](const SolveTrace& t) { return t.records.size(); })
      .def("to_csv", &trace_to_csv)
      .def("primal_residuals",
           [](const SolveTrace& t) {
             std::vector<double> out;
             out.reserve(t.records.size());
             for (const auto& r : t.records) out.push_back(r.primal_residual);
             return out;
           })
      .def("ref_errors", [](const SolveTrace& t) {
        std::vector<double> out;
        out.reserve(t.records.size());
        for (const auto& r : t.records) out.push_back(r.ref_error);
        return out;
      });

  py::class_<RpcaResult>(m, "RpcaResult")
      .def_readonly("l", &RpcaResult::l)
      .def_readonly("e", &RpcaResult::e)
      .def_readonly("iterations", &RpcaResult::iterations)
      .def_readonly("converged", &RpcaResult::converged)
      .def_readonly("trace", &RpcaResult::trace);

  py::class_<LrrResult>(m, "LrrResult")
      .def_readonly("l", &LrrResult::l)
      .def_readonly("z", &LrrResult::z)
      .def_readonly("e", &LrrResult::e)
      .def_readonly("iterations", &LrrResult::iterations)
      .def_readonly("converged", &LrrResult::converged)
      .def_readonly("trace", &LrrResult::trace);

  py::class_<CompletionResult>(m, "CompletionResult")
      .def_readonly("x", &CompletionResult::x)
      .def_readonly("iterations", &CompletionResult::iterations)
      .def_readonly("converged", &CompletionResult::converged)
      .def_readonly("trace", &CompletionResult::trace);

  py::class_<ClusterLabels>(m, "ClusterLabels")
      .def(py::init<>())
      .def_readwrite("ids", &ClusterLabels::ids)
      .def_readwrite("outlier", &ClusterLabels::outlier);

  py::class_<SubspaceData>(m, "SubspaceData")
      .def_readonly("d", &SubspaceData::d)
      .def_readonly("truth", &SubspaceData::truth);

  py::class_<KktResiduals>(m, "KktResiduals")
      .def_readonly("primal", &KktResiduals::primal)
      .def_readonly("e_dual", &KktResiduals::e_dual)
      .def_readonly("l_fixed_point", &KktResiduals::l_fixed_point);

  py::class_<RateCheck>(m, "RateCheck")
      .def_readonly("horizon", &RateCheck::horizon)
      .def_readonly("min_step_sum", &RateCheck::min_step_sum)
      .def_readonly("bound", &RateCheck::bound)
      .def_readonly("passed", &RateCheck::pass);

  // Generators.
  m.def(
      "gen_lowrank",
      [](Index rows, Index cols, Index d, std::uint64_t seed,
         const std::string& factors) {
        return gen_lowrank(rows, cols, d, seed, parse_factors(factors));
      },
      py::arg("rows"), py::arg("cols"), py::arg("d"), py::arg("seed"),
      py::arg("factors") = "normal");
  m.def("gen_sparse_error", &gen_sparse_error, py::arg("rows"),
        py::arg("cols"), py::arg("fraction"), py::arg("magnitude"),
        py::arg("seed"));
  m.def(
      "gen_mask",
      [](Index rows, Index cols, double fraction, std::uint64_t seed) {
        return gen_mask(rows, cols, fraction, seed).indicator();
      },
      py::arg("rows"), py::arg("cols"), py::arg("observed_fraction"),
      py::arg("seed"), "0/1 indicator matrix of observed entries");
  m.def("gen_subspaces", &gen_subspaces, py::arg("ambient"), py::arg("dim"),
        py::arg("k"), py::arg("samples_per"), py::arg("seed"));
  m.def("append_outliers", &append_outliers, py::arg("data"),
        py::arg("count"), py::arg("seed"));

  // Shrinkage building blocks.
  m.def(
      "gsvt",
      [](const Matrix& p, double tau, const RegularizerSpec& spec) {
        return gsvt(p, tau, spec);
      },
      py::arg("p"), py::arg("tau"), py::arg("spec"));
  m.def("prox_l1", &prox_l1, py::arg("t"), py::arg("tau"));
  m.def("prox_l21", &prox_l21, py::arg("t"), py::arg("tau"));
  m.def(
      "auto_thresholds",
      [](const Vector& sigma) {
        const PiecewiseThresholds t = auto_thresholds(sigma);
        return py::make_tuple(t.p1, t.p2, t.p3);
      },
      py::arg("sigma_sample"));
  m.def(
      "singular_values",
      [](const Matrix& x) { return Vector(svd(x).sigma); }, py::arg("x"));

  // Solvers.
  m.def(
      "rpca",
      [](const Matrix& d, const SolverConfig& config) {
        return rpca(d, config);
      },
      py::arg("d"), py::arg("config"));
  m.def(
      "rpca",
      [](const Matrix& d, const SolverConfig& config, const Matrix& reference) {
        return rpca(d, config, reference);
      },
      py::arg("d"), py::arg("config"), py::arg("reference"));
  m.def(
      "lrr",
      [](const Matrix& d, const SolverConfig& config, const std::string& gamma,
         const std::optional<Matrix>& dictionary) {
        LrrProblem problem;
        problem.d = d;
        problem.dictionary = dictionary;
        problem.gamma = error_norm_from_name(gamma);
        problem.config = config;
        return lrr(problem);
      },
      py::arg("d"), py::arg("config"), py::arg("gamma") = "l21",
      py::arg("dictionary") = std::nullopt);
  m.def(
      "complete",
      [](const Matrix& mask_indicator, const Matrix& observed,
         const RegularizerSpec& spec, double mu, int max_iter,
         double step_tol) {
        CompletionProblem problem{mask_from_indicator(mask_indicator),
                                  observed,
                                  spec,
                                  mu,
                                  max_iter,
                                  step_tol,
                                  std::nullopt};
        return complete(problem);
      },
      py::arg("mask"), py::arg("observed"), py::arg("spec"),
      py::arg("mu") = 1.1, py::arg("max_iter") = 200,
      py::arg("step_tol") = 1e-7);
  m.def("advance_alpha",
        [](double alpha, const std::string& schedule) {
          return advance_alpha(alpha, parse_schedule(schedule));
        },
        py::arg("alpha"), py::arg("schedule") = "sqrt");

  // Clustering pipeline.
  m.def(
      "affinity",
      [](const Matrix& z, double rank_tol) {
        return affinity(z, rank_tol).w;
      },
      py::arg("z"), py::arg("rank_tol") = 1e-6);
  m.def(
      "spectral_cluster",
      [](const Matrix& w, int k, std::uint64_t seed) {
        return spectral_cluster(AffinityMatrix{w}, k, seed);
      },
      py::arg("w"), py::arg("k"), py::arg("seed"));
  m.def("accuracy", &accuracy, py::arg("predicted"), py::arg("truth"));
  m.def(
      "detect_outliers",
      [](const Matrix& w, double threshold_fraction) {
        return detect_outliers(AffinityMatrix{w}, threshold_fraction);
      },
      py::arg("w"), py::arg("threshold_fraction"));

  // Diagnostics.
  m.def(
      "kkt_report",
      [](const RpcaResult& result, const Matrix& d,
         const SolverConfig& config) { return kkt_report(result, d, config); },
      py::arg("result"), py::arg("d"), py::arg("config"));
  m.def(
      "kkt_report",
      [](const LrrResult& result, const Matrix& d, const SolverConfig& config,
         const std::string& gamma) {
        LrrProblem problem;
        problem.d = d;
        problem.gamma = error_norm_from_name(gamma);
        problem.config = config;
        return kkt_report(result, problem);
      },
      py::arg("result"), py::arg("d"), py::arg("config"),
      py::arg("gamma") = "l21");
  m.def("rate_report", &rate_report, py::arg("trace"), py::arg("horizons"));
  m.def("drift_stabilized", &drift_series_stabilized, py::arg("trace"),
        py::arg("window") = 10, py::arg("rel_tol") = 1e-6);
  m.def("dual_drift", &dual_drift, py::arg("y_k"), py::arg("y_km1"),
        py::arg("y_km2"), py::arg("alpha_k"), py::arg("alpha_km1"),
        py::arg("alpha_km2"), py::arg("mu_k"), py::arg("mu_km1"));
}
