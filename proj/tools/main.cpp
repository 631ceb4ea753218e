// slrkit command line. Subcommands run planted-instance experiments, image
// recovery, and solver diagnostics on top of the core library. Inputs and
// outputs are PGM images, CSV tables, and flat key=value config files; a
// run prints one key=value result line on stdout. On failure the process
// exits nonzero after printing a single machine-readable line to stderr:
//   error kind=<category> detail="<message>"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slrkit/clustering.hpp"
#include "slrkit/completion.hpp"
#include "slrkit/csv.hpp"
#include "slrkit/diagnostics.hpp"
#include "slrkit/errors.hpp"
#include "slrkit/experiment.hpp"
#include "slrkit/generators.hpp"
#include "slrkit/keyvalue.hpp"
#include "slrkit/lrr.hpp"
#include "slrkit/pgm.hpp"
#include "slrkit/rpca.hpp"

namespace {

using namespace slrkit;

void fail(const std::string& kind, const std::string& detail) {
  std::string clean = detail;
  for (char& c : clean) {
    if (c == '"' || c == '\n') c = ' ';
  }
  std::fprintf(stderr, "error kind=%s detail=\"%s\"\n", kind.c_str(),
               clean.c_str());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) {
    throw std::runtime_error("cannot write " + path);
  }
}

// Writes to stdout when the path is "-".
void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
  } else {
    write_file(path, content);
  }
}

void print_result(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::string line;
  for (const auto& [key, value] : pairs) {
    if (!line.empty()) line += ' ';
    line += key + '=' + value;
  }
  std::printf("%s\n", line.c_str());
}

std::string num(double value) { return csv::format(value); }

// Config-file override plumbing: each subcommand binds the same variables
// its flags write to, keyed by the long flag name; --config values are
// applied after flag parsing, so the file wins.
class Overrides {
 public:
  void bind(const std::string& key, double* target) {
    setters_[key] = [target](const std::string& v) { *target = std::stod(v); };
  }
  void bind(const std::string& key, int* target) {
    setters_[key] = [target](const std::string& v) { *target = std::stoi(v); };
  }
  void bind(const std::string& key, Index* target) {
    setters_[key] = [target](const std::string& v) {
      *target = static_cast<Index>(std::stoll(v));
    };
  }
  void bind(const std::string& key, std::uint64_t* target) {
    setters_[key] = [target](const std::string& v) {
      *target = std::stoull(v);
    };
  }
  void bind(const std::string& key, bool* target) {
    setters_[key] = [target](const std::string& v) {
      if (v == "1" || v == "true") {
        *target = true;
      } else if (v == "0" || v == "false") {
        *target = false;
      } else {
        throw std::invalid_argument("boolean key expects 0/1/true/false, got " +
                                    v);
      }
    };
  }
  void bind(const std::string& key, std::string* target) {
    setters_[key] = [target](const std::string& v) { *target = v; };
  }
  void bind(const std::string& key, std::vector<double>* target) {
    setters_[key] = [target](const std::string& v) {
      std::vector<double> values;
      std::stringstream stream(v);
      std::string cell;
      while (std::getline(stream, cell, ',')) {
        values.push_back(std::stod(cell));
      }
      *target = values;
    };
  }

  void apply_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw std::runtime_error("cannot read config file " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    for (const auto& [key, value] : parse_key_values(buffer.str())) {
      const auto it = setters_.find(key);
      if (it == setters_.end()) {
        throw std::invalid_argument("unknown config key: " + key);
      }
      it->second(value);
    }
  }

 private:
  std::map<std::string, std::function<void(const std::string&)>> setters_;
};

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

// --- shared flag groups -----------------------------------------------------

struct SpecFlags {
  std::string name = "nuclear";
  double scale = 1.0;
  double p = 0.5;
  double theta = 2.5;
  double a1 = 0.1;
  double a2 = 0.2;
  std::vector<double> thresholds = {5.0, 50.0, 60.0};
};

void add_spec_flags(CLI::App* cmd, SpecFlags& f, Overrides& ov) {
  cmd->add_option("--spec", f.name,
                  "rank surrogate: nuclear, lp, capped_l1, etp, scad, mcp, "
                  "piecewise");
  cmd->add_option("--spec-scale", f.scale, "weight on the surrogate");
  cmd->add_option("--p", f.p, "lp exponent in (0,1)");
  cmd->add_option("--theta", f.theta, "knee parameter (capped_l1/etp/scad/mcp)");
  cmd->add_option("--a1", f.a1, "piecewise first slope drop");
  cmd->add_option("--a2", f.a2, "piecewise second slope drop");
  cmd->add_option("--thresholds", f.thresholds,
                  "piecewise ramp thresholds p1,p2,p3")
      ->delimiter(',');
  ov.bind("spec", &f.name);
  ov.bind("spec-scale", &f.scale);
  ov.bind("p", &f.p);
  ov.bind("theta", &f.theta);
  ov.bind("a1", &f.a1);
  ov.bind("a2", &f.a2);
  ov.bind("thresholds", &f.thresholds);
}

RegularizerSpec build_spec(const SpecFlags& f) {
  if (f.name == "nuclear") return RegularizerSpec::nuclear(f.scale);
  if (f.name == "lp") return RegularizerSpec::lp(f.scale, f.p);
  if (f.name == "capped_l1") return RegularizerSpec::capped_l1(f.scale, f.theta);
  if (f.name == "etp") return RegularizerSpec::etp(f.scale, f.theta);
  if (f.name == "scad") return RegularizerSpec::scad(f.scale, f.theta);
  if (f.name == "mcp") return RegularizerSpec::mcp(f.scale, f.theta);
  if (f.name == "piecewise") {
    if (f.thresholds.size() != 3) {
      throw std::invalid_argument("piecewise needs exactly three thresholds");
    }
    return RegularizerSpec::piecewise(f.scale, f.a1, f.a2, f.thresholds[0],
                                      f.thresholds[1], f.thresholds[2]);
  }
  throw std::invalid_argument("unknown spec: " + f.name);
}

struct SolverFlags {
  double lambda = 0.1;
  double mu0 = 1e-3;
  double kappa = 1.2;
  int max_iter = 150;
  double feas_tol = 1e-9;
  bool momentum = false;
  std::string schedule = "sqrt";
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f, Overrides& ov) {
  cmd->add_option("--lambda", f.lambda, "sparse-term weight");
  cmd->add_option("--mu0", f.mu0, "initial penalty");
  cmd->add_option("--kappa", f.kappa, "penalty growth factor (> 1)");
  cmd->add_option("--max-iter", f.max_iter, "iteration cap");
  cmd->add_option("--feas-tol", f.feas_tol,
                  "stop when the squared feasibility gap drops below this");
  cmd->add_flag("--momentum", f.momentum, "extrapolate the multipliers");
  cmd->add_option("--schedule", f.schedule, "momentum weights: sqrt or fista");
  ov.bind("lambda", &f.lambda);
  ov.bind("mu0", &f.mu0);
  ov.bind("kappa", &f.kappa);
  ov.bind("max-iter", &f.max_iter);
  ov.bind("feas-tol", &f.feas_tol);
  ov.bind("momentum", &f.momentum);
  ov.bind("schedule", &f.schedule);
}

SolverConfig build_solver(const SolverFlags& f, const SpecFlags& spec) {
  SolverConfig config;
  config.lambda = f.lambda;
  config.mu0 = f.mu0;
  config.kappa = f.kappa;
  config.max_iter = f.max_iter;
  config.feas_tol = f.feas_tol;
  config.momentum = f.momentum;
  config.alpha_schedule = parse_schedule(f.schedule);
  config.spec = build_spec(spec);
  return config;
}

struct SubspaceFlags {
  Index ambient = 100;
  Index dim = 10;
  Index subspaces = 10;
  Index samples = 10;
  Index outliers = 0;
  bool normalize = false;
  std::string gamma = "l21";
};

void add_subspace_flags(CLI::App* cmd, SubspaceFlags& f, Overrides& ov) {
  cmd->add_option("--ambient", f.ambient, "ambient dimension");
  cmd->add_option("--dim", f.dim, "dimension of each subspace");
  cmd->add_option("--subspaces", f.subspaces, "number of subspaces");
  cmd->add_option("--samples", f.samples, "samples per subspace");
  cmd->add_option("--outliers", f.outliers, "appended Gaussian columns");
  cmd->add_flag("--normalize", f.normalize, "scale columns to unit norm");
  cmd->add_option("--gamma", f.gamma, "error norm: l1 or l21");
  ov.bind("ambient", &f.ambient);
  ov.bind("dim", &f.dim);
  ov.bind("subspaces", &f.subspaces);
  ov.bind("samples", &f.samples);
  ov.bind("outliers", &f.outliers);
  ov.bind("normalize", &f.normalize);
  ov.bind("gamma", &f.gamma);
}

SubspaceData build_subspace_data(const SubspaceFlags& f, std::uint64_t seed) {
  SubspaceData data =
      gen_subspaces(f.ambient, f.dim, f.subspaces, f.samples, seed);
  if (f.outliers > 0) append_outliers(data, f.outliers, seed + 5000);
  if (f.normalize) {
    for (Index j = 0; j < data.d.cols(); ++j) {
      const double norm = data.d.col(j).norm();
      if (norm > 0.0) data.d.col(j) /= norm;
    }
  }
  return data;
}

// --- subcommands -------------------------------------------------------------

struct CompleteArgs {
  Overrides ov;
  std::string config_path;
  std::string input;
  std::string output;
  std::string trace_path;
  Index rows = 150, cols = 150, rank = 10;
  double observed = 0.5;
  std::uint64_t seed = 1;
  std::string factors = "normal";
  double mu = 1.1;
  int max_iter = 500;
  double step_tol = 1e-10;
  SpecFlags spec;
};

void run_complete(CompleteArgs& a) {
  if (!a.config_path.empty()) a.ov.apply_file(a.config_path);
  Matrix reference;
  if (!a.input.empty()) {
    reference = image_read(a.input);
  } else {
    reference =
        gen_lowrank(a.rows, a.cols, a.rank, a.seed, parse_factors(a.factors));
  }
  const ObservationMask mask = gen_mask(reference.rows(), reference.cols(),
                                        a.observed, a.seed + 1000);
  CompletionProblem problem{mask,          mask.project(reference),
                            build_spec(a.spec), a.mu,
                            a.max_iter,    a.step_tol,
                            std::nullopt};
  const CompletionResult r = complete(problem);
  if (!a.output.empty()) image_write(a.output, r.x);
  if (!a.trace_path.empty()) write_output(a.trace_path, trace_to_csv(r.trace));
  const double rel = (r.x - reference).norm() / reference.norm();
  print_result({{"iterations", std::to_string(r.iterations)},
                {"converged", r.converged ? "1" : "0"},
                {"relative_error", num(rel)}});
}

struct RpcaArgs {
  Overrides ov;
  std::string config_path;
  std::string input;
  std::string l_out, e_out, trace_path;
  Index rows = 100, cols = 100, rank = 10;
  double error_fraction = 0.2;
  double error_magnitude = 1.0;
  std::uint64_t seed = 1;
  std::string factors = "uniform";
  SolverFlags solver;
  SpecFlags spec;
};

void run_rpca_cmd(RpcaArgs& a) {
  if (!a.config_path.empty()) a.ov.apply_file(a.config_path);
  const SolverConfig config = build_solver(a.solver, a.spec);
  Matrix d;
  Matrix reference;
  bool planted = a.input.empty();
  if (planted) {
    reference =
        gen_lowrank(a.rows, a.cols, a.rank, a.seed, parse_factors(a.factors));
    d = reference + gen_sparse_error(a.rows, a.cols, a.error_fraction,
                                     a.error_magnitude, a.seed + 1000);
  } else {
    d = image_read(a.input);
  }
  const RpcaResult r = planted ? rpca(d, config, reference) : rpca(d, config);
  if (!a.l_out.empty()) image_write(a.l_out, r.l);
  if (!a.e_out.empty()) image_write(a.e_out, r.e);
  if (!a.trace_path.empty()) write_output(a.trace_path, trace_to_csv(r.trace));
  std::vector<std::pair<std::string, std::string>> line = {
      {"iterations", std::to_string(r.iterations)},
      {"converged", r.converged ? "1" : "0"},
      {"primal_residual", num(r.trace.records.back().primal_residual)}};
  if (planted) line.push_back({"recovery_error", num((r.l - reference).norm())});
  print_result(line);
}

struct LrrArgs {
  Overrides ov;
  std::string config_path;
  std::string trace_path;
  SubspaceFlags instance;
  std::uint64_t seed = 1;
  SolverFlags solver;
  SpecFlags spec;
};

LrrResult solve_lrr(const SubspaceFlags& instance, std::uint64_t seed,
                    const SolverFlags& solver, const SpecFlags& spec,
                    SubspaceData* data_out) {
  SubspaceData data = build_subspace_data(instance, seed);
  LrrProblem problem;
  problem.d = data.d;
  problem.gamma = error_norm_from_name(instance.gamma);
  problem.config = build_solver(solver, spec);
  if (data_out != nullptr) *data_out = std::move(data);
  return lrr(problem);
}

void run_lrr_cmd(LrrArgs& a) {
  if (!a.config_path.empty()) a.ov.apply_file(a.config_path);
  const LrrResult r = solve_lrr(a.instance, a.seed, a.solver, a.spec, nullptr);
  if (!a.trace_path.empty()) write_output(a.trace_path, trace_to_csv(r.trace));
  const IterationRecord& last = r.trace.records.back();
  print_result({{"iterations", std::to_string(r.iterations)},
                {"converged", r.converged ? "1" : "0"},
                {"fit_residual", num(last.primal_residual)},
                {"split_residual", num(last.second_residual)}});
}

struct ClusterArgs {
  Overrides ov;
  std::string config_path;
  std::string labels_path;
  SubspaceFlags instance;
  std::uint64_t seed = 1;
  double threshold = 0.1;
  SolverFlags solver;
  SpecFlags spec;
};

void run_cluster_cmd(ClusterArgs& a) {
  if (!a.config_path.empty()) a.ov.apply_file(a.config_path);
  SubspaceData data;
  const LrrResult r = solve_lrr(a.instance, a.seed, a.solver, a.spec, &data);
  const AffinityMatrix w = affinity(r.z);
  ClusterLabels labels =
      spectral_cluster(w, static_cast<int>(a.instance.subspaces), a.seed + 1);
  int flagged = 0;
  if (a.instance.outliers > 0) {
    labels.outlier = detect_outliers(w, a.threshold);
    for (const std::uint8_t f : labels.outlier) flagged += f;
  }
  const double acc = accuracy(labels, data.truth);
  if (!a.labels_path.empty()) {
    csv::Writer out({"sample_index", "label", "outlier_flag"});
    for (std::size_t i = 0; i < labels.ids.size(); ++i) {
      const bool outlier = i < labels.outlier.size() && labels.outlier[i] != 0;
      out.add_row({csv::format(static_cast<int>(i)),
                   csv::format(labels.ids[i]), outlier ? "1" : "0"});
    }
    write_output(a.labels_path, out.str());
  }
  print_result({{"iterations", std::to_string(r.iterations)},
                {"converged", r.converged ? "1" : "0"},
                {"accuracy", num(acc)},
                {"flagged", std::to_string(flagged)}});
}

struct BenchArgs {
  Overrides ov;
  std::string config_path;
  std::string kind = "completion";
  std::string summary_path = "-";
  std::string curves_path;
  std::string labels_path;
  int trials = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  bool no_timing = false;
  Index rows = 150, cols = 150, rank = 10;
  double observed = 0.5;
  double error_fraction = 0.2;
  double error_magnitude = 1.0;
  double error_weight = 1.0;
  std::string factors = "normal";
  double mu = 1.1;
  int completion_max_iter = 200;
  double step_tol = 1e-7;
  bool single_variant = false;
  SubspaceFlags instance;
  double threshold = 0.1;
  SolverFlags solver;
  SpecFlags spec;
};

void run_bench_cmd(BenchArgs& a) {
  if (!a.config_path.empty()) a.ov.apply_file(a.config_path);
  ExperimentConfig config;
  if (a.kind == "completion") {
    config.kind = ExperimentKind::kCompletion;
  } else if (a.kind == "rpca") {
    config.kind = ExperimentKind::kRpca;
  } else if (a.kind == "cluster") {
    config.kind = ExperimentKind::kLrrCluster;
  } else {
    throw std::invalid_argument("unknown bench kind: " + a.kind);
  }
  config.trials = a.trials;
  config.seed = a.seed;
  config.threads = a.threads;
  config.record_timing = !a.no_timing;
  config.rows = a.rows;
  config.cols = a.cols;
  config.rank = a.rank;
  config.observed_fraction = a.observed;
  config.error_fraction = a.error_fraction;
  config.error_magnitude = a.error_magnitude;
  config.error_weight = a.error_weight;
  config.factors = parse_factors(a.factors);
  config.spec = build_spec(a.spec);
  config.completion_mu = a.mu;
  config.completion_max_iter = a.completion_max_iter;
  config.completion_step_tol = a.step_tol;
  config.solver = build_solver(a.solver, a.spec);
  config.rpca_all_variants = !a.single_variant;
  config.ambient = a.instance.ambient;
  config.subspace_dim = a.instance.dim;
  config.num_subspaces = a.instance.subspaces;
  config.samples_per = a.instance.samples;
  config.outliers = a.instance.outliers;
  config.outlier_threshold = a.threshold;
  config.gamma = error_norm_from_name(a.instance.gamma);
  const ExperimentOutput output = run_experiment(config);
  write_output(a.summary_path, output.summary_csv);
  if (!a.curves_path.empty()) write_output(a.curves_path, output.curves_csv);
  if (!a.labels_path.empty()) write_output(a.labels_path, output.labels_csv);
}

struct DiagArgs {
  Overrides ov;
  std::string config_path;
  std::string solver_kind = "rpca";
  std::string trace_path, kkt_path, rate_path, bound_path;
  std::vector<double> horizons = {20, 50, 100};
  Index rows = 100, cols = 100, rank = 10;
  double error_fraction = 0.2;
  double error_magnitude = 1.0;
  std::string factors = "uniform";
  SubspaceFlags instance;
  std::uint64_t seed = 1;
  SolverFlags solver;
  SpecFlags spec;
};

void run_diag_cmd(DiagArgs& a) {
  if (!a.config_path.empty()) a.ov.apply_file(a.config_path);
  SolveTrace trace;
  KktResiduals kkt;
  int iterations = 0;
  bool converged = false;
  if (a.solver_kind == "rpca") {
    const Matrix m =
        gen_lowrank(a.rows, a.cols, a.rank, a.seed, parse_factors(a.factors));
    const Matrix d = m + gen_sparse_error(a.rows, a.cols, a.error_fraction,
                                          a.error_magnitude, a.seed + 1000);
    const SolverConfig config = build_solver(a.solver, a.spec);
    const RpcaResult r = rpca(d, config, m);
    kkt = kkt_report(r, d, config);
    trace = r.trace;
    iterations = r.iterations;
    converged = r.converged;
  } else if (a.solver_kind == "lrr") {
    SubspaceData data = build_subspace_data(a.instance, a.seed);
    LrrProblem problem;
    problem.d = data.d;
    problem.gamma = error_norm_from_name(a.instance.gamma);
    problem.config = build_solver(a.solver, a.spec);
    const LrrResult r = lrr(problem);
    kkt = kkt_report(r, problem);
    trace = r.trace;
    iterations = r.iterations;
    converged = r.converged;
  } else {
    throw std::invalid_argument("unknown diag solver: " + a.solver_kind);
  }
  if (!a.trace_path.empty()) write_output(a.trace_path, trace_to_csv(trace));
  if (!a.kkt_path.empty()) write_output(a.kkt_path, kkt_to_csv(kkt));
  if (!a.rate_path.empty()) {
    // Horizons past the recorded range are skipped rather than rejected.
    std::vector<int> usable;
    for (const double h : a.horizons) {
      const int horizon = static_cast<int>(h);
      if (horizon >= 1 &&
          horizon <= static_cast<int>(trace.records.size())) {
        usable.push_back(horizon);
      }
    }
    write_output(a.rate_path, rate_to_csv(rate_report(trace, usable)));
  }
  if (!a.bound_path.empty()) {
    write_output(a.bound_path, boundedness_to_csv(boundedness_report(trace)));
  }
  print_result({{"iterations", std::to_string(iterations)},
                {"converged", converged ? "1" : "0"},
                {"primal_kkt", num(kkt.primal)},
                {"sparse_dual_kkt", num(kkt.e_dual)},
                {"lowrank_fixed_point", num(kkt.l_fixed_point)},
                {"drift_stabilized",
                 drift_series_stabilized(trace) ? "1" : "0"}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse-plus-low-rank recovery toolkit"};
  app.require_subcommand(1);

  CompleteArgs complete_args;
  RpcaArgs rpca_args;
  LrrArgs lrr_args;
  ClusterArgs cluster_args;
  BenchArgs bench_args;
  DiagArgs diag_args;

  {
    CLI::App* cmd = app.add_subcommand(
        "complete", "recover a matrix or image from partial entries");
    CompleteArgs& a = complete_args;
    cmd->add_option("--config", a.config_path,
                    "key=value file; entries override flags");
    cmd->add_option("--input", a.input, "PGM image to mask and recover");
    cmd->add_option("--output", a.output, "write the recovered image (PGM)");
    cmd->add_option("--trace", a.trace_path, "write per-iteration CSV");
    cmd->add_option("--rows", a.rows, "planted rows");
    cmd->add_option("--cols", a.cols, "planted cols");
    cmd->add_option("--rank", a.rank, "planted rank");
    cmd->add_option("--observed", a.observed, "observed fraction");
    cmd->add_option("--seed", a.seed, "instance seed");
    cmd->add_option("--factors", a.factors, "factor draw: normal or uniform");
    cmd->add_option("--mu", a.mu, "proximal weight (>= 1)");
    cmd->add_option("--max-iter", a.max_iter, "iteration cap");
    cmd->add_option("--step-tol", a.step_tol, "stop on step norm below this");
    a.ov.bind("input", &a.input);
    a.ov.bind("output", &a.output);
    a.ov.bind("trace", &a.trace_path);
    a.ov.bind("rows", &a.rows);
    a.ov.bind("cols", &a.cols);
    a.ov.bind("rank", &a.rank);
    a.ov.bind("observed", &a.observed);
    a.ov.bind("seed", &a.seed);
    a.ov.bind("factors", &a.factors);
    a.ov.bind("mu", &a.mu);
    a.ov.bind("max-iter", &a.max_iter);
    a.ov.bind("step-tol", &a.step_tol);
    add_spec_flags(cmd, a.spec, a.ov);
    cmd->callback([&a] { run_complete(a); });
  }

  {
    CLI::App* cmd = app.add_subcommand(
        "rpca", "split a matrix into low-rank plus sparse parts");
    RpcaArgs& a = rpca_args;
    cmd->add_option("--config", a.config_path,
                    "key=value file; entries override flags");
    cmd->add_option("--input", a.input, "PGM image to decompose");
    cmd->add_option("--l-out", a.l_out, "write the low-rank part (PGM)");
    cmd->add_option("--e-out", a.e_out, "write the sparse part (PGM)");
    cmd->add_option("--trace", a.trace_path, "write per-iteration CSV");
    cmd->add_option("--rows", a.rows, "planted rows");
    cmd->add_option("--cols", a.cols, "planted cols");
    cmd->add_option("--rank", a.rank, "planted rank");
    cmd->add_option("--error-fraction", a.error_fraction,
                    "corrupted entry fraction");
    cmd->add_option("--error-magnitude", a.error_magnitude,
                    "corruption magnitude");
    cmd->add_option("--seed", a.seed, "instance seed");
    cmd->add_option("--factors", a.factors, "factor draw: normal or uniform");
    a.ov.bind("input", &a.input);
    a.ov.bind("l-out", &a.l_out);
    a.ov.bind("e-out", &a.e_out);
    a.ov.bind("trace", &a.trace_path);
    a.ov.bind("rows", &a.rows);
    a.ov.bind("cols", &a.cols);
    a.ov.bind("rank", &a.rank);
    a.ov.bind("error-fraction", &a.error_fraction);
    a.ov.bind("error-magnitude", &a.error_magnitude);
    a.ov.bind("seed", &a.seed);
    a.ov.bind("factors", &a.factors);
    add_solver_flags(cmd, a.solver, a.ov);
    add_spec_flags(cmd, a.spec, a.ov);
    cmd->callback([&a] { run_rpca_cmd(a); });
  }

  {
    CLI::App* cmd = app.add_subcommand(
        "lrr", "fit a low-rank representation over a planted union of "
               "subspaces");
    LrrArgs& a = lrr_args;
    cmd->add_option("--config", a.config_path,
                    "key=value file; entries override flags");
    cmd->add_option("--trace", a.trace_path, "write per-iteration CSV");
    cmd->add_option("--seed", a.seed, "instance seed");
    a.ov.bind("trace", &a.trace_path);
    a.ov.bind("seed", &a.seed);
    add_subspace_flags(cmd, a.instance, a.ov);
    add_solver_flags(cmd, a.solver, a.ov);
    add_spec_flags(cmd, a.spec, a.ov);
    cmd->callback([&a] { run_lrr_cmd(a); });
  }

  {
    CLI::App* cmd = app.add_subcommand(
        "cluster", "representation, affinity, spectral clustering, and "
                   "outlier flags");
    ClusterArgs& a = cluster_args;
    cmd->add_option("--config", a.config_path,
                    "key=value file; entries override flags");
    cmd->add_option("--labels", a.labels_path,
                    "write sample_index,label,outlier_flag CSV");
    cmd->add_option("--seed", a.seed, "instance seed");
    cmd->add_option("--threshold", a.threshold,
                    "outlier row-sum fraction of the median");
    a.ov.bind("labels", &a.labels_path);
    a.ov.bind("seed", &a.seed);
    a.ov.bind("threshold", &a.threshold);
    add_subspace_flags(cmd, a.instance, a.ov);
    add_solver_flags(cmd, a.solver, a.ov);
    add_spec_flags(cmd, a.spec, a.ov);
    cmd->callback([&a] { run_cluster_cmd(a); });
  }

  {
    CLI::App* cmd = app.add_subcommand(
        "bench", "multi-trial experiment driver with CSV aggregates");
    BenchArgs& a = bench_args;
    cmd->add_option("--config", a.config_path,
                    "key=value file; entries override flags");
    cmd->add_option("--kind", a.kind, "completion, rpca, or cluster");
    cmd->add_option("--summary", a.summary_path,
                    "summary CSV path ('-' = stdout)");
    cmd->add_option("--curves", a.curves_path, "rpca error-curve CSV path");
    cmd->add_option("--labels", a.labels_path, "cluster labels CSV path");
    cmd->add_option("--trials", a.trials, "independent trials");
    cmd->add_option("--seed", a.seed, "base seed, split per trial");
    cmd->add_option("--threads", a.threads, "worker pool size");
    cmd->add_flag("--no-timing", a.no_timing,
                  "write 0 in the time column for byte-stable output");
    cmd->add_option("--rows", a.rows, "planted rows");
    cmd->add_option("--cols", a.cols, "planted cols");
    cmd->add_option("--rank", a.rank, "planted rank");
    cmd->add_option("--observed", a.observed, "completion observed fraction");
    cmd->add_option("--error-fraction", a.error_fraction,
                    "rpca corrupted fraction");
    cmd->add_option("--error-magnitude", a.error_magnitude,
                    "rpca corruption magnitude");
    cmd->add_option("--error-weight", a.error_weight,
                    "scale on the planted sparse part");
    cmd->add_option("--factors", a.factors, "factor draw: normal or uniform");
    cmd->add_option("--mu", a.mu, "completion proximal weight");
    cmd->add_option("--completion-max-iter", a.completion_max_iter,
                    "completion iteration cap");
    cmd->add_option("--step-tol", a.step_tol, "completion stop tolerance");
    cmd->add_flag("--single-variant", a.single_variant,
                  "rpca: run only the configured solver variant");
    cmd->add_option("--threshold", a.threshold,
                    "cluster outlier row-sum fraction");
    a.ov.bind("kind", &a.kind);
    a.ov.bind("summary", &a.summary_path);
    a.ov.bind("curves", &a.curves_path);
    a.ov.bind("labels", &a.labels_path);
    a.ov.bind("trials", &a.trials);
    a.ov.bind("seed", &a.seed);
    a.ov.bind("threads", &a.threads);
    a.ov.bind("no-timing", &a.no_timing);
    a.ov.bind("rows", &a.rows);
    a.ov.bind("cols", &a.cols);
    a.ov.bind("rank", &a.rank);
    a.ov.bind("observed", &a.observed);
    a.ov.bind("error-fraction", &a.error_fraction);
    a.ov.bind("error-magnitude", &a.error_magnitude);
    a.ov.bind("error-weight", &a.error_weight);
    a.ov.bind("factors", &a.factors);
    a.ov.bind("mu", &a.mu);
    a.ov.bind("completion-max-iter", &a.completion_max_iter);
    a.ov.bind("step-tol", &a.step_tol);
    a.ov.bind("single-variant", &a.single_variant);
    a.ov.bind("threshold", &a.threshold);
    add_subspace_flags(cmd, a.instance, a.ov);
    add_solver_flags(cmd, a.solver, a.ov);
    add_spec_flags(cmd, a.spec, a.ov);
    cmd->callback([&a] { run_bench_cmd(a); });
  }

  {
    CLI::App* cmd = app.add_subcommand(
        "diag", "single solve with stationarity, rate, and boundedness "
                "reports");
    DiagArgs& a = diag_args;
    cmd->add_option("--config", a.config_path,
                    "key=value file; entries override flags");
    cmd->add_option("--solver", a.solver_kind, "rpca or lrr");
    cmd->add_option("--trace", a.trace_path, "write per-iteration CSV");
    cmd->add_option("--kkt", a.kkt_path, "write stationarity residual CSV");
    cmd->add_option("--rate", a.rate_path, "write step-rate envelope CSV");
    cmd->add_option("--bound", a.bound_path, "write iterate-bound CSV");
    cmd->add_option("--horizons", a.horizons,
                    "rate horizons, comma separated")
        ->delimiter(',');
    cmd->add_option("--rows", a.rows, "rpca planted rows");
    cmd->add_option("--cols", a.cols, "rpca planted cols");
    cmd->add_option("--rank", a.rank, "rpca planted rank");
    cmd->add_option("--error-fraction", a.error_fraction,
                    "rpca corrupted fraction");
    cmd->add_option("--error-magnitude", a.error_magnitude,
                    "rpca corruption magnitude");
    cmd->add_option("--factors", a.factors, "factor draw: normal or uniform");
    cmd->add_option("--seed", a.seed, "instance seed");
    a.ov.bind("solver", &a.solver_kind);
    a.ov.bind("trace", &a.trace_path);
    a.ov.bind("kkt", &a.kkt_path);
    a.ov.bind("rate", &a.rate_path);
    a.ov.bind("bound", &a.bound_path);
    a.ov.bind("horizons", &a.horizons);
    a.ov.bind("rows", &a.rows);
    a.ov.bind("cols", &a.cols);
    a.ov.bind("rank", &a.rank);
    a.ov.bind("error-fraction", &a.error_fraction);
    a.ov.bind("error-magnitude", &a.error_magnitude);
    a.ov.bind("factors", &a.factors);
    a.ov.bind("seed", &a.seed);
    add_subspace_flags(cmd, a.instance, a.ov);
    add_solver_flags(cmd, a.solver, a.ov);
    add_spec_flags(cmd, a.spec, a.ov);
    cmd->callback([&a] { run_diag_cmd(a); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help and friends
    }
    fail("usage", e.what());
    return e.get_exit_code();
  } catch (const ParseError& e) {
    fail("parse", e.what());
    return 1;
  } catch (const DivergenceError& e) {
    fail("divergence", e.what());
    return 1;
  } catch (const NumericalError& e) {
    fail("numerical", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    fail("config", e.what());
    return 1;
  } catch (const std::exception& e) {
    fail("runtime", e.what());
    return 1;
  }
  return 0;
}
