#include "slrkit/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>

#include "slrkit/clustering.hpp"
#include "slrkit/csv.hpp"
#include "slrkit/rng.hpp"

namespace slrkit {

void ExperimentConfig::validate() const {
  if (trials < 1) {
    throw std::invalid_argument("ExperimentConfig: trials must be positive");
  }
  if (threads < 1) {
    throw std::invalid_argument("ExperimentConfig: threads must be positive");
  }
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("ExperimentConfig: shape must be positive");
  }
  if (!(observed_fraction >= 0.0 && observed_fraction <= 1.0) ||
      !(error_fraction >= 0.0 && error_fraction <= 1.0)) {
    throw std::invalid_argument("ExperimentConfig: fraction outside [0, 1]");
  }
  spec.validate();
  if (kind != ExperimentKind::kCompletion) {
    solver.validate();
  }
}

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min(threads, n);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled) {
    if (enabled_) start_ = std::chrono::steady_clock::now();
  }
  double seconds() const {
    if (!enabled_) return 0.0;
    const auto now = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(now - start_).count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

struct TrialCell {
  double metric = 0.0;
  int iterations = 0;
  double time_s = 0.0;
  bool ok = false;
  std::string status = "ok";
  std::string diag;
  std::vector<double> curve;  // rpca: per-iteration distance to ground truth
};

std::string join_diag(
    const std::vector<std::pair<std::string, std::string>>& parts) {
  std::string out;
  for (const auto& [k, v] : parts) {
    if (!out.empty()) out += ';';
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

std::vector<std::string> summary_header() {
  return {"row_type",    "trial",      "method",     "metric_name",
          "metric",      "metric_mean", "metric_min", "metric_std",
          "iterations",  "time_s",     "status",     "diag"};
}

std::string build_summary(const std::vector<std::string>& methods,
                          const std::string& metric_name, int trials,
                          const std::vector<std::vector<TrialCell>>& cells) {
  csv::Writer w(summary_header());
  for (int t = 0; t < trials; ++t) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const TrialCell& cell = cells[m][t];
      w.add_row({"trial", csv::format(t), methods[m], metric_name,
                 cell.ok ? csv::format(cell.metric) : "", "", "", "",
                 csv::format(cell.iterations), csv::format(cell.time_s),
                 cell.status, cell.diag});
    }
  }
  for (std::size_t m = 0; m < methods.size(); ++m) {
    double sum = 0.0, minv = 0.0, sq = 0.0, iter_sum = 0.0, time_sum = 0.0;
    int ok_count = 0;
    for (int t = 0; t < trials; ++t) {
      const TrialCell& cell = cells[m][t];
      if (!cell.ok) continue;
      if (ok_count == 0 || cell.metric < minv) minv = cell.metric;
      sum += cell.metric;
      iter_sum += cell.iterations;
      time_sum += cell.time_s;
      ++ok_count;
    }
    std::string mean_s, min_s, std_s;
    if (ok_count > 0) {
      const double mean = sum / ok_count;
      for (int t = 0; t < trials; ++t) {
        const TrialCell& cell = cells[m][t];
        if (cell.ok) sq += (cell.metric - mean) * (cell.metric - mean);
      }
      const double stddev =
          ok_count > 1 ? std::sqrt(sq / (ok_count - 1)) : 0.0;
      mean_s = csv::format(mean);
      min_s = csv::format(minv);
      std_s = csv::format(stddev);
    }
    w.add_row({"aggregate", "", methods[m], metric_name, "", mean_s, min_s,
               std_s,
               ok_count > 0 ? csv::format(iter_sum / ok_count) : "",
               ok_count > 0 ? csv::format(time_sum / ok_count) : "",
               "ok " + std::to_string(ok_count) + "/" + std::to_string(trials),
               ""});
  }
  return w.str();
}

std::string build_curves(const std::vector<std::string>& methods,
                         const std::vector<std::vector<TrialCell>>& cells) {
  std::vector<std::string> header = {"iteration"};
  header.insert(header.end(), methods.begin(), methods.end());
  csv::Writer w(header);

  std::size_t length = 0;
  for (const auto& per_method : cells) {
    for (const TrialCell& cell : per_method) {
      if (cell.ok) length = std::max(length, cell.curve.size());
    }
  }
  // Trials that converged early are extended with their final value so the
  // mean stays an average over all successful trials at every iteration.
  for (std::size_t i = 0; i < length; ++i) {
    std::vector<std::string> row = {csv::format(int(i + 1))};
    for (const auto& per_method : cells) {
      double sum = 0.0;
      int count = 0;
      for (const TrialCell& cell : per_method) {
        if (!cell.ok || cell.curve.empty()) continue;
        sum += i < cell.curve.size() ? cell.curve[i] : cell.curve.back();
        ++count;
      }
      row.push_back(count > 0 ? csv::format(sum / count) : "");
    }
    w.add_row(row);
  }
  return w.str();
}

ExperimentOutput run_completion(const ExperimentConfig& config) {
  const std::vector<std::string> methods = {family_name(config.spec.family)};
  std::vector<std::vector<TrialCell>> cells(
      methods.size(), std::vector<TrialCell>(config.trials));
  const Rng base(config.seed);

  parallel_for(config.trials, config.threads, [&](int t) {
    TrialCell& cell = cells[0][t];
    const Rng trial_rng = base.split(std::uint64_t(t));
    try {
      const Matrix truth =
          gen_lowrank(config.rows, config.cols, config.rank,
                      trial_rng.split(1).seed(), config.factors);
      const ObservationMask mask =
          gen_mask(config.rows, config.cols, config.observed_fraction,
                   trial_rng.split(2).seed());
      CompletionProblem problem{mask, mask.project(truth), config.spec,
                                config.completion_mu,
                                config.completion_max_iter,
                                config.completion_step_tol, std::nullopt};
      const Stopwatch clock(config.record_timing);
      const CompletionResult result = complete(problem);
      cell.time_s = clock.seconds();
      cell.metric = relative_error(result.x, truth);
      cell.iterations = result.iterations;
      cell.ok = true;
      cell.diag = join_diag(
          {{"converged", result.converged ? "1" : "0"},
           {"final_step",
            csv::format(result.trace.records.back().step_norm)}});
    } catch (const std::exception& err) {
      cell.status = std::string("error: ") + err.what();
    }
  });

  ExperimentOutput out;
  out.summary_csv =
      build_summary(methods, "rel_error", config.trials, cells);
  return out;
}

ExperimentOutput run_rpca(const ExperimentConfig& config) {
  std::vector<std::string> methods;
  std::vector<SolverConfig> variants;
  if (config.rpca_all_variants) {
    SolverConfig convex = config.solver;
    convex.spec = RegularizerSpec::nuclear(1.0);
    for (const bool momentum : {false, true}) {
      SolverConfig c = convex;
      c.momentum = momentum;
      methods.push_back(momentum ? "nuclear+momentum" : "nuclear");
      variants.push_back(c);
    }
    if (config.spec.family != RegularizerFamily::kNuclear) {
      for (const bool momentum : {false, true}) {
        SolverConfig c = config.solver;
        c.spec = config.spec;
        c.momentum = momentum;
        const std::string name = family_name(config.spec.family);
        methods.push_back(momentum ? name + "+momentum" : name);
        variants.push_back(c);
      }
    }
  } else {
    SolverConfig c = config.solver;
    c.spec = config.spec;
    std::string name = family_name(config.spec.family);
    if (c.momentum) name += "+momentum";
    methods.push_back(name);
    variants.push_back(c);
  }

  std::vector<std::vector<TrialCell>> cells(
      methods.size(), std::vector<TrialCell>(config.trials));
  const Rng base(config.seed);

  parallel_for(config.trials, config.threads, [&](int t) {
    const Rng trial_rng = base.split(std::uint64_t(t));
    Matrix truth, data;
    try {
      truth = gen_lowrank(config.rows, config.cols, config.rank,
                          trial_rng.split(1).seed(), config.factors);
      const Matrix error =
          gen_sparse_error(config.rows, config.cols, config.error_fraction,
                           config.error_magnitude, trial_rng.split(2).seed());
      data = truth + config.error_weight * error;
    } catch (const std::exception& err) {
      for (std::size_t m = 0; m < methods.size(); ++m) {
        cells[m][t].status = std::string("error: ") + err.what();
      }
      return;
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      TrialCell& cell = cells[m][t];
      try {
        const Stopwatch clock(config.record_timing);
        const RpcaResult result = rpca(data, variants[m], truth);
        cell.time_s = clock.seconds();
        cell.metric = (result.l - truth).norm();
        cell.iterations = result.iterations;
        cell.ok = true;
        constexpr std::size_t kCurveCap = 150;
        const std::size_t len =
            std::min(result.trace.records.size(), kCurveCap);
        cell.curve.reserve(len);
        for (std::size_t i = 0; i < len; ++i) {
          cell.curve.push_back(result.trace.records[i].ref_error);
        }
        cell.diag = join_diag(
            {{"converged", result.converged ? "1" : "0"},
             {"residual",
              csv::format(result.trace.records.back().primal_residual)}});
      } catch (const std::exception& err) {
        cell.status = std::string("error: ") + err.what();
      }
    }
  });

  ExperimentOutput out;
  out.summary_csv = build_summary(methods, "final_error", config.trials, cells);
  out.curves_csv = build_curves(methods, cells);
  return out;
}

ExperimentOutput run_lrr_cluster(const ExperimentConfig& config) {
  if (config.num_subspaces < 2) {
    throw std::invalid_argument(
        "ExperimentConfig: clustering needs at least 2 subspaces");
  }
  std::string name = family_name(config.spec.family);
  if (config.solver.momentum) name += "+momentum";
  const std::vector<std::string> methods = {name};
  std::vector<std::vector<TrialCell>> cells(
      methods.size(), std::vector<TrialCell>(config.trials));
  const Rng base(config.seed);

  std::vector<std::string> label_rows;  // last trial's labels
  std::mutex label_mutex;
  int label_trial = -1;

  parallel_for(config.trials, config.threads, [&](int t) {
    TrialCell& cell = cells[0][t];
    const Rng trial_rng = base.split(std::uint64_t(t));
    try {
      SubspaceData instance = gen_subspaces(
          config.ambient, config.subspace_dim, config.num_subspaces,
          config.samples_per, trial_rng.split(1).seed());
      if (config.outliers > 0) {
        append_outliers(instance, config.outliers, trial_rng.split(2).seed());
      }
      LrrProblem problem;
      problem.d = instance.d;
      problem.gamma = config.gamma;
      problem.config = config.solver;
      problem.config.spec = config.spec;

      const Stopwatch clock(config.record_timing);
      const LrrResult result = lrr(problem);
      const AffinityMatrix w = affinity(result.z);
      ClusterLabels predicted = spectral_cluster(
          w, int(config.num_subspaces), trial_rng.split(3).seed());
      int flagged_count = 0;
      if (config.outliers > 0) {
        const std::vector<std::uint8_t> flags =
            detect_outliers(w, config.outlier_threshold);
        if (predicted.outlier.empty()) {
          predicted.outlier.assign(flags.size(), 0);
        }
        for (std::size_t i = 0; i < flags.size(); ++i) {
          predicted.outlier[i] =
              std::uint8_t(predicted.outlier[i] | flags[i]);
          flagged_count += flags[i];
        }
      }
      cell.time_s = clock.seconds();
      cell.metric = accuracy(predicted, instance.truth);
      cell.iterations = result.iterations;
      cell.ok = true;
      cell.diag = join_diag(
          {{"converged", result.converged ? "1" : "0"},
           {"residual",
            csv::format(result.trace.records.back().primal_residual)},
           {"flagged", csv::format(flagged_count)}});

      std::lock_guard<std::mutex> lock(label_mutex);
      if (t > label_trial) {
        label_trial = t;
        label_rows.clear();
        for (std::size_t i = 0; i < predicted.ids.size(); ++i) {
          label_rows.push_back(
              csv::format(int(i)) + "," +
              csv::format(instance.truth.ids[i]) + "," +
              (instance.truth.outlier.empty() ||
                       instance.truth.outlier[i] == 0
                   ? "0"
                   : "1") +
              "," + csv::format(predicted.ids[i]) + "," +
              (predicted.outlier.empty() || predicted.outlier[i] == 0
                   ? "0"
                   : "1"));
        }
      }
    } catch (const std::exception& err) {
      cell.status = std::string("error: ") + err.what();
    }
  });

  ExperimentOutput out;
  out.summary_csv = build_summary(methods, "accuracy", config.trials, cells);
  std::string labels =
      "sample,truth_id,truth_outlier,predicted_id,predicted_outlier\n";
  for (const std::string& row : label_rows) {
    labels += row;
    labels += "\n";
  }
  out.labels_csv = labels;
  return out;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  config.validate();
  switch (config.kind) {
    case ExperimentKind::kCompletion:
      return run_completion(config);
    case ExperimentKind::kRpca:
      return run_rpca(config);
    case ExperimentKind::kLrrCluster:
      return run_lrr_cluster(config);
  }
  throw std::invalid_argument("run_experiment: unknown kind");
}

}  // namespace slrkit
