#pragma once

#include <cstdint>
#include <string>

#include "slrkit/completion.hpp"
#include "slrkit/generators.hpp"
#include "slrkit/lrr.hpp"
#include "slrkit/rpca.hpp"

namespace slrkit {

enum class ExperimentKind {
  kCompletion,   // planted low-rank + observation mask, per-regularizer
  kRpca,         // planted low-rank + sparse error, solver variants
  kLrrCluster,   // union of subspaces, representation + spectral clustering
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kCompletion;
  int trials = 1;
  std::uint64_t seed = 0;
  int threads = 1;         // worker pool size; results are deterministic
                           // regardless of pool size
  bool record_timing = true;  // false writes 0 in the time column so the
                              // CSV bytes are reproducible

  // Planted instance shape (completion / rpca).
  Index rows = 150;
  Index cols = 150;
  Index rank = 10;
  double observed_fraction = 0.5;   // completion
  double error_fraction = 0.2;      // rpca sparse support
  double error_magnitude = 1.0;     // sparse error values in [-mag, mag]
  double error_weight = 1.0;        // scale on E when forming D = M + w*E
  FactorDistribution factors = FactorDistribution::kStandardNormal;

  RegularizerSpec spec = RegularizerSpec::nuclear(1.0);

  // Completion solver knobs.
  double completion_mu = 1.1;
  int completion_max_iter = 200;
  double completion_step_tol = 1e-7;

  // rpca / lrr solver knobs.
  SolverConfig solver;
  bool rpca_all_variants = true;  // run convex/nonconvex x momentum on/off

  // Subspace clustering instance.
  Index ambient = 100;
  Index subspace_dim = 10;
  Index num_subspaces = 10;
  Index samples_per = 10;
  Index outliers = 0;
  double outlier_threshold = 0.1;
  ErrorNorm gamma = ErrorNorm::kL21;

  void validate() const;
};

struct ExperimentOutput {
  // Per-trial rows plus one aggregate row per method:
  // row_type,trial,method,metric_name,metric,metric_mean,metric_min,
  // metric_std,iterations,time_s,status,diag
  std::string summary_csv;
  // rpca kind only: mean ||L^k - M||_F per iteration and variant.
  std::string curves_csv;
  // lrr-cluster kind only: last trial's per-sample labels.
  std::string labels_csv;
};

// Runs `trials` independent instances (seed split per trial), solves each,
// and aggregates. A solver error inside one trial is recorded in that
// trial's status cell and the run continues; aggregates cover the trials
// that succeeded.
ExperimentOutput run_experiment(const ExperimentConfig& config);

}  // namespace slrkit
