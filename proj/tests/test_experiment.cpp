#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "slrkit/experiment.hpp"

using namespace slrkit;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

ExperimentConfig small_completion() {
  ExperimentConfig config;
  config.kind = ExperimentKind::kCompletion;
  config.trials = 2;
  config.seed = 5;
  config.record_timing = false;
  config.rows = 20;
  config.cols = 20;
  config.rank = 2;
  config.observed_fraction = 0.7;
  config.spec = RegularizerSpec::nuclear(0.05);
  config.completion_max_iter = 100;
  return config;
}

}  // namespace

TEST_CASE("completion experiment emits trial and aggregate rows") {
  const ExperimentOutput out = run_experiment(small_completion());
  const auto lines = split_lines(out.summary_csv);
  REQUIRE(lines.size() == 4);  // header + 2 trials + 1 aggregate
  CHECK(lines[0] ==
        "row_type,trial,method,metric_name,metric,metric_mean,metric_min,"
        "metric_std,iterations,time_s,status,diag");

  const auto t0 = split_fields(lines[1]);
  REQUIRE(t0.size() == 12);
  CHECK(t0[0] == "trial");
  CHECK(t0[1] == "0");
  CHECK(t0[2] == "nuclear");
  CHECK(t0[3] == "rel_error");
  const double m0 = std::stod(t0[4]);
  CHECK(m0 >= 0.0);
  CHECK(m0 < 1.0);
  CHECK(t0[9] == "0");  // timing disabled writes a zero
  CHECK(t0[10] == "ok");
  CHECK(t0[11].find("converged=") != std::string::npos);

  const auto t1 = split_fields(lines[2]);
  const double m1 = std::stod(t1[4]);

  const auto agg = split_fields(lines[3]);
  CHECK(agg[0] == "aggregate");
  CHECK(agg[1] == "");
  CHECK(agg[2] == "nuclear");
  CHECK(std::stod(agg[5]) == (m0 + m1) / 2.0);
  CHECK(std::stod(agg[6]) == std::min(m0, m1));
  CHECK(std::stod(agg[7]) >= 0.0);
  CHECK(agg[10] == "ok 2/2");

  // no curves or labels for this kind
  CHECK(out.curves_csv.empty());
  CHECK(out.labels_csv.empty());
}

TEST_CASE("experiment output is deterministic and thread-count invariant") {
  const ExperimentConfig config = small_completion();
  const ExperimentOutput a = run_experiment(config);
  const ExperimentOutput b = run_experiment(config);
  CHECK(a.summary_csv == b.summary_csv);

  ExperimentConfig threaded = config;
  threaded.threads = 3;
  const ExperimentOutput c = run_experiment(threaded);
  CHECK(a.summary_csv == c.summary_csv);

  ExperimentConfig reseeded = config;
  reseeded.seed = 6;
  const ExperimentOutput d = run_experiment(reseeded);
  CHECK(a.summary_csv != d.summary_csv);
}

TEST_CASE("rpca experiment runs the four solver variants with curves") {
  ExperimentConfig config;
  config.kind = ExperimentKind::kRpca;
  config.trials = 1;
  config.seed = 9;
  config.record_timing = false;
  config.rows = 16;
  config.cols = 16;
  config.rank = 2;
  config.error_fraction = 0.05;
  config.error_magnitude = 1.0;
  config.spec = RegularizerSpec::scad(1.0, 3.0);
  config.solver.lambda = 0.25;
  config.solver.max_iter = 60;
  config.solver.feas_tol = 0.0;

  const ExperimentOutput out = run_experiment(config);
  const auto lines = split_lines(out.summary_csv);
  REQUIRE(lines.size() == 9);  // header + 4 trial rows + 4 aggregates
  CHECK(split_fields(lines[1])[2] == "nuclear");
  CHECK(split_fields(lines[2])[2] == "nuclear+momentum");
  CHECK(split_fields(lines[3])[2] == "scad");
  CHECK(split_fields(lines[4])[2] == "scad+momentum");
  for (int i = 1; i <= 4; ++i) {
    const auto fields = split_fields(lines[i]);
    CHECK(fields[3] == "final_error");
    CHECK(std::stod(fields[4]) >= 0.0);
    CHECK(fields[8] == "60");
    CHECK(fields[10] == "ok");
  }

  const auto curve_lines = split_lines(out.curves_csv);
  REQUIRE(curve_lines.size() == 61);  // header + one row per iteration
  CHECK(curve_lines[0] == "iteration,nuclear,nuclear+momentum,scad,"
                          "scad+momentum");
  const auto first = split_fields(curve_lines[1]);
  REQUIRE(first.size() == 5);
  CHECK(first[0] == "1");
  for (int i = 1; i < 5; ++i) CHECK(std::stod(first[i]) >= 0.0);
  CHECK(split_fields(curve_lines[60])[0] == "60");
}

TEST_CASE("rpca experiment with a nuclear spec dedupes to two variants") {
  ExperimentConfig config;
  config.kind = ExperimentKind::kRpca;
  config.trials = 1;
  config.seed = 9;
  config.record_timing = false;
  config.rows = 12;
  config.cols = 12;
  config.rank = 2;
  config.error_fraction = 0.05;
  config.solver.lambda = 0.3;
  config.solver.max_iter = 30;
  config.solver.feas_tol = 0.0;

  const ExperimentOutput out = run_experiment(config);
  const auto lines = split_lines(out.summary_csv);
  REQUIRE(lines.size() == 5);  // header + 2 trial rows + 2 aggregates
  CHECK(split_fields(lines[1])[2] == "nuclear");
  CHECK(split_fields(lines[2])[2] == "nuclear+momentum");

  ExperimentConfig single = config;
  single.rpca_all_variants = false;
  single.solver.momentum = true;
  const auto single_lines =
      split_lines(run_experiment(single).summary_csv);
  REQUIRE(single_lines.size() == 3);
  CHECK(split_fields(single_lines[1])[2] == "nuclear+momentum");
}

TEST_CASE("clustering experiment writes per-sample labels") {
  ExperimentConfig config;
  config.kind = ExperimentKind::kLrrCluster;
  config.trials = 1;
  config.seed = 13;
  config.record_timing = false;
  config.ambient = 20;
  config.subspace_dim = 2;
  config.num_subspaces = 2;
  config.samples_per = 8;
  config.solver = default_lrr_config();
  config.solver.lambda = 1.0;
  config.solver.max_iter = 120;

  const ExperimentOutput out = run_experiment(config);
  const auto lines = split_lines(out.summary_csv);
  REQUIRE(lines.size() == 3);
  const auto trial = split_fields(lines[1]);
  CHECK(trial[2] == "nuclear");
  CHECK(trial[3] == "accuracy");
  const double acc = std::stod(trial[4]);
  CHECK(acc > 0.0);
  CHECK(acc <= 1.0);
  CHECK(trial[10] == "ok");

  const auto labels = split_lines(out.labels_csv);
  REQUIRE(labels.size() == 17);  // header + 16 samples
  CHECK(labels[0] == "sample,truth_id,truth_outlier,predicted_id,"
                     "predicted_outlier");
  for (std::size_t i = 1; i < labels.size(); ++i) {
    const auto fields = split_fields(labels[i]);
    REQUIRE(fields.size() == 5);
    CHECK(std::stoi(fields[0]) == int(i) - 1);
    const int truth_id = std::stoi(fields[1]);
    CHECK(truth_id >= 0);
    CHECK(truth_id < 2);
    CHECK(fields[2] == "0");
    CHECK(std::stoi(fields[3]) >= 0);
    CHECK(fields[4] == "0");
  }
}

TEST_CASE("clustering experiment with planted outliers records flags") {
  ExperimentConfig config;
  config.kind = ExperimentKind::kLrrCluster;
  config.trials = 1;
  config.seed = 17;
  config.record_timing = false;
  config.ambient = 20;
  config.subspace_dim = 2;
  config.num_subspaces = 2;
  config.samples_per = 8;
  config.outliers = 2;
  config.outlier_threshold = 0.1;
  config.solver = default_lrr_config();
  config.solver.lambda = 1.0;
  config.solver.max_iter = 120;

  const ExperimentOutput out = run_experiment(config);
  const auto lines = split_lines(out.summary_csv);
  REQUIRE(lines.size() == 3);
  const auto trial = split_fields(lines[1]);
  CHECK(trial[10] == "ok");
  CHECK(trial[11].find("flagged=") != std::string::npos);

  const auto labels = split_lines(out.labels_csv);
  REQUIRE(labels.size() == 19);  // header + 16 inliers + 2 outliers
  // the appended samples carry the truth outlier flag
  CHECK(split_fields(labels[17])[2] == "1");
  CHECK(split_fields(labels[18])[2] == "1");
}

TEST_CASE("a failing trial is recorded without aborting the run") {
  ExperimentConfig config = small_completion();
  config.trials = 1;
  config.rank = 50;  // impossible: rank exceeds the 20x20 shape

  const ExperimentOutput out = run_experiment(config);
  const auto lines = split_lines(out.summary_csv);
  REQUIRE(lines.size() == 3);
  const auto trial = split_fields(lines[1]);
  CHECK(trial[4] == "");  // no metric
  // the status cell may be quoted when the message contains a comma
  CHECK(lines[1].find("error:") != std::string::npos);
  const auto agg = split_fields(lines[2]);
  CHECK(agg[10] == "ok 0/1");
  CHECK(agg[5] == "");
}

TEST_CASE("experiment config validation") {
  ExperimentConfig config = small_completion();
  config.trials = 0;
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
  config = small_completion();
  config.threads = 0;
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
  config = small_completion();
  config.observed_fraction = 1.5;
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
  config = small_completion();
  config.rows = 0;
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
  config = small_completion();
  config.kind = ExperimentKind::kLrrCluster;
  config.num_subspaces = 1;
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
}
