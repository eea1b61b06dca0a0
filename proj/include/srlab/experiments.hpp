#pragma once

#include "srlab/discretization.hpp"
#include "srlab/function_classes.hpp"
#include "srlab/lower_bounds.hpp"
#include "srlab/recovery.hpp"
#include "srlab/report_io.hpp"
#include "srlab/sparse_oracles.hpp"

namespace srlab {

enum class ExperimentKind {
  lebesgue_it2,          // LS error vs sigma_v with constants from the certified C1
  lebesgue_bt2,          // same with the fixed C1 >= 1/2 constants 5 and 5*sqrt(2)
  discretization_curve,  // two-sided constants as the point count grows
  bp1_rate,              // truncate-plus-greedy error vs v^{-r-1/2}
  oga_rate,              // greedy residual vs v^{-1/2}
  kashin,                // sign-vertex oracle vs the sqrt(N-n) closed form
  tau_lower,             // vanishing witness, hidden-mass floor, recovery chain
  gegenbauer_rate,       // block-budget upper curve + witness-box lower curve
};

ExperimentKind experiment_kind_from_string(const std::string& name);
std::string to_string(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::lebesgue_bt2;
  std::uint64_t seed = 1;
  int N = 16;      // dictionary size
  int M = 0;       // tau_lower: candidate point count, 0 -> N
  double alpha = 0.0;
  double r = 1.0;
  double theta = 1.0;
  double p = 2.0;  // tau_lower: norm for the witness budget
  std::vector<double> r_values;  // bp1_rate; empty -> {0.5, 1.0}
  std::vector<int> v_values;     // empty -> kind default
  std::vector<int> m_values;     // point counts / schedule levels
  std::vector<int> n_values;     // kashin sizes / lower-curve term counts
  int sample_count = 50;
  int m_points = 0;  // sample point count, 0 -> kind default
  double target_c1 = 0.5;
  int max_attempts = 64;
  std::uint64_t subset_cap = 1'000'000;
  std::uint64_t vertex_cap = 512;
  int grid_oversample = 16;
  double slope_band = 0.3;  // slack added to the ideal rate exponent
  double delta = 0.25;      // decay-profile margin inside the class
  double tol = 1e-8;        // additive slack on asserted inequalities
  bool timing = false;      // include wall time in the report (breaks byte-identity)
};

// Parse a JSON config whose keys match the field names above; "kind" is
// required, unknown keys throw param_error.
ExperimentConfig config_from_json(const std::string& text);
ordered_json config_to_json(const ExperimentConfig& config);

// Every record asserts left <= right (strict = pass needs left < right);
// margin = right - left is always recomputable from the stored sides.
struct InequalityRecord {
  std::string instance;  // sort key within the run
  std::string check;
  ordered_json inputs;
  double left = 0.0;
  double right = 0.0;
  double margin = 0.0;
  bool pass = false;
  bool asserted = true;  // informational records never gate the exit code
  double constant = 1.0;  // multiplicative constant folded into `right`
  std::string premise;    // certification status backing the claim
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<InequalityRecord> records;  // sorted by (instance, check)
  int asserted = 0;
  int passed = 0;
  int failed = 0;
  double pass_rate = 1.0;  // over asserted records
  ordered_json extra;      // per-kind aggregates: curves, fitted slopes, constants
  double wall_seconds = 0.0;

  bool all_pass() const { return failed == 0; }
};

ExperimentReport run_experiment(const ExperimentConfig& config);

ordered_json report_to_json(const ExperimentReport& report);
// fixed columns: instance, check, left, right, margin, pass, asserted,
// constant, premise, inputs
CsvTable report_to_csv(const ExperimentReport& report);

}  // namespace srlab
