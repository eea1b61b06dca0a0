#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "srlab/experiments.hpp"

using namespace srlab;

namespace {

const InequalityRecord* find_record(const ExperimentReport& rep, const std::string& check) {
  for (const auto& r : rep.records)
    if (r.check == check) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("experiment kind names round-trip") {
  for (const char* name : {"lebesgue-it2", "lebesgue-bt2", "discretization-curve", "bp1-rate",
                           "oga-rate", "kashin", "tau-lower", "gegenbauer-rate"})
    CHECK(to_string(experiment_kind_from_string(name)) == name);
  CHECK_THROWS_AS(experiment_kind_from_string("nope"), param_error);
}

TEST_CASE("config parsing: fields, defaults, and unknown keys") {
  const auto cfg = config_from_json(
      R"({"kind": "kashin", "seed": 9, "n_values": [4], "tol": 1e-9})");
  CHECK(cfg.kind == ExperimentKind::kashin);
  CHECK(cfg.seed == 9);
  CHECK(cfg.n_values == std::vector<int>{4});
  CHECK(cfg.tol == 1e-9);
  CHECK(cfg.N == 16);  // untouched default

  CHECK_THROWS_AS(config_from_json(R"({"kind": "kashin", "bogus": 1})"), param_error);
  CHECK_THROWS_AS(config_from_json(R"({"seed": 1})"), param_error);
}

TEST_CASE("kashin experiment reproduces the closed form") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kashin;
  cfg.n_values = {4, 6};
  const ExperimentReport rep = run_experiment(cfg);
  CHECK(rep.failed == 0);
  CHECK(rep.pass_rate == 1.0);
  const auto* eq = find_record(rep, "oracle-matches-closed-form");
  REQUIRE(eq != nullptr);
  CHECK(eq->left <= 1e-10);
  const auto* floor = find_record(rep, "floor-at-quarter-sparsity");
  REQUIRE(floor != nullptr);
  CHECK(floor->pass);
}

TEST_CASE("reports are byte-identical across reruns with one seed") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::discretization_curve;
  cfg.N = 5;
  cfg.v_values = {2};
  cfg.m_values = {4, 8};
  cfg.seed = 17;
  const std::string a = render_json(report_to_json(run_experiment(cfg)));
  const std::string b = render_json(report_to_json(run_experiment(cfg)));
  CHECK(a == b);

  cfg.seed = 18;
  const std::string c = render_json(report_to_json(run_experiment(cfg)));
  CHECK(a != c);
}

TEST_CASE("records arrive sorted by instance key") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kashin;
  cfg.n_values = {8, 4, 6};  // deliberately unsorted input range
  const ExperimentReport rep = run_experiment(cfg);
  CHECK(std::is_sorted(rep.records.begin(), rep.records.end(),
                       [](const InequalityRecord& a, const InequalityRecord& b) {
                         return std::tie(a.instance, a.check) <= std::tie(b.instance, b.check);
                       }));
  // margins recomputable from the stored sides
  for (const auto& r : rep.records) CHECK(r.margin == r.right - r.left);
}

TEST_CASE("bp1 rate experiment meets its bound on a small instance") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::bp1_rate;
  cfg.N = 16;
  cfg.sample_count = 3;
  cfg.v_values = {2, 4};
  cfg.r_values = {0.5};
  const ExperimentReport rep = run_experiment(cfg);
  CHECK(rep.failed == 0);
  CHECK(rep.asserted == 6);
  for (const auto& r : rep.records) CHECK(r.premise.find("budget=") != std::string::npos);
}

TEST_CASE("oga rate experiment meets its bound on a small instance") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::oga_rate;
  cfg.N = 16;
  cfg.sample_count = 3;
  cfg.v_values = {1, 2, 4};
  const ExperimentReport rep = run_experiment(cfg);
  CHECK(rep.failed == 0);
  CHECK(rep.asserted == 9);
}

TEST_CASE("lebesgue lane: certified premise and both inequalities") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::lebesgue_bt2;
  cfg.N = 8;
  cfg.sample_count = 6;
  cfg.m_points = 60;
  cfg.seed = 3;
  const ExperimentReport rep = run_experiment(cfg);
  CHECK(rep.failed == 0);
  const auto* premise = find_record(rep, "certified-c1-at-target");
  REQUIRE(premise != nullptr);
  CHECK(premise->right >= 0.5);
  // 1 premise record + 2 inequalities per function
  CHECK(rep.asserted == 1 + 2 * cfg.sample_count);
  for (const auto& r : rep.records)
    if (r.check == "ls-error-vs-sigma-uniform") CHECK(r.constant == 5.0);
}

TEST_CASE("tau lower experiment certifies the witness and the chain") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::tau_lower;
  cfg.N = 8;
  cfg.seed = 11;
  const ExperimentReport rep = run_experiment(cfg);
  CHECK(rep.failed == 0);
  REQUIRE(find_record(rep, "witness-vanishes-at-samples") != nullptr);
  REQUIRE(find_record(rep, "hidden-mass-floor") != nullptr);
  const auto* chain = find_record(rep, "l2-vs-uniform-sigma");
  REQUIRE(chain != nullptr);
  CHECK(chain->asserted);
  CHECK(chain->pass);
}

TEST_CASE("gegenbauer rate experiment: structural records on a small instance") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::gegenbauer_rate;
  cfg.N = 64;
  cfg.alpha = 0.0;
  cfg.r = 1.0;
  cfg.theta = 1.0;
  cfg.sample_count = 4;
  cfg.m_values = {3, 4, 5};
  cfg.n_values = {4, 8};
  cfg.vertex_cap = 64;
  cfg.grid_oversample = 2;
  const ExperimentReport rep = run_experiment(cfg);

  const auto* member = find_record(rep, "members-inside-budget");
  REQUIRE(member != nullptr);
  CHECK(member->pass);
  const auto* box = find_record(rep, "box-floor-closed-form");
  REQUIRE(box != nullptr);
  CHECK(box->pass);
  const auto* oracle = find_record(rep, "library-sigma-agreement");
  REQUIRE(oracle != nullptr);
  CHECK(oracle->pass);
  const auto* cfit = find_record(rep, "fitted-constant-positive");
  REQUIRE(cfit != nullptr);
  CHECK(cfit->pass);
  REQUIRE(find_record(rep, "upper-curve-slope") != nullptr);
  CHECK(rep.extra["upper_curve"]["error"].size() == 3);
}

TEST_CASE("csv emission carries one row per record in fixed columns") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kashin;
  cfg.n_values = {4};
  const ExperimentReport rep = run_experiment(cfg);
  const CsvTable t = report_to_csv(rep);
  CHECK(t.header.front() == "instance");
  CHECK(t.header.back() == "inputs");
  CHECK(t.rows.size() == rep.records.size());
}
