#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "srlab/function_classes.hpp"

using namespace srlab;

namespace {

int nonzeros(const Eigen::VectorXcd& c) {
  int n = 0;
  for (Eigen::Index j = 0; j < c.size(); ++j)
    if (c[j] != cplx{0.0, 0.0}) ++n;
  return n;
}

}  // namespace

TEST_CASE("spec validation rejects out-of-range parameters") {
  CHECK_THROWS_AS(validate_spec({.kind = ClassSpec::Kind::a1r, .r = -0.5}), param_error);
  CHECK_THROWS_AS(validate_spec({.kind = ClassSpec::Kind::wab, .a = 0.0}), param_error);
  CHECK_THROWS_AS(
      validate_spec({.kind = ClassSpec::Kind::geg_wiener, .r = 1.0, .theta = 1.5}),
      param_error);
  // embedding into the bounded system needs r > alpha + 1/2
  CHECK_THROWS_AS(
      validate_spec({.kind = ClassSpec::Kind::geg_wiener, .r = 0.5, .alpha = 0.0, .theta = 1.0}),
      param_error);
}

TEST_CASE("a1r sampler saturates its budget and stays in the class") {
  const Dictionary dict = gegenbauer_dictionary({.alpha = 0.0, .max_degree = 31});
  const ClassSpec spec{.kind = ClassSpec::Kind::a1r, .r = 1.0, .support = 6};
  Rng rng(42);
  const Eigen::VectorXcd c = sample_class(spec, dict, rng);

  CHECK(nonzeros(c) == 6);
  double budget = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j)
    budget += std::abs(c[j]) * std::pow(static_cast<double>(j) + 1.0, 1.0);
  CHECK(budget == doctest::Approx(1.0).epsilon(1e-13));

  const auto in = class_membership_check(c, spec, dict);
  CHECK(in.member);
  CHECK(in.budget == doctest::Approx(budget).epsilon(1e-14));
  const auto out = class_membership_check(2.0 * c, spec, dict);
  CHECK_FALSE(out.member);
  CHECK(out.budget == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("geg_wiener sampler: theta budget recomputed independently") {
  const Dictionary dict = gegenbauer_dictionary({.alpha = 0.5, .max_degree = 63});
  const ClassSpec spec{
      .kind = ClassSpec::Kind::geg_wiener, .r = 1.5, .alpha = 0.5, .theta = 0.7, .support = 10};
  Rng rng(7);
  const Eigen::VectorXcd c = sample_class(spec, dict, rng);

  CHECK(nonzeros(c) == 10);
  double budget = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    const double w = std::abs(c[j]) * std::pow(static_cast<double>(j) + 1.0, 1.5);
    if (w > 0.0) budget += std::pow(w, 0.7);
  }
  CHECK(budget == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(class_membership_check(c, spec, dict).budget == doctest::Approx(budget).epsilon(1e-13));
}

TEST_CASE("wab sampler fills every level to its exact cap") {
  const Dictionary dict = trig_dictionary(frequency_set_consecutive(16));
  const ClassSpec spec{.kind = ClassSpec::Kind::wab, .a = 1.0, .b = 0.0, .d = 1};
  Rng rng(3);
  const Eigen::VectorXcd c = sample_class(spec, dict, rng);

  std::map<int, double> mass;
  for (int j = 0; j < dict.size; ++j)
    mass[dyadic_level(dict.freq->indices[static_cast<std::size_t>(j)])] += std::abs(c[j]);
  CHECK(mass.size() == 5);  // levels 0..4 for frequencies -8..7
  for (const auto& [level, m] : mass)
    CHECK(m == doctest::Approx(std::pow(2.0, -level)).epsilon(1e-13));

  const auto res = class_membership_check(c, spec, dict);
  CHECK(res.member);
  CHECK(res.budget == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("wab in two dimensions carries the logarithmic factor") {
  const Dictionary dict = trig_dictionary(frequency_set_step(3, 2));
  const ClassSpec spec{.kind = ClassSpec::Kind::wab, .a = 0.8, .b = 0.5, .d = 2};
  Rng rng(11);
  const Eigen::VectorXcd c = sample_class(spec, dict, rng);

  std::map<int, double> mass;
  for (int j = 0; j < dict.size; ++j)
    mass[dyadic_level(dict.freq->indices[static_cast<std::size_t>(j)])] += std::abs(c[j]);
  for (const auto& [level, m] : mass) {
    const double cap = std::pow(2.0, -0.8 * level) * std::pow(std::max(level, 1), 0.5);
    CHECK(m == doctest::Approx(cap).epsilon(1e-12));
  }
  CHECK(class_membership_check(c, spec, dict).budget == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("level block sup norm never exceeds the block Wiener mass") {
  const Dictionary dict = trig_dictionary(frequency_set_consecutive(16));
  const ClassSpec spec{.kind = ClassSpec::Kind::wab, .a = 1.0, .b = 0.0, .d = 1};
  Rng rng(19);
  const Eigen::VectorXcd c = sample_class(spec, dict, rng);
  const EvalGrid grid = evaluation_grid(dict, 8);
  const Eigen::MatrixXcd design = design_matrix(dict, grid.points);

  std::map<int, Eigen::VectorXcd> pieces;
  for (int j = 0; j < dict.size; ++j) {
    const int level = dyadic_level(dict.freq->indices[static_cast<std::size_t>(j)]);
    auto [it, inserted] = pieces.try_emplace(level, Eigen::VectorXcd::Zero(dict.size));
    it->second[j] = c[j];
  }
  for (const auto& [level, piece] : pieces) {
    const double sup = (design * piece).cwiseAbs().maxCoeff();
    const double wiener = piece.cwiseAbs().sum();
    CHECK(sup <= wiener + 1e-12);
  }
}

TEST_CASE("witness box enumerates all sign vertices of a small block") {
  const Dictionary dict = gegenbauer_dictionary({.alpha = 0.0, .max_degree = 7});
  Rng rng(1);
  const WitnessBox box = thm83_witness_class(0.0, 1.0, 1.0, 0, dict, rng, /*m0=*/1);

  CHECK(box.m1 == 1);
  CHECK(box.block_lo == 2);
  CHECK(box.block_size == 2);
  CHECK(box.complete);
  CHECK(box.members.size() == 4);
  CHECK(box.scale == doctest::Approx(std::pow(2.0, -4.0)).epsilon(1e-15));

  const ClassSpec spec{.kind = ClassSpec::Kind::geg_wiener, .r = 1.0, .alpha = 0.0, .theta = 1.0};
  for (const auto& m : box.members) {
    CHECK(nonzeros(m) == 2);
    // budget (3 + 4)/16 regardless of the sign pattern
    CHECK(class_membership_check(m, spec, dict).budget ==
          doctest::Approx(0.4375).epsilon(1e-14));
  }
  // first member is the all-plus corner; block l2 mass is scale * sqrt(block)
  CHECK(box.members[0][2].real() == doctest::Approx(box.scale).epsilon(1e-15));
  CHECK(box.members[0][3].real() == doctest::Approx(box.scale).epsilon(1e-15));
  CHECK(box.members[0].norm() ==
        doctest::Approx(box.scale * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("witness box falls back to sampled vertices above the cap") {
  const Dictionary dict = gegenbauer_dictionary({.alpha = 0.0, .max_degree = 15});
  Rng rng(5);
  // block size 8 gives 256 vertices, cap below that forces sampling
  const WitnessBox box = thm83_witness_class(0.0, 1.0, 1.0, 0, dict, rng, 3, /*vertex_cap=*/10);

  CHECK_FALSE(box.complete);
  CHECK(box.members.size() == 10);
  CHECK(box.block_lo == 8);
  for (int i = 0; i < box.block_size; ++i)
    CHECK(box.members[0][8 + i].real() == doctest::Approx(box.scale).epsilon(1e-15));

  const ClassSpec spec{.kind = ClassSpec::Kind::geg_wiener, .r = 1.0, .alpha = 0.0, .theta = 1.0};
  for (const auto& m : box.members) CHECK(class_membership_check(m, spec, dict).member);
}

TEST_CASE("witness box rejects a dictionary that cannot hold the block") {
  const Dictionary dict = gegenbauer_dictionary({.alpha = 0.0, .max_degree = 7});
  Rng rng(1);
  CHECK_THROWS_AS(thm83_witness_class(0.0, 1.0, 1.0, 1, dict, rng), size_error);
}

TEST_CASE("decay profile saturates the budget with controlled jitter") {
  const Dictionary dict = gegenbauer_dictionary({.alpha = 0.0, .max_degree = 127});
  const ClassSpec spec{.kind = ClassSpec::Kind::geg_wiener, .r = 1.0, .alpha = 0.0, .theta = 1.0};
  Rng rng(23);
  const Eigen::VectorXcd c = sample_decay_profile(spec, 0.25, dict, rng);

  CHECK(class_membership_check(c, spec, dict).budget == doctest::Approx(1.0).epsilon(1e-12));
  // |c_j| (1+j)^{r + 1/theta + delta} varies by the uniform(1/2,1) jitter only
  double lo = 1e300, hi = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    const double flat = std::abs(c[j]) * std::pow(static_cast<double>(j) + 1.0, 2.25);
    lo = std::min(lo, flat);
    hi = std::max(hi, flat);
  }
  CHECK(hi / lo <= 2.0 + 1e-9);
  CHECK_THROWS_AS(sample_decay_profile(spec, 0.0, dict, rng), param_error);
}

TEST_CASE("samplers are deterministic per seed") {
  const Dictionary dict = gegenbauer_dictionary({.alpha = 0.0, .max_degree = 31});
  const ClassSpec spec{
      .kind = ClassSpec::Kind::geg_wiener, .r = 1.0, .alpha = 0.0, .theta = 0.8, .support = 5};
  Rng r1(99), r2(99), r3(100);
  const Eigen::VectorXcd a = sample_class(spec, dict, r1);
  const Eigen::VectorXcd b = sample_class(spec, dict, r2);
  const Eigen::VectorXcd d = sample_class(spec, dict, r3);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - d).cwiseAbs().maxCoeff() > 0.0);
}
