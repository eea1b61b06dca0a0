#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "srlab/discretization.hpp"
#include "srlab/subset.hpp"

using namespace srlab;

TEST_CASE("subset helpers: unranking agrees with serial enumeration") {
  CHECK(binomial_capped(16, 2, 1'000'000) == 120);
  CHECK(binomial_capped(40, 20, 1000) == 1001);  // saturated
  std::vector<std::vector<int>> serial;
  for_each_combination(6, 3, [&](const std::vector<int>& s) { serial.push_back(s); });
  REQUIRE(serial.size() == 20);
  std::vector<int> J;
  for (std::uint64_t r = 0; r < 20; ++r) {
    unrank_combination(r, 6, 3, J);
    CHECK(J == serial[r]);
  }
}

TEST_CASE("equispaced full-order trig system discretizes exactly") {
  // 5 consecutive frequencies sampled at 5 equispaced points: discrete
  // Parseval makes every subset constant ratio one
  const auto dict = trig_dictionary(frequency_set_consecutive(5));
  const PointSet xi = equispaced_torus(5, 1);
  const auto rep = verify_universal_discretization(dict, xi, 5, Side::two_sided);
  CHECK(rep.certified);
  CHECK(rep.mode == "exhaustive");
  CHECK(rep.C1 == doctest::Approx(1.0).epsilon(1e-10));
  REQUIRE(rep.C2.has_value());
  CHECK(*rep.C2 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.subset_total == 1);
}

TEST_CASE("fewer points than the subspace dimension forces C1 = 0") {
  const auto dict = trig_dictionary(frequency_set_consecutive(6));
  Rng rng(31);
  const PointSet xi = draw_points(MeasureSpec::torus(1), 3, rng);
  const auto rep = verify_universal_discretization(dict, xi, 4, Side::one_sided);
  CHECK(rep.C1 == 0.0);
}

TEST_CASE("soundness: certified C1/C2 bound random members of the worst subspace") {
  const auto dict = trig_dictionary(frequency_set_consecutive(8));
  Rng rng(55);
  const PointSet xi = draw_points(MeasureSpec::torus(1), 24, rng);
  const auto rep = verify_universal_discretization(dict, xi, 3, Side::two_sided);
  REQUIRE(rep.certified);

  const Quadrature q = default_quadrature_for(dict);
  const Eigen::MatrixXcd phi_xi = design_matrix(dict, xi.points);
  const Eigen::MatrixXcd phi_q = design_matrix(dict, q.nodes);
  std::vector<int> J;
  for (int trial = 0; trial < 1000; ++trial) {
    // random subset, random member: the sampled-to-continuous ratio must sit
    // inside [C1, C2] up to roundoff
    const std::uint64_t r = rng.below(binomial_capped(8, 3, 1'000'000));
    unrank_combination(r, 8, 3, J);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(8);
    for (int idx : J) c(idx) = cplx(rng.normal(), rng.normal());
    const Eigen::VectorXcd at_xi = phi_xi * c;
    const Eigen::VectorXcd on_q = phi_q * c;
    double sampled = 0.0;
    for (Eigen::Index j = 0; j < at_xi.size(); ++j)
      sampled += xi.weights(j) * std::norm(at_xi(j));
    const double cont = sqr(norm_lp(on_q, q, 2.0));
    if (cont < 1e-14) continue;
    const double ratio = sampled / cont;
    CHECK(ratio >= rep.C1 - 1e-9);
    CHECK(ratio <= *rep.C2 + 1e-9);
  }
}

TEST_CASE("C1 is monotone nonincreasing in v and bracketed by the trace identity") {
  const auto dict = trig_dictionary(frequency_set_consecutive(7));
  Rng rng(77);
  const PointSet xi = draw_points(MeasureSpec::torus(1), 20, rng);
  double prev = 2.0;
  for (int v = 1; v <= 5; ++v) {
    const auto rep = verify_universal_discretization(dict, xi, v, Side::two_sided);
    CHECK(rep.C1 <= prev + 1e-12);
    prev = rep.C1;
    // unimodular elements with uniform weights give unit diagonal, so the
    // eigenvalue mean pins C1 <= 1 <= C2
    CHECK(rep.C1 <= 1.0 + 1e-12);
    CHECK(*rep.C2 >= 1.0 - 1e-12);
    CHECK(rep.C1 <= *rep.C2 + 1e-12);
  }
  // v = 1 subsets of a unimodular system have ratio exactly one
  const auto rep1 = verify_universal_discretization(dict, xi, 1, Side::two_sided);
  CHECK(rep1.C1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*rep1.C2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("worst subset is reported and reproducible") {
  const auto dict = trig_dictionary(frequency_set_consecutive(9));
  Rng rng(13);
  const PointSet xi = draw_points(MeasureSpec::torus(1), 12, rng);
  const auto a = verify_universal_discretization(dict, xi, 2, Side::two_sided);
  const auto b = verify_universal_discretization(dict, xi, 2, Side::two_sided);
  CHECK(a.C1 == b.C1);
  CHECK(a.worst_subset_low == b.worst_subset_low);
  REQUIRE(a.worst_subset_low.size() == 2);
  CHECK(a.worst_subset_low[0] < a.worst_subset_low[1]);
}

TEST_CASE("serial and parallel subset scans agree bitwise") {
  const auto dict = trig_dictionary(frequency_set_consecutive(10));
  Rng rng(99);
  const PointSet xi = draw_points(MeasureSpec::torus(1), 15, rng);
  VerifyOptions ser, par;
  ser.exec = Exec::serial;
  par.exec = Exec::parallel;
  const auto a = verify_universal_discretization(dict, xi, 3, Side::two_sided, {}, ser);
  const auto b = verify_universal_discretization(dict, xi, 3, Side::two_sided, {}, par);
  CHECK(a.C1 == b.C1);
  CHECK(*a.C2 == *b.C2);
  CHECK(a.worst_subset_low == b.worst_subset_low);
  CHECK(a.worst_subset_high == b.worst_subset_high);
}

TEST_CASE("subset cap triggers the flagged random audit") {
  const auto dict = trig_dictionary(frequency_set_consecutive(16));
  Rng rng(5);
  const PointSet xi = draw_points(MeasureSpec::torus(1), 30, rng);
  VerifyOptions capped;
  capped.subset_cap = 10;
  capped.audit_count = 50;
  capped.audit_seed = 9;
  const auto audit = verify_universal_discretization(dict, xi, 2, Side::one_sided, {}, capped);
  CHECK_FALSE(audit.certified);
  CHECK(audit.mode == "random-audit");
  CHECK(audit.subsets_checked == 50);
  CHECK(audit.seed == 9);
  // audited minimum can only overestimate the exhaustive one
  const auto full = verify_universal_discretization(dict, xi, 2, Side::one_sided);
  CHECK(full.certified);
  CHECK(audit.C1 >= full.C1 - 1e-12);
}

TEST_CASE("weighted gegenbauer verification at Gauss-Chebyshev nodes") {
  const Quadrature cheb = build_quadrature(MeasureSpec::chebyshev(), 8);
  const PointSet xi = make_point_set(cheb.nodes, "gauss-chebyshev");
  const auto rep =
      verify_weighted_gegenbauer_discretization({0.0, 3}, xi, 3, Side::two_sided);
  CHECK(rep.certified);
  CHECK(rep.C1 >= 0.5);
  REQUIRE(rep.C2.has_value());
  CHECK(*rep.C2 <= 1.5);
}

TEST_CASE("weighted gegenbauer verification with random Chebyshev draws") {
  Rng rng(2024);
  const PointSet xi = draw_points(MeasureSpec::chebyshev(), 400, rng);
  const auto rep =
      verify_weighted_gegenbauer_discretization({0.5, 4}, xi, 2, Side::two_sided);
  CHECK(rep.C1 >= 0.5);
  CHECK(*rep.C2 <= 1.5);
}

TEST_CASE("find_universal_points: unimodular single-element subspaces always certify") {
  const auto dict = trig_dictionary(frequency_set_consecutive(8));
  int successes = 0;
  for (int s = 0; s < 100; ++s) {
    Rng rng(1000 + s);
    FindOptions fo;
    fo.structured_first = false;
    fo.max_attempts = 1;
    const auto r = find_universal_points(dict, 1, 0.5, 32, rng, fo);
    if (r.points) {
      ++successes;
      CHECK(r.report.C1 == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(successes >= 95);
}

TEST_CASE("find_universal_points: structured equispaced candidate wins immediately") {
  const auto dict = trig_dictionary(frequency_set_consecutive(6));
  Rng rng(8);
  const auto r = find_universal_points(dict, 6, 0.9, 6, rng);
  REQUIRE(r.points.has_value());
  CHECK(r.attempts == 1);
  CHECK(r.points->provenance == "equispaced");
  CHECK(r.report.C1 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("estimate_m_required: trivial and impossible targets") {
  const auto dict2 = trig_dictionary(frequency_set_consecutive(2));
  Rng rng(4);
  const auto est = estimate_m_required(dict2, 1, 0.5, rng, 3, 1 << 10);
  CHECK_FALSE(est.capped);
  CHECK(est.m == 1);  // unimodular v = 1 certifies at a single point
  CHECK(est.m <= 8);

  // C1 > 1 cannot be reached: eigenvalue mean equals one
  Rng rng2(6);
  const auto est2 = estimate_m_required(dict2, 2, 1.25, rng2, 3, 64);
  CHECK(est2.capped);
  CHECK(est2.m == 64);
}

TEST_CASE("estimate_m_required: full-order subspace needs only a small multiple of N") {
  const auto dict = trig_dictionary(frequency_set_consecutive(5));
  Rng rng(12);
  const auto est = estimate_m_required(dict, 5, 0.5, rng, 5, 1 << 12);
  CHECK_FALSE(est.capped);
  CHECK(est.m >= 5);
  CHECK(est.m <= 40);
}

TEST_CASE("argument validation") {
  const auto dict = trig_dictionary(frequency_set_consecutive(4));
  Rng rng(1);
  const PointSet xi = draw_points(MeasureSpec::torus(1), 4, rng);
  CHECK_THROWS_AS(verify_universal_discretization(dict, xi, 0, Side::one_sided), param_error);
  CHECK_THROWS_AS(verify_universal_discretization(dict, xi, 5, Side::one_sided), param_error);
  PointSet bad = xi;
  bad.weights(0) = 0.0;
  CHECK_THROWS_AS(verify_universal_discretization(dict, bad, 2, Side::one_sided), param_error);
}
