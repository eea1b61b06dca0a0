#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "srlab/dictionary.hpp"
#include "srlab/lower_bounds.hpp"
#include "srlab/measure.hpp"

using namespace srlab;

TEST_CASE("nullspace basis: no points gives the whole space") {
  const Dictionary dict = trig_dictionary(frequency_set_consecutive(5));
  const Quadrature q = default_quadrature_for(dict);
  const PointSet none = make_point_set({}, "empty");
  const NullspaceBasis nb = nullspace_basis(dict, none, q);
  CHECK(nb.dim == 5);
  CHECK(nb.gram_defect < 1e-10);
}

TEST_CASE("nullspace basis: dimension, vanishing, orthonormality") {
  const Dictionary dict = trig_dictionary(frequency_set_consecutive(5));
  const Quadrature q = default_quadrature_for(dict);
  Rng rng(51);
  const PointSet xi = draw_points(dict.measure, 2, rng);
  const NullspaceBasis nb = nullspace_basis(dict, xi, q);
  CHECK(nb.dim >= 3);
  CHECK(nb.max_point_value < 1e-10);
  CHECK(nb.gram_defect < 1e-10);
}

TEST_CASE("nullspace basis: unisolvent sampling leaves nothing") {
  const Dictionary dict = trig_dictionary(frequency_set_consecutive(4));
  const Quadrature q = default_quadrature_for(dict);
  // equispaced points, as many as dimensions: the sampling map is injective
  const PointSet xs = equispaced_torus(4, 1);
  const NullspaceBasis nb = nullspace_basis(dict, xs, q);
  CHECK(nb.dim == 0);
}

TEST_CASE("vertex search: full space gives the all-ones solution") {
  const Eigen::MatrixXcd basis = Eigen::MatrixXcd::Identity(5, 5);
  const VertexSearchResult vs = lorentz_vertex_search(basis, 5);
  REQUIRE(vs.found);
  CHECK(vs.strong_count == 5);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(std::abs(vs.z(i)) - 1.0) < 1e-9);
}

TEST_CASE("vertex search: a single basis vector") {
  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(4, 1);
  basis(1, 0) = cplx(0.0, 2.0);
  const VertexSearchResult vs = lorentz_vertex_search(basis, 1);
  REQUIRE(vs.found);
  CHECK(vs.strong_count >= 1);
  CHECK(std::abs(vs.z(1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(vs.z(0)) < 1e-12);
}

TEST_CASE("vertex search: random low-dimensional subspaces validate") {
  Rng rng(52);
  for (int rep = 0; rep < 20; ++rep) {
    Rng fr = rng.fork(static_cast<std::uint64_t>(rep));
    Eigen::MatrixXcd basis(4, 2);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j) basis(i, j) = cplx(fr.normal(), fr.normal());
    const VertexSearchResult vs = lorentz_vertex_search(basis, 2);
    REQUIRE(vs.found);
    CHECK(vs.strong_count >= 2);
    CHECK(vs.z.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("D1 at p=2: equispaced full sampling is an exact Parseval pass") {
  const Dictionary dict = trig_dictionary(frequency_set_consecutive(6));
  const Quadrature q = default_quadrature_for(dict);
  const PointSet X = equispaced_torus(6, 1);
  const D1Certificate cert = check_condition_D1(dict, X, 2.0, q);
  CHECK(cert.certified);
  CHECK(cert.passed);
  CHECK(cert.vt5_low == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cert.vt5_high == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("D1 fails on rank-deficient point sets") {
  const Dictionary dict = trig_dictionary(frequency_set_consecutive(6));
  const Quadrature q = default_quadrature_for(dict);
  const PointSet X = equispaced_torus(4, 1);  // fewer points than dimensions
  const D1Certificate cert = check_condition_D1(dict, X, 2.0, q);
  CHECK(!cert.passed);
  CHECK(cert.vt5_low < 1e-10);
}

TEST_CASE("D1 at p=4: oversampled equispaced points survive the seeded search") {
  const Dictionary dict = trig_dictionary(frequency_set_consecutive(4));
  // |f|^4 has four times the bandwidth of f: the quadrature must resolve it
  const Quadrature q = build_quadrature(dict.measure, 4 * dict.max_degree + 1);
  const PointSet X = equispaced_torus(16, 1);
  D1Options opts;
  opts.restarts = 60;
  const D1Certificate cert = check_condition_D1(dict, X, 4.0, q, opts);
  CHECK(!cert.certified);
  CHECK(cert.passed);
  CHECK(cert.vt4_low >= 0.5 - 1e-9);
  CHECK(cert.vt4_high <= 1.5 + 1e-9);
  // the searched range must contain the ratio of any specific function
  Rng rng(53);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::VectorXcd c(4);
    for (int j = 0; j < 4; ++j) c(j) = cplx(rng.normal(), rng.normal());
    const FunctionData f = tabulate_span(dict, c, q, &X);
    double num = 0.0;
    for (Eigen::Index i = 0; i < f.at_points->size(); ++i)
      num += std::pow(std::abs((*f.at_points)(i)), 4.0);
    num /= static_cast<double>(X.size());
    const double den = std::pow(norm_lp(f.on_quadrature, q, 4.0), 4.0);
    const double ratio = num / den;
    CHECK(ratio >= cert.vt4_low - 1e-9);
    CHECK(ratio <= cert.vt4_high + 1e-9);
  }
}

TEST_CASE("tau witness: trig D=8, m=4, M=8, p=2") {
  const Dictionary dict = trig_dictionary(frequency_set_consecutive(8));
  const Quadrature q = default_quadrature_for(dict);
  const PointSet X = equispaced_torus(8, 1);
  const D1Certificate cert = check_condition_D1(dict, X, 2.0, q);
  REQUIRE(cert.passed);

  Rng rng(54);
  const PointSet xi = draw_points(dict.measure, 4, rng);
  const TauWitness w = tau_m_witness(dict, xi, 2.0, q, cert);
  REQUIRE(w.found);
  CHECK(w.nullspace_dim >= 4);
  CHECK(w.max_at_xi <= 1e-10);
  CHECK(w.p_norm <= 1.0 + 1e-10);
  // (1/3) sqrt((D-m)/M) = (1/3) sqrt(1/2)
  CHECK(w.bound == doctest::Approx(std::sqrt(0.5) / 3.0).epsilon(1e-12));
  CHECK(w.bound_satisfied);
  CHECK(w.l2_value >= std::sqrt(0.5) / 3.0 - 1e-12);

  // the certified value is the recomputed quadrature norm of the witness
  const FunctionData g = tabulate_span(dict, w.coeffs, q);
  CHECK(w.l2_value == doctest::Approx(norm_lp(g.on_quadrature, q, 2.0)).epsilon(1e-12));
}

TEST_CASE("tau witness: p=4 run validates and meets the display bound") {
  const Dictionary dict = trig_dictionary(frequency_set_consecutive(6));
  const Quadrature q = build_quadrature(dict.measure, 4 * dict.max_degree + 1);
  const PointSet X = equispaced_torus(24, 1);
  D1Options opts;
  opts.restarts = 40;
  const D1Certificate cert = check_condition_D1(dict, X, 4.0, q, opts);
  REQUIRE(cert.passed);

  Rng rng(55);
  const PointSet xi = draw_points(dict.measure, 3, rng);
  const TauWitness w = tau_m_witness(dict, xi, 4.0, q, cert);
  REQUIRE(w.found);
  CHECK(w.p_norm <= 1.0 + 1e-10);
  CHECK(w.max_at_xi <= 1e-10);
  const double display = std::sqrt(std::pow(2.0, -0.5) * (2.0 / 3.0) * 3.0 / (3.0 * 24.0));
  CHECK(w.bound == doctest::Approx(display).epsilon(1e-12));
  CHECK(w.bound_satisfied);
}

TEST_CASE("tau witness: unisolvent sampling yields no certificate") {
  const Dictionary dict = trig_dictionary(frequency_set_consecutive(4));
  const Quadrature q = default_quadrature_for(dict);
  const PointSet X = equispaced_torus(4, 1);
  const D1Certificate cert = check_condition_D1(dict, X, 2.0, q);
  REQUIRE(cert.passed);
  const TauWitness w = tau_m_witness(dict, equispaced_torus(4, 1), 2.0, q, cert);
  CHECK(!w.found);
  CHECK(!w.failure.empty());
}
