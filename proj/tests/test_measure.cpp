#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "srlab/measure.hpp"

using namespace srlab;

namespace {

Eigen::VectorXcd tabulate(const Quadrature& q, double (*f)(double)) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) v(static_cast<Eigen::Index>(i)) = f(q.nodes[i][0]);
  return v;
}

double integrate(const Quadrature& q, const Eigen::VectorXcd& f) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) acc += q.weights(i) * f(i).real();
  return acc;
}

}  // namespace

TEST_CASE("gegenbauer normalizer closed forms") {
  CHECK(gegenbauer_normalizer(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(gegenbauer_normalizer(-0.5) == doctest::Approx(1.0 / pi).epsilon(1e-14));
  // int (1-x^2) dx = 4/3
  CHECK(gegenbauer_normalizer(1.0) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("interval quadrature: monomial moments under the uniform measure") {
  const Quadrature q = build_quadrature(MeasureSpec::gegenbauer(0.0), 5);
  CHECK(q.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(q.exactness_degree == 9);
  CHECK(integrate(q, tabulate(q, [](double x) { return x * x * x * x; })) ==
        doctest::Approx(0.2).epsilon(1e-13));
  CHECK(integrate(q, tabulate(q, [](double x) { return x * x; })) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(integrate(q, tabulate(q, [](double x) { return x; })) ==
        doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("interval quadrature: single-node rule sits at the origin") {
  const Quadrature q = build_quadrature(MeasureSpec::gegenbauer(0.0), 1);
  REQUIRE(q.size() == 1);
  CHECK(q.nodes[0][0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(q.weights(0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("chebyshev quadrature matches the closed-form rule") {
  const int n = 7;
  const Quadrature q = build_quadrature(MeasureSpec::chebyshev(), n);
  // nodes cos((2j+1)pi/2n) with equal weights 1/n, ascending order
  for (int j = 0; j < n; ++j) {
    const double expected = std::cos((2.0 * (n - 1 - j) + 1.0) * pi / (2.0 * n));
    CHECK(q.nodes[j][0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(q.weights(j) == doctest::Approx(1.0 / n).epsilon(1e-12));
  }
}

TEST_CASE("torus quadrature integrates low exponentials exactly") {
  const Quadrature q = build_quadrature(MeasureSpec::torus(1), 5);
  CHECK(q.exactness_degree == 4);
  for (int k = -4; k <= 4; ++k) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
      acc += q.weights(static_cast<Eigen::Index>(i)) *
             cplx(std::cos(k * q.nodes[i][0]), std::sin(k * q.nodes[i][0]));
    const double expected = (k == 0) ? 1.0 : 0.0;
    CHECK(std::abs(acc - expected) < 1e-14);
  }
}

TEST_CASE("torus tensor grid covers d = 2") {
  const Quadrature q = build_quadrature(MeasureSpec::torus(2), 3);
  CHECK(q.size() == 9);
  CHECK(q.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("norm_lp: linear function under the uniform measure") {
  const Quadrature q = build_quadrature(MeasureSpec::gegenbauer(0.0), 8);
  const auto f = tabulate(q, [](double x) { return x; });
  CHECK(norm_lp(f, q, 2.0) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-13));
  // |x^2| is a polynomial, so the p = 1 norm of x^2 is exact: 1/3
  const auto f2 = tabulate(q, [](double x) { return x * x; });
  CHECK(norm_lp(f2, q, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(norm_lp(f, q, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(q.nodes.back()[0]).epsilon(1e-14));
  CHECK_THROWS_AS(norm_lp(f, q, 0.5), param_error);
}

TEST_CASE("norm properties: homogeneity and triangle inequality") {
  const Quadrature q = build_quadrature(MeasureSpec::torus(1), 9);
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd f(static_cast<Eigen::Index>(q.size())), g(static_cast<Eigen::Index>(q.size()));
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      f(i) = cplx(rng.normal(), rng.normal());
      g(i) = cplx(rng.normal(), rng.normal());
    }
    const double p = (trial % 3 == 0) ? 1.0 : (trial % 3 == 1) ? 2.0 : 3.5;
    const double s = 0.5 + rng.uniform01();
    CHECK(norm_lp(s * f, q, p) == doctest::Approx(s * norm_lp(f, q, p)).epsilon(1e-12));
    CHECK(norm_lp(f + g, q, p) <= norm_lp(f, q, p) + norm_lp(g, q, p) + 1e-12);
  }
}

TEST_CASE("mu_xi norm: pointwise-unimodular function has norm one") {
  const Quadrature q = build_quadrature(MeasureSpec::torus(1), 9);
  Rng rng(7);
  const PointSet xi = draw_points(MeasureSpec::torus(1), 6, rng);
  Eigen::VectorXcd onq(static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i)
    onq(static_cast<Eigen::Index>(i)) = cplx(std::cos(q.nodes[i][0]), std::sin(q.nodes[i][0]));
  Eigen::VectorXcd at(6);
  for (int j = 0; j < 6; ++j) at(j) = cplx(std::cos(xi.points[j][0]), std::sin(xi.points[j][0]));
  CHECK(norm_l2_mu_xi(onq, q, at) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("mu_xi norm dominates the halved continuous norm") {
  const Quadrature q = build_quadrature(MeasureSpec::torus(1), 9);
  Rng rng(11);
  const PointSet xi = draw_points(MeasureSpec::torus(1), 5, rng);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXcd onq(static_cast<Eigen::Index>(q.size()));
    for (Eigen::Index i = 0; i < onq.size(); ++i) onq(i) = cplx(rng.normal(), rng.normal());
    Eigen::VectorXcd at(5);
    for (int j = 0; j < 5; ++j) at(j) = cplx(rng.normal(), rng.normal());
    const double full = norm_l2_mu_xi(onq, q, at);
    CHECK(full >= norm_lp(onq, q, 2.0) / std::sqrt(2.0) - 1e-12);
    // exact decomposition of the square
    const double direct = std::sqrt(0.5 * sqr(norm_lp(onq, q, 2.0)) + 0.5 * sqr(sample_norm_mean(at, 2.0)));
    CHECK(full == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("weighted sample norm: uniform weights reduce to the mean form") {
  Rng rng(3);
  Eigen::VectorXcd s(8);
  for (int j = 0; j < 8; ++j) s(j) = cplx(rng.normal(), rng.normal());
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(8, 1.0 / 8.0);
  for (double p : {1.0, 2.0, 4.0})
    CHECK(sample_norm_weighted(s, w, p) == doctest::Approx(sample_norm_mean(s, p)).epsilon(1e-13));
  CHECK(sample_norm_weighted(s, w, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(s.cwiseAbs().maxCoeff()).epsilon(1e-14));
}

TEST_CASE("norm_lp_mu_w_xi agrees with the two-term decomposition") {
  const Quadrature q = build_quadrature(MeasureSpec::torus(1), 7);
  Rng rng(19);
  Eigen::VectorXcd onq(static_cast<Eigen::Index>(q.size()));
  for (Eigen::Index i = 0; i < onq.size(); ++i) onq(i) = cplx(rng.normal(), rng.normal());
  Eigen::VectorXcd at(4);
  for (int j = 0; j < 4; ++j) at(j) = cplx(rng.normal(), rng.normal());
  Eigen::VectorXd w(4);
  for (int j = 0; j < 4; ++j) w(j) = 0.1 + rng.uniform01();
  const double p = 3.0;
  double disc = 0.0;
  for (int j = 0; j < 4; ++j) disc += w(j) * std::pow(std::abs(at(j)), p);
  const double expected = std::pow(0.5 * std::pow(norm_lp(onq, q, p), p) + disc / (2.0 * w.sum()), 1.0 / p);
  CHECK(norm_lp_mu_w_xi(onq, q, at, w, p) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("point draws are deterministic per seed and land in the domain") {
  Rng a(123), b(123), c(124);
  const auto p1 = draw_points(MeasureSpec::torus(2), 10, a);
  const auto p2 = draw_points(MeasureSpec::torus(2), 10, b);
  const auto p3 = draw_points(MeasureSpec::torus(2), 10, c);
  REQUIRE(p1.size() == 10);
  for (int j = 0; j < 10; ++j) {
    CHECK(p1.points[j] == p2.points[j]);
    for (double x : p1.points[j]) {
      CHECK(x >= 0.0);
      CHECK(x < two_pi);
    }
  }
  CHECK(p1.points[0] != p3.points[0]);

  Rng d(5);
  const auto pi_draw = draw_points(MeasureSpec::gegenbauer(0.5), 64, d);
  for (const auto& pt : pi_draw.points) {
    CHECK(pt[0] >= -1.0);
    CHECK(pt[0] <= 1.0);
  }
  CHECK(p1.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("equispaced torus points") {
  const PointSet s = equispaced_torus(4, 1);
  REQUIRE(s.size() == 4);
  CHECK(s.points[2][0] == doctest::Approx(pi).epsilon(1e-14));
  CHECK(s.weights(0) == doctest::Approx(0.25).epsilon(1e-14));
}
