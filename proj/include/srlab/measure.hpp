#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "srlab/common.hpp"

namespace srlab {

enum class Domain { torus, interval };

// Probability measure on the domain. Torus: normalized Lebesgue on
// [0,2pi)^dim. Interval: density c_alpha (1-x^2)^alpha on [-1,1], alpha > -1;
// alpha = 0 is uniform, alpha = -1/2 is the Chebyshev measure.
struct MeasureSpec {
  Domain domain = Domain::torus;
  int dim = 1;
  double alpha = 0.0;

  static MeasureSpec torus(int d) { return {Domain::torus, d, 0.0}; }
  static MeasureSpec gegenbauer(double alpha) { return {Domain::interval, 1, alpha}; }
  static MeasureSpec chebyshev() { return {Domain::interval, 1, -0.5}; }

  bool operator==(const MeasureSpec&) const = default;
};

// Normalizing constant c_alpha = 1 / int_{-1}^{1} (1-x^2)^alpha dx.
double gegenbauer_normalizer(double alpha);

struct Quadrature {
  std::vector<Point> nodes;
  Eigen::VectorXd weights;  // positive, sums to 1
  // torus: integrates exp(i<k,x>) exactly for max_j |k_j| <= exactness_degree;
  // interval: exact for polynomials up to this total degree.
  int exactness_degree = 0;
  MeasureSpec measure;

  std::size_t size() const { return nodes.size(); }
};

// torus: tensor grid with `resolution` equispaced nodes per coordinate;
// interval: `resolution`-node Gauss rule for the (1-x^2)^alpha weight
// (Golub-Welsch on the symmetric Jacobi matrix).
Quadrature build_quadrature(const MeasureSpec& mu, int resolution);

// Sample point sequence, plus the discretization weights w_nu used in
// sampled-Gram assemblies. Default weights are uniform 1/m.
struct PointSet {
  std::vector<Point> points;
  Eigen::VectorXd weights;
  std::string provenance;

  std::size_t size() const { return points.size(); }
};

PointSet make_point_set(std::vector<Point> pts, std::string provenance);
PointSet equispaced_torus(int m, int d);
// m iid draws from mu
PointSet draw_points(const MeasureSpec& mu, int m, Rng& rng);

// ----- norms -----
// All L_p(mu) quantities are quadrature sums: f is given by its values on
// q.nodes and the reported value is exact for the quadrature measure.

// (sum_i qw_i |f_i|^p)^(1/p); p = inf gives max_i |f_i|
double norm_lp(const Eigen::VectorXcd& f_on_q, const Quadrature& q, double p);

// ||f||_{L2(mu_xi)} with mu_xi = mu/2 + (1/2m) sum_j delta_{xi_j}
double norm_l2_mu_xi(const Eigen::VectorXcd& f_on_q, const Quadrature& q,
                     const Eigen::VectorXcd& f_at_xi);

// L_p(mu_{w,xi}) with mu_{w,xi} = mu/2 + (1/(2|w|_1)) sum_j w_j delta_{xi_j}
double norm_lp_mu_w_xi(const Eigen::VectorXcd& f_on_q, const Quadrature& q,
                       const Eigen::VectorXcd& f_at_xi, const Eigen::VectorXd& w, double p);

// (sum_nu w_nu |s_nu|^p)^(1/p), the raw weighted sample norm; p = inf -> max
double sample_norm_weighted(const Eigen::VectorXcd& s, const Eigen::VectorXd& w, double p);

// ((1/m) sum_nu |s_nu|^p)^(1/p)
double sample_norm_mean(const Eigen::VectorXcd& s, double p);

}  // namespace srlab
