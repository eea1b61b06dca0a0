#include "srlab/measure.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace srlab {

namespace {

// Monic three-term recurrence coefficient beta_k for the symmetric Jacobi
// weight (1-x^2)^alpha. beta_1 = 1/(3+2alpha); for k >= 2
// beta_k = k(k+2alpha) / (4(k+alpha)^2 - 1). The k = 1 formula also follows
// from the general one except at alpha = -1/2 where it degenerates to 0/0.
double jacobi_beta(int k, double alpha) {
  if (k == 1) return 1.0 / (3.0 + 2.0 * alpha);
  return k * (k + 2.0 * alpha) / (4.0 * sqr(k + alpha) - 1.0);
}

Quadrature gauss_gegenbauer(double alpha, int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(jacobi_beta(k, alpha));
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Quadrature q;
  q.measure = MeasureSpec::gegenbauer(alpha);
  q.exactness_degree = 2 * n - 1;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = {es.eigenvalues()(i)};
    // weights of the probability measure: beta_0 = 1
    q.weights(i) = sqr(es.eigenvectors()(0, i));
  }
  return q;
}

}  // namespace

double gegenbauer_normalizer(double alpha) {
  if (alpha <= -1.0) throw param_error("gegenbauer_normalizer: alpha must exceed -1");
  // int (1-x^2)^alpha dx = sqrt(pi) Gamma(alpha+1) / Gamma(alpha+3/2)
  const double v = std::sqrt(pi) * std::exp(std::lgamma(alpha + 1.0) - std::lgamma(alpha + 1.5));
  return 1.0 / v;
}

Quadrature build_quadrature(const MeasureSpec& mu, int resolution) {
  if (resolution < 1) throw param_error("build_quadrature: resolution must be >= 1");
  if (mu.domain == Domain::interval) {
    if (mu.dim != 1) throw param_error("build_quadrature: interval measures are 1-d");
    if (mu.alpha <= -1.0) throw param_error("build_quadrature: alpha must exceed -1");
    return gauss_gegenbauer(mu.alpha, resolution);
  }
  if (mu.dim < 1) throw param_error("build_quadrature: dim must be >= 1");
  std::size_t total = 1;
  for (int j = 0; j < mu.dim; ++j) {
    total *= static_cast<std::size_t>(resolution);
    if (total > 50'000'000) throw size_error("build_quadrature: tensor grid too large");
  }
  Quadrature q;
  q.measure = mu;
  q.exactness_degree = resolution - 1;
  q.nodes.reserve(total);
  Point x(mu.dim, 0.0);
  std::vector<int> idx(mu.dim, 0);
  const double h = two_pi / resolution;
  while (true) {
    for (int j = 0; j < mu.dim; ++j) x[j] = h * idx[j];
    q.nodes.push_back(x);
    int j = mu.dim - 1;
    while (j >= 0 && ++idx[j] == resolution) idx[j--] = 0;
    if (j < 0) break;
  }
  q.weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(total), 1.0 / static_cast<double>(total));
  return q;
}

PointSet make_point_set(std::vector<Point> pts, std::string provenance) {
  PointSet s;
  s.points = std::move(pts);
  const auto m = static_cast<Eigen::Index>(s.points.size());
  s.weights = Eigen::VectorXd::Constant(m, m > 0 ? 1.0 / static_cast<double>(m) : 0.0);
  s.provenance = std::move(provenance);
  return s;
}

PointSet equispaced_torus(int m, int d) {
  if (m < 1) throw param_error("equispaced_torus: m must be >= 1");
  if (d != 1) throw param_error("equispaced_torus: only d = 1 equispacing is defined");
  std::vector<Point> pts(m);
  for (int j = 0; j < m; ++j) pts[j] = {two_pi * j / m};
  return make_point_set(std::move(pts), "equispaced");
}

PointSet draw_points(const MeasureSpec& mu, int m, Rng& rng) {
  if (m < 1) throw param_error("draw_points: m must be >= 1");
  std::vector<Point> pts(m);
  if (mu.domain == Domain::torus) {
    for (int j = 0; j < m; ++j) {
      Point x(mu.dim);
      for (int c = 0; c < mu.dim; ++c) x[c] = two_pi * rng.uniform01();
      pts[j] = std::move(x);
    }
  } else {
    // rejection against the Chebyshev proposal; ratio (1-x^2)^(alpha+1/2) <= 1
    // for alpha >= -1/2, which covers every measure used here
    if (mu.alpha < -0.5) throw param_error("draw_points: alpha < -1/2 sampling not supported");
    for (int j = 0; j < m; ++j) {
      double x;
      do {
        x = std::cos(pi * rng.uniform01());
      } while (rng.uniform01() > std::pow(1.0 - x * x, mu.alpha + 0.5));
      pts[j] = {x};
    }
  }
  return make_point_set(std::move(pts), "random-mu(seed=" + std::to_string(rng.seed()) + ")");
}

double norm_lp(const Eigen::VectorXcd& f_on_q, const Quadrature& q, double p) {
  if (f_on_q.size() != static_cast<Eigen::Index>(q.size()))
    throw param_error("norm_lp: value count must match quadrature size");
  if (std::isinf(p)) return f_on_q.size() ? f_on_q.cwiseAbs().maxCoeff() : 0.0;
  if (p < 1.0) throw param_error("norm_lp: p must be >= 1");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f_on_q.size(); ++i) acc += q.weights(i) * std::pow(std::abs(f_on_q(i)), p);
  return std::pow(acc, 1.0 / p);
}

double norm_l2_mu_xi(const Eigen::VectorXcd& f_on_q, const Quadrature& q,
                     const Eigen::VectorXcd& f_at_xi) {
  const double a = norm_lp(f_on_q, q, 2.0);
  const double b = sample_norm_mean(f_at_xi, 2.0);
  return std::sqrt(0.5 * a * a + 0.5 * b * b);
}

double norm_lp_mu_w_xi(const Eigen::VectorXcd& f_on_q, const Quadrature& q,
                       const Eigen::VectorXcd& f_at_xi, const Eigen::VectorXd& w, double p) {
  if (f_at_xi.size() != w.size()) throw param_error("norm_lp_mu_w_xi: weight count mismatch");
  if (p < 1.0 || std::isinf(p)) throw param_error("norm_lp_mu_w_xi: p must be finite and >= 1");
  const double wsum = w.sum();
  if (wsum <= 0.0) throw param_error("norm_lp_mu_w_xi: weights must have positive sum");
  double disc = 0.0;
  for (Eigen::Index j = 0; j < f_at_xi.size(); ++j) disc += w(j) * std::pow(std::abs(f_at_xi(j)), p);
  const double cont = std::pow(norm_lp(f_on_q, q, p), p);
  return std::pow(0.5 * cont + disc / (2.0 * wsum), 1.0 / p);
}

double sample_norm_weighted(const Eigen::VectorXcd& s, const Eigen::VectorXd& w, double p) {
  if (s.size() != w.size()) throw param_error("sample_norm_weighted: weight count mismatch");
  if (std::isinf(p)) return s.size() ? s.cwiseAbs().maxCoeff() : 0.0;
  if (p < 1.0) throw param_error("sample_norm_weighted: p must be >= 1");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < s.size(); ++j) acc += w(j) * std::pow(std::abs(s(j)), p);
  return std::pow(acc, 1.0 / p);
}

double sample_norm_mean(const Eigen::VectorXcd& s, double p) {
  if (s.size() == 0) return 0.0;
  return sample_norm_weighted(
      s, Eigen::VectorXd::Constant(s.size(), 1.0 / static_cast<double>(s.size())), p);
}

}  // namespace srlab
