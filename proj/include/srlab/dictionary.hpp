#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "srlab/measure.hpp"

namespace srlab {

// Integer multi-index families on Z^d, ordered lexicographically.
struct FrequencySet {
  std::string kind;  // "gamma" | "step-hyperbolic" | "dyadic-block" | "explicit"
  int dim = 1;
  std::vector<std::vector<int>> indices;

  std::size_t size() const { return indices.size(); }
};

// Hyperbolic cross Gamma(N): prod_j max(|k_j|, 1) <= N.
FrequencySet frequency_set_gamma(int N, int d, std::size_t cap = 1'000'000);
// Dyadic block rho(s): [2^{s_j - 1}] <= |k_j| < 2^{s_j} per coordinate.
FrequencySet frequency_set_block(const std::vector<int>& s, std::size_t cap = 1'000'000);
// Step hyperbolic cross Q_n: union of rho(s) over |s|_1 <= n.
FrequencySet frequency_set_step(int n, int d, std::size_t cap = 1'000'000);
FrequencySet frequency_set_explicit(std::vector<std::vector<int>> indices);
// n consecutive integers centered at zero: {-floor(n/2), ..., ceil(n/2)-1}, d = 1.
FrequencySet frequency_set_consecutive(int n);

// Dyadic level of a multi-index: sum_j s(k_j) with s(0)=0, s(k)=floor(log2|k|)+1.
int dyadic_level(const std::vector<int>& k);

struct GegenbauerParams {
  double alpha = 0.0;
  int max_degree = 0;
};

// Finite evaluation system. Elements are complex-valued; eval(j, x) is pure.
struct Dictionary {
  std::string kind;  // "trig" | "gegenbauer" | "gegenbauer-weighted" | "explicit"
  int size = 0;
  MeasureSpec measure;  // measure of the L2 norms the system is tied to
  std::function<cplx(int, const Point&)> eval;
  bool orthonormal = false;
  std::optional<double> uniform_bound;  // sup_x |phi_j(x)| <= bound for all j
  std::optional<double> riesz_lower;    // sum |a_j|^2 <= K ||sum a_j phi_j||^2
  // per-coordinate trig frequency bound, or polynomial degree bound
  int max_degree = 0;
  std::optional<FrequencySet> freq;               // trig systems carry their indices
  std::optional<Eigen::MatrixXcd> known_gram;     // exact Gram when available analytically
  // batch path evaluating all elements in one pass (recurrence systems);
  // must agree with eval element-wise
  std::function<Eigen::VectorXcd(const Point&)> eval_all_fn;

  Eigen::VectorXcd evaluate_all(const Point& x) const;
};

Dictionary trig_dictionary(const FrequencySet& freq);

// Orthonormal value of degree n at x for the (1-x^2)^alpha weight, via the
// three-term recurrence; alpha > -1.
double gegenbauer_eval(double alpha, int n, double x);
// All degrees 0..max_n at once (one recurrence pass).
Eigen::VectorXd gegenbauer_eval_all(double alpha, int max_n, double x);

// Orthonormal system under mu_alpha, degrees 0..max_degree.
Dictionary gegenbauer_dictionary(const GegenbauerParams& params);

// Uniformly bounded variant: phi_n(x) = L_n(x) (1-x^2)^{alpha/2 + 1/4} / C,
// C = empirical max over the evaluation grid; orthogonal under the Chebyshev
// measure with Gram = (C^-2 / (pi c_alpha)) I.
Dictionary gegenbauer_weighted_dictionary(const GegenbauerParams& params, int oversample = 16);

// rows = points, cols = dictionary elements
Eigen::MatrixXcd design_matrix(const Dictionary& dict, const std::vector<Point>& pts);

// Gram via quadrature, M[i][j] = <phi_j, phi_i>_mu. Hermitian. exact_out
// reports whether q's exactness degree covers products of elements.
Eigen::MatrixXcd dictionary_gram(const Dictionary& dict, const Quadrature& q,
                                 bool* exact_out = nullptr);

// Quadrature exact for products of dictionary elements.
Quadrature default_quadrature_for(const Dictionary& dict);

// Dense grid for uniform-norm estimates. Torus: equispaced tensor grid with
// total size >= oversample * size; interval: Chebyshev-extrema grid (includes
// the endpoints, where unweighted polynomial systems peak).
struct EvalGrid {
  std::vector<Point> points;
  std::string kind;
  std::size_t size() const { return points.size(); }
};

EvalGrid evaluation_grid(const Dictionary& dict, int oversample = 16);

// Exact Gram: known_gram if set, identity if orthonormal, else quadrature Gram.
Eigen::MatrixXcd exact_gram(const Dictionary& dict, const Quadrature& q);

}  // namespace srlab
