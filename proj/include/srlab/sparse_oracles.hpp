#pragma once

#include "srlab/recovery.hpp"

namespace srlab {

// norm in which a best v-term error is measured
enum class NormSpec { l2_mu, l2_mu_xi, uniform_grid };

struct SigmaResult {
  double value = 0.0;
  std::vector<int> subset;  // optimal or best-found, sorted ascending
  // exact-exhaustive | exact-threshold | upper-bound-greedy | grid-estimate
  std::string certification;
  std::size_t grid_size = 0;  // uniform norm only
};

struct SigmaOptions {
  std::uint64_t subset_cap = 200'000;
  double tie_tol = 1e-12;
  Exec exec = Exec::parallel;
  double minimax_tol = 1e-6;
  int minimax_max_iter = 300;
};

// Best v-term error of f from dict in the requested norm. Hilbertian norms
// enumerate subsets with orthogonal projection (exact within the cap;
// orthonormal L2(mu) short-circuits to correlation thresholding); the uniform
// norm runs a per-subset discrete minimax on `grid` and is only an estimate.
// Above the cap a greedy pass gives an upper bound, tagged as such.
SigmaResult sigma_v(const Dictionary& dict, const Quadrature& q, const FunctionData& f, int v,
                    NormSpec norm, const PointSet* xi = nullptr, const EvalGrid* grid = nullptr,
                    const SigmaOptions& opts = {});

struct MinimaxFit {
  Eigen::VectorXcd coeffs;
  double value = 0.0;        // achieved max_i |values_i - (design c)_i|
  double lower_bound = 0.0;  // best weighted L2 error seen; never exceeds the true minimax
  int iterations = 0;
  bool converged = false;
};

// Discrete Chebyshev problem min_c max_i |values_i - (design c)_i| by
// Lawson-style multiplicative reweighting; `value` is the achieved maximum of
// the returned coefficients, so it upper-bounds the true minimax regardless
// of convergence, and [lower_bound, value] always brackets the optimum.
MinimaxFit minimax_fit(const Eigen::MatrixXcd& design, const Eigen::VectorXcd& values,
                       double tol = 1e-6, int max_iter = 300);

// Orthogonal greedy: v rounds of selecting argmax_j |<residual, phi_j>|
// (ties resolve to the smallest index) followed by full re-projection onto
// the selected span. Inner product is L2(mu) or L2(mu_xi); the latter needs
// xi. Requires ||phi_j|| <= 1 in the chosen inner product, which is what the
// v^{-1/2} decay guarantee for absolutely convergent expansions rests on.
SparseApproximant oga_approximate(const Dictionary& dict, const Quadrature& q,
                                  const FunctionData& f, int v, NormSpec norm,
                                  const PointSet* xi = nullptr);

// Truncate-plus-greedy: keep coefficients 0..v-1 of the expansion, then run v
// greedy steps in L2(mu_xi) on the tail. At most 2v active terms; for
// sequences with sum_j |c_j| (j+1)^r <= 1 the mixture-norm error is
// <= v^{-r-1/2}. The budget is validated up front.
SparseApproximant bp1_approximant(const Dictionary& dict, const Quadrature& q,
                                  const Eigen::VectorXcd& coeffs, double r, int v,
                                  const PointSet& xi);

struct BlockSchedule {
  enum class Kind { wab, gegenbauer };
  Kind kind = Kind::wab;
  double kappa = 2.0 / 3.0;  // wab: per-level budget decay past the keep-all prefix
  // gegenbauer schedule parameters
  int m_level = 0;
  double r = 1.0;
  double theta = 1.0;
  double alpha = 0.0;
};

// smallest integer >= (r + 1/theta - 1/2)/(r - alpha - 1/2) + 1
int gegenbauer_kappa0(double r, double theta, double alpha);

// (level k, budget n_k) pairs, n_k = floor((k-m+2)^{-2} 2^{m-2}) for
// m-1 <= k <= kappa0*m; the budgets sum to at most 2^{m-1}
std::vector<std::pair<int, std::int64_t>> gegenbauer_block_schedule(int m_level, double r,
                                                                    double theta, double alpha);

// Keeps, per dyadic block of the dictionary, the n_k largest-magnitude
// coefficients under the schedule's budgets; coefficients are carried over
// unchanged (no refit). Total kept terms <= v is asserted.
SparseApproximant block_budget_approximate(const Dictionary& dict, const Eigen::VectorXcd& coeffs,
                                           int v, const BlockSchedule& schedule);

struct KashinResult {
  double value = 0.0;
  std::vector<int> signs;   // +-1 per psi element, the worst-case vertex
  std::vector<int> subset;  // best n-subset of dict for that vertex
  std::uint64_t combinations = 0;  // vertex count x subset count
};

struct KashinOptions {
  std::uint64_t cap = 50'000'000;
  double tie_tol = 1e-12;
  Exec exec = Exec::parallel;
};

// Exact sup over the sign-vertex class {sum_i eps_i psi_i : eps_i = +-1} of
// the best n-term L2(mu) approximation error from dict. psi lists indices
// into dict and must be orthonormal; the sup is attained at a vertex because
// the distance to a union of subspaces is convex in the coefficients.
KashinResult kashin_oracle_sigma(const Dictionary& dict, const Quadrature& q,
                                 const std::vector<int>& psi, int n,
                                 const KashinOptions& opts = {});

}  // namespace srlab
