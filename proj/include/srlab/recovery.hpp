#pragma once

#include <optional>
#include <string>

#include "srlab/function_data.hpp"
#include "srlab/measure.hpp"
#include "srlab/parallel.hpp"

namespace srlab {

struct LsFit {
  Eigen::VectorXcd coeffs;
  int rank = 0;
  bool degenerate = false;  // rank-deficient design; coeffs is the min-norm solution
};

// argmin_c sum_nu w_nu |samples_nu - (design c)_nu|^2 via orthogonal
// factorization of the sqrt(w)-scaled design.
LsFit weighted_least_squares_fit(const Eigen::MatrixXcd& design, const Eigen::VectorXcd& samples,
                                 const Eigen::VectorXd& w);

struct IrlsResult {
  Eigen::VectorXcd coeffs;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;  // sum w |r|^p at the returned coefficients
};

// argmin_c sum_nu w_nu |samples_nu - (design c)_nu|^p for p in [1, inf) by
// iteratively reweighted least squares; non-converged runs return the best
// iterate, flagged.
IrlsResult least_p_fit(const Eigen::MatrixXcd& design, const Eigen::VectorXcd& samples,
                       const Eigen::VectorXd& w, double p, double tol = 1e-8, int max_iter = 200);

struct SparseApproximant {
  std::vector<int> selection;  // sorted ascending
  Eigen::VectorXcd coeffs;     // aligned with selection
  std::string algorithm;
  bool degenerate = false;
  std::optional<double> residual_l2_mu;
  std::optional<double> residual_l2_mu_xi;
  std::optional<double> residual_uniform_grid;
  std::vector<double> step_residuals;  // greedy trajectories
};

enum class RecoverMode { exhaustive, greedy, automatic };

struct RecoverOptions {
  std::uint64_t subset_cap = 1'000'000;
  double tie_tol = 1e-12;  // residual ties resolve to the lexicographically smallest subset
  Exec exec = Exec::parallel;
  // when set (together with FunctionData::on_grid) the uniform-grid residual
  // is recorded on the approximant
  const EvalGrid* grid = nullptr;
};

// Best v-term L2(mu) projection: exhaustive subset scan of Gram-restricted
// projections. Falls back to the orthogonal greedy path above the cap.
SparseApproximant ideal_projection_recover(const Dictionary& dict, const Quadrature& q,
                                           const FunctionData& f, int v,
                                           const RecoverOptions& opts = {});

// Nonlinear v-sparse sampling recovery: per-subset weighted least squares on
// the samples, subset chosen to minimize the L2(mu) error of the fit.
SparseApproximant sparse_ls_recover(const Dictionary& dict, const Quadrature& q,
                                    const FunctionData& f, const PointSet& xi, int v,
                                    RecoverMode mode = RecoverMode::automatic,
                                    const RecoverOptions& opts = {});

struct RhoLsEstimate {
  double value = 0.0;            // min over candidates of max over members
  std::size_t best_candidate = 0;
  std::size_t worst_member = 0;  // member attaining the max at the best candidate
  std::string label = "empirical(finite-sample)";
};

// Finite-sample stand-in for the optimal-recovery functional: class members
// are span elements given by coefficients.
RhoLsEstimate estimate_rho_ls(const Dictionary& dict, const Quadrature& q, int v,
                              const std::vector<PointSet>& candidates,
                              const std::vector<Eigen::VectorXcd>& member_coeffs,
                              RecoverMode mode = RecoverMode::automatic,
                              const RecoverOptions& opts = {});

}  // namespace srlab
