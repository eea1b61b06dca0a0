#pragma once

#include <optional>
#include <string>

#include "srlab/dictionary.hpp"
#include "srlab/function_data.hpp"
#include "srlab/parallel.hpp"

namespace srlab {

// Basis of the subspace of span(dict) vanishing at every sample point,
// orthonormalized in L2(mu). Columns of `coeffs` are dictionary coefficient
// vectors.
struct NullspaceBasis {
  Eigen::MatrixXcd coeffs;  // dict.size x dim
  int dim = 0;
  double max_point_value = 0.0;  // validator: max |f_b(xi_nu)| over the basis
  double gram_defect = 0.0;      // validator: max |<f_a, f_b> - delta_ab|
};

NullspaceBasis nullspace_basis(const Dictionary& dict, const PointSet& xi, const Quadrature& q,
                               double rank_tol = 1e-10);

struct VertexSearchResult {
  bool found = false;
  Eigen::VectorXcd z;     // max modulus exactly 1 when found
  int strong_count = 0;   // coordinates with |z_i| >= 1/sqrt(2) - tol
};

// Searches the column span of `basis` for z with max_i |z_i| = 1 and at
// least n coordinates of modulus >= 1/sqrt(2). Greedy coordinate pinning
// with min-norm feasibility re-solves; the result is validated against the
// postcondition before it is returned, so a `found` result is always sound
// even though the search itself is heuristic.
VertexSearchResult lorentz_vertex_search(const Eigen::MatrixXcd& basis, int n, double tol = 1e-9);

struct D1Options {
  int restarts = 200;
  int max_iter = 100;
  std::uint64_t seed = 7;
  Exec exec = Exec::parallel;
  double tol = 1e-9;
};

// two-sided 1/2 .. 3/2 sandwich of mean point mass vs the L2 and Lp norms
struct D1Certificate {
  PointSet points;
  double p = 2.0;
  double vt5_low = 0.0;   // exact generalized-eigenvalue range, L2 form
  double vt5_high = 0.0;
  double vt4_low = 0.0;   // Lp form; equals vt5 at p = 2
  double vt4_high = 0.0;
  bool passed = false;
  bool certified = false;  // only the p = 2 case is certified exactly
  std::uint64_t seed = 0;
  int restarts = 0;
};

D1Certificate check_condition_D1(const Dictionary& dict, const PointSet& X, double p,
                                 const Quadrature& q, const D1Options& opts = {});

// Witness for the hidden-mass lower bound: g in span(dict), g = 0 on xi,
// ||g||_p <= 1, so tau >= ||g||_2. All three properties are re-verified on
// the returned object; `bound` is the proof-guaranteed floor
// 2^{-2/p} (2/3) (D-m)/(3M) for ||g||_2^2.
struct TauWitness {
  bool found = false;
  std::string failure;           // empty when found
  Eigen::VectorXcd coeffs;       // dictionary coefficients of g
  double l2_value = 0.0;         // ||g||_2, the certified lower bound
  double p_norm = 0.0;           // ||g||_p, must be <= 1 + 1e-10
  double max_at_xi = 0.0;        // max |g(xi_nu)|, must be <= 1e-10
  double bound = 0.0;            // proof floor for ||g||_2^2, sqrt applied
  bool bound_satisfied = false;
  int nullspace_dim = 0;
  int strong_coords = 0;
};

TauWitness tau_m_witness(const Dictionary& dict, const PointSet& xi, double p, const Quadrature& q,
                         const D1Certificate& cert);

}  // namespace srlab
