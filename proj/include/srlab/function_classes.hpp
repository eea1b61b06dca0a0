#pragma once

#include "srlab/dictionary.hpp"

namespace srlab {

// Coefficient-class descriptions over a fixed dictionary. Budgets are on the
// coefficient sequence, indices 0-based:
//   a1r        sum_j |c_j| (j+1)^r <= 1
//   wab        per dyadic frequency level j, block l1 mass <= 2^{-a j} jbar^{(d-1) b}
//   geg_wiener sum_j (|c_j| (1+j)^r)^theta <= 1
struct ClassSpec {
  enum class Kind { a1r, wab, geg_wiener };
  Kind kind = Kind::a1r;
  double r = 0.0;  // a1r, geg_wiener
  double a = 1.0;  // wab level decay
  double b = 0.0;  // wab logarithmic factor exponent, paired with d
  int d = 1;
  double alpha = 0.0;  // geg_wiener: Gegenbauer parameter of the target system
  double theta = 1.0;  // geg_wiener: quasi-norm exponent, (0, 1]
  int support = 8;     // a1r, geg_wiener samplers: nonzero count
};

// throws param_error: r >= 0, a > 0, theta in (0,1], support >= 1,
// geg_wiener additionally needs r > alpha + 1/2
void validate_spec(const ClassSpec& spec);

// Random member with the budget saturated exactly (scaled so the measured
// budget is 1 up to roundoff). a1r / geg_wiener draw `support` indices without
// replacement with random phases; wab fills every frequency level the
// dictionary carries, each level normalized to its own cap.
Eigen::VectorXcd sample_class(const ClassSpec& spec, const Dictionary& dict, Rng& rng);

struct MembershipResult {
  bool member = false;
  double budget = 0.0;  // measured budget; wab reports max_j block_mass / cap_j
};

// member iff budget <= 1 + 1e-12
MembershipResult class_membership_check(const Eigen::VectorXcd& coeffs, const ClassSpec& spec,
                                        const Dictionary& dict);

struct WitnessBox {
  std::vector<Eigen::VectorXcd> members;
  bool complete = false;  // every sign vertex enumerated
  int m1 = 0;
  double scale = 0.0;
  int block_lo = 0;  // member support is [block_lo, block_lo + block_size)
  int block_size = 0;
};

// Sign vertices of the scaled coefficient box
//   { scale * sum_{2^{m1} <= j < 2^{m1+1}} eps_j e_j : eps_j = +-1 },
// scale = 2^{-(m1+1)(r + 1/theta)}, m1 = m_level + m0. Every vertex lies in
// the geg_wiener class with budget <= 1/2. All 2^{2^{m1}} vertices when that
// count fits under vertex_cap (mask order, bit i set -> eps_i = -1);
// otherwise the all-ones vertex plus seeded random vertices, complete=false.
// Throws size_error unless dict covers degree 2^{m1+1} - 1.
WitnessBox thm83_witness_class(double alpha, double r, double theta, int m_level,
                               const Dictionary& dict, Rng& rng, int m0 = 3,
                               std::uint64_t vertex_cap = 4096);

// Dense geg_wiener member with |c_j| proportional to (1+j)^{-r-1/theta-delta}
// times a uniform(1/2,1) jitter, random phases, budget saturated exactly.
// delta > 0 keeps the sequence strictly inside the class scale.
Eigen::VectorXcd sample_decay_profile(const ClassSpec& spec, double delta, const Dictionary& dict,
                                      Rng& rng);

}  // namespace srlab
