#pragma once

#include <optional>

#include "srlab/dictionary.hpp"
#include "srlab/parallel.hpp"

namespace srlab {

enum class Side { one_sided, two_sided };

struct VerifyOptions {
  std::uint64_t subset_cap = 1'000'000;
  // fallback when C(N, v) exceeds the cap: seeded random subsets, result
  // flagged non-certified
  std::uint64_t audit_count = 4096;
  std::uint64_t audit_seed = 1;
  Exec exec = Exec::parallel;
};

struct DiscretizationReport {
  int v = 0;
  std::uint64_t m = 0;
  int N = 0;
  // C1 = min over scanned v-subsets of the smallest generalized eigenvalue of
  // (sampled Gram, exact Gram); C2 = max of the largest (two-sided runs)
  double C1 = 0.0;
  std::optional<double> C2;
  std::vector<int> worst_subset_low;
  std::vector<int> worst_subset_high;
  bool certified = false;
  std::string mode;  // "exhaustive" | "random-audit"
  std::uint64_t subsets_checked = 0;
  std::uint64_t subset_total = 0;  // saturates at cap + 1 when the count overflows it
  std::uint64_t seed = 0;
};

// One- or two-sided universal discretization constants of the point set for
// the collection of v-term subspaces of the dictionary. The exact Gram
// defaults to exact_gram(dict, default_quadrature_for(dict)).
DiscretizationReport verify_universal_discretization(
    const Dictionary& dict, const PointSet& xi, int v, Side side,
    const std::optional<Eigen::MatrixXcd>& gram = {}, const VerifyOptions& opts = {});

// Per-point weight that makes the sampled Gram of the orthonormal system
// under mu_alpha concentrate around the identity for Chebyshev-drawn points:
// w_alpha(x) = pi c_alpha (1-x^2)^{alpha+1/2}.
double gegenbauer_sampling_weight(double alpha, double x);

// Same verification with weights w_alpha(xi_j)/m on the plain orthonormal
// system; xi carries the points, its stored weights are replaced.
DiscretizationReport verify_weighted_gegenbauer_discretization(
    const GegenbauerParams& params, const PointSet& xi, int v, Side side,
    const VerifyOptions& opts = {});

struct FindOptions {
  int max_attempts = 64;
  // try the canonical deterministic candidate (equispaced / Gauss nodes)
  // before random draws
  bool structured_first = true;
  VerifyOptions verify;
};

struct FindResult {
  std::optional<PointSet> points;
  DiscretizationReport report;  // for the returned set, or the last attempt
  int attempts = 0;
};

FindResult find_universal_points(const Dictionary& dict, int v, double target_C1,
                                 std::uint64_t m, Rng& rng, const FindOptions& opts = {});

// Chebyshev draws + w_alpha weights against the orthonormal system.
FindResult find_weighted_gegenbauer_points(const GegenbauerParams& params, int v,
                                           double target_C1, std::uint64_t m, Rng& rng,
                                           const FindOptions& opts = {});

struct MEstimate {
  std::uint64_t m = 0;
  bool capped = false;  // search hit m_cap; m is the sentinel (cap value)
};

// Smallest m at which a majority of `trials` fresh draws certify C1 >=
// target_C1, located by doubling then bisection. Randomized, so this is an
// empirical estimate, not a certified threshold.
MEstimate estimate_m_required(const Dictionary& dict, int v, double target_C1, Rng& rng,
                              int trials = 5, std::uint64_t m_cap = 1 << 14,
                              const VerifyOptions& opts = {});

}  // namespace srlab
