#include "srlab/discretization.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "srlab/subset.hpp"

namespace srlab {

namespace {

// eigenvalue range of the pencil (H restricted to J, G restricted to J);
// m is the number of sample points behind H
std::pair<double, double> subset_eigen_range(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& G,
                                             const std::vector<int>& J, std::uint64_t m) {
  const int v = static_cast<int>(J.size());
  Eigen::MatrixXcd h(v, v), g(v, v);
  for (int a = 0; a < v; ++a)
    for (int b = 0; b < v; ++b) {
      h(a, b) = H(J[a], J[b]);
      g(a, b) = G(J[a], J[b]);
    }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, g,
                                                                Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (m < static_cast<std::uint64_t>(v)) {
    // the sampled restriction has rank <= m < v: the smallest eigenvalue is
    // zero by rank, report it exactly instead of solver roundoff
    lo = 0.0;
  } else if (lo < 0.0 && lo > -1e-10) {
    // sampled Grams are PSD; a tiny negative eigenvalue is roundoff
    lo = 0.0;
  }
  return {lo, hi};
}

std::vector<int> random_subset(int N, int v, Rng& rng) {
  std::vector<int> pool(N);
  for (int i = 0; i < N; ++i) pool[i] = i;
  for (int i = 0; i < v; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(N - i)));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> out(pool.begin(), pool.begin() + v);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

DiscretizationReport verify_universal_discretization(const Dictionary& dict, const PointSet& xi,
                                                     int v, Side side,
                                                     const std::optional<Eigen::MatrixXcd>& gram,
                                                     const VerifyOptions& opts) {
  const int N = dict.size;
  if (v < 1 || v > N) throw param_error("verify_universal_discretization: need 1 <= v <= N");
  if (xi.size() == 0) throw param_error("verify_universal_discretization: empty point set");
  if (xi.weights.size() != static_cast<Eigen::Index>(xi.size()))
    throw param_error("verify_universal_discretization: weight count mismatch");
  if (xi.weights.minCoeff() <= 0.0)
    throw param_error("verify_universal_discretization: weights must be positive");

  const Eigen::MatrixXcd phi = design_matrix(dict, xi.points);
  const Eigen::MatrixXcd H = phi.adjoint() * xi.weights.asDiagonal() * phi;
  const Eigen::MatrixXcd G = gram ? *gram : exact_gram(dict, default_quadrature_for(dict));

  DiscretizationReport rep;
  rep.v = v;
  rep.m = xi.size();
  rep.N = N;
  rep.subset_total = binomial_capped(N, v, opts.subset_cap);

  std::vector<std::vector<int>> audit_subsets;
  std::uint64_t count;
  const bool exhaustive = rep.subset_total <= opts.subset_cap;
  if (exhaustive) {
    count = rep.subset_total;
    rep.mode = "exhaustive";
    rep.certified = true;
  } else {
    count = opts.audit_count;
    rep.mode = "random-audit";
    rep.certified = false;
    rep.seed = opts.audit_seed;
    Rng rng(opts.audit_seed);
    audit_subsets.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) audit_subsets.push_back(random_subset(N, v, rng));
  }
  rep.subsets_checked = count;

  std::vector<double> lows(count), highs(count);
  parallel_for(opts.exec, static_cast<std::int64_t>(count), [&](std::int64_t r) {
    std::vector<int> J;
    if (exhaustive)
      unrank_combination(static_cast<std::uint64_t>(r), N, v, J);
    else
      J = audit_subsets[static_cast<std::size_t>(r)];
    const auto [lo, hi] = subset_eigen_range(H, G, J, xi.size());
    lows[static_cast<std::size_t>(r)] = lo;
    highs[static_cast<std::size_t>(r)] = hi;
  });

  // smallest rank among exact minimizers = lexicographically smallest subset
  const std::int64_t imin = argmin_with_ties(lows, 0.0);
  rep.C1 = lows[static_cast<std::size_t>(imin)];
  if (exhaustive)
    unrank_combination(static_cast<std::uint64_t>(imin), N, v, rep.worst_subset_low);
  else
    rep.worst_subset_low = audit_subsets[static_cast<std::size_t>(imin)];

  if (side == Side::two_sided) {
    const std::int64_t imax = argmax_with_ties(highs, 0.0);
    rep.C2 = highs[static_cast<std::size_t>(imax)];
    if (exhaustive)
      unrank_combination(static_cast<std::uint64_t>(imax), N, v, rep.worst_subset_high);
    else
      rep.worst_subset_high = audit_subsets[static_cast<std::size_t>(imax)];
  }
  return rep;
}

double gegenbauer_sampling_weight(double alpha, double x) {
  return pi * gegenbauer_normalizer(alpha) * std::pow(std::max(1.0 - x * x, 0.0), alpha + 0.5);
}

DiscretizationReport verify_weighted_gegenbauer_discretization(const GegenbauerParams& params,
                                                               const PointSet& xi, int v, Side side,
                                                               const VerifyOptions& opts) {
  const Dictionary dict = gegenbauer_dictionary(params);
  PointSet weighted = xi;
  const auto m = static_cast<Eigen::Index>(xi.size());
  weighted.weights.resize(m);
  for (Eigen::Index j = 0; j < m; ++j)
    weighted.weights(j) = gegenbauer_sampling_weight(params.alpha, xi.points[j][0]) / static_cast<double>(m);
  if (weighted.weights.minCoeff() <= 0.0)
    throw param_error("verify_weighted_gegenbauer_discretization: a point sits on the boundary");
  return verify_universal_discretization(dict, weighted, v, side, {}, opts);
}

namespace {

FindResult find_points_impl(const Dictionary& dict, int v, double target_C1, std::uint64_t m,
                            Rng& rng, const FindOptions& opts, bool chebyshev_weighted,
                            double alpha) {
  FindResult out;
  auto attempt = [&](PointSet candidate) -> bool {
    DiscretizationReport rep;
    if (chebyshev_weighted)
      rep = verify_weighted_gegenbauer_discretization({alpha, dict.max_degree}, candidate, v,
                                                      Side::one_sided, opts.verify);
    else
      rep = verify_universal_discretization(dict, candidate, v, Side::one_sided, {}, opts.verify);
    ++out.attempts;
    if (rep.certified && rep.C1 >= target_C1) {
      out.points = std::move(candidate);
      out.report = rep;
      return true;
    }
    out.report = rep;
    return false;
  };

  if (opts.structured_first) {
    std::optional<PointSet> structured;
    if (dict.measure.domain == Domain::torus && dict.measure.dim == 1)
      structured = equispaced_torus(static_cast<int>(m), 1);
    else if (dict.measure.domain == Domain::interval) {
      // Gauss nodes of the tied measure as the deterministic first guess
      const Quadrature q = build_quadrature(chebyshev_weighted ? MeasureSpec::chebyshev() : dict.measure,
                                            static_cast<int>(m));
      structured = make_point_set(q.nodes, "gauss-nodes");
    }
    if (structured && attempt(std::move(*structured))) return out;
  }
  const MeasureSpec draw_measure =
      chebyshev_weighted ? MeasureSpec::chebyshev() : dict.measure;
  for (int a = 0; a < opts.max_attempts; ++a) {
    Rng fork = rng.fork(static_cast<std::uint64_t>(a) + 0x9d5f);
    PointSet candidate = draw_points(draw_measure, static_cast<int>(m), fork);
    if (attempt(std::move(candidate))) return out;
  }
  return out;
}

}  // namespace

FindResult find_universal_points(const Dictionary& dict, int v, double target_C1, std::uint64_t m,
                                 Rng& rng, const FindOptions& opts) {
  return find_points_impl(dict, v, target_C1, m, rng, opts, false, 0.0);
}

FindResult find_weighted_gegenbauer_points(const GegenbauerParams& params, int v, double target_C1,
                                           std::uint64_t m, Rng& rng, const FindOptions& opts) {
  const Dictionary dict = gegenbauer_dictionary(params);
  return find_points_impl(dict, v, target_C1, m, rng, opts, true, params.alpha);
}

MEstimate estimate_m_required(const Dictionary& dict, int v, double target_C1, Rng& rng, int trials,
                              std::uint64_t m_cap, const VerifyOptions& opts) {
  if (trials < 1) throw param_error("estimate_m_required: trials must be >= 1");
  auto majority_success = [&](std::uint64_t m) {
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
      Rng fork = rng.fork(m * 0x1000 + static_cast<std::uint64_t>(t));
      FindOptions fo;
      fo.max_attempts = 1;
      fo.structured_first = false;
      fo.verify = opts;
      const FindResult r = find_universal_points(dict, v, target_C1, m, fork, fo);
      if (r.points) ++ok;
    }
    return 2 * ok > trials;
  };

  std::uint64_t m = std::max<std::uint64_t>(static_cast<std::uint64_t>(v), 1);
  while (!majority_success(m)) {
    if (m >= m_cap) return {m_cap, true};
    m = std::min(m * 2, m_cap);
  }
  // bisect (lo fails or is below the start, hi succeeds)
  std::uint64_t lo = m / 2, hi = m;
  if (m == static_cast<std::uint64_t>(std::max(v, 1))) return {m, false};
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (majority_success(mid))
      hi = mid;
    else
      lo = mid;
  }
  return {hi, false};
}

}  // namespace srlab
