#include "srlab/sparse_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "srlab/subset.hpp"

namespace srlab {

namespace {

// inner-product data for projections: G(j,k) = <phi_k, phi_j>, b_j = <f, phi_j>
struct IpContext {
  Eigen::MatrixXcd G;
  Eigen::VectorXcd b;
  double fsq = 0.0;
};

IpContext context_mu(const Eigen::MatrixXcd& psi_q, const Quadrature& q,
                     const Eigen::VectorXcd& f_q) {
  IpContext ctx;
  ctx.G = psi_q.adjoint() * q.weights.asDiagonal() * psi_q;
  ctx.b = psi_q.adjoint() * (q.weights.asDiagonal() * f_q);
  ctx.fsq = (f_q.adjoint() * (q.weights.asDiagonal() * f_q))(0).real();
  return ctx;
}

// mu_xi = mu/2 + (1/2m) sum_j delta_{xi_j}
IpContext context_mu_xi(const Eigen::MatrixXcd& psi_q, const Quadrature& q,
                        const Eigen::VectorXcd& f_q, const Eigen::MatrixXcd& phi_xi,
                        const Eigen::VectorXcd& f_xi) {
  const double m = static_cast<double>(phi_xi.rows());
  IpContext ctx = context_mu(psi_q, q, f_q);
  ctx.G = 0.5 * ctx.G + (0.5 / m) * (phi_xi.adjoint() * phi_xi);
  ctx.b = 0.5 * ctx.b + (0.5 / m) * (phi_xi.adjoint() * f_xi);
  ctx.fsq = 0.5 * ctx.fsq + (0.5 / m) * f_xi.squaredNorm();
  return ctx;
}

Eigen::MatrixXcd gather_block(const Eigen::MatrixXcd& g, const std::vector<int>& J) {
  const auto v = static_cast<Eigen::Index>(J.size());
  Eigen::MatrixXcd out(v, v);
  for (Eigen::Index a = 0; a < v; ++a)
    for (Eigen::Index b = 0; b < v; ++b) out(a, b) = g(J[a], J[b]);
  return out;
}

Eigen::VectorXcd gather(const Eigen::VectorXcd& x, const std::vector<int>& J) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(J.size()));
  for (std::size_t a = 0; a < J.size(); ++a) out(static_cast<Eigen::Index>(a)) = x(J[a]);
  return out;
}

Eigen::MatrixXcd gather_cols(const Eigen::MatrixXcd& m, const std::vector<int>& J) {
  Eigen::MatrixXcd out(m.rows(), static_cast<Eigen::Index>(J.size()));
  for (std::size_t a = 0; a < J.size(); ++a) out.col(static_cast<Eigen::Index>(a)) = m.col(J[a]);
  return out;
}

Eigen::VectorXcd project_onto(const IpContext& ctx, const std::vector<int>& J) {
  const Eigen::MatrixXcd gj = gather_block(ctx.G, J);
  const Eigen::VectorXcd bj = gather(ctx.b, J);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(gj);
  if (ldlt.info() == Eigen::Success) {
    const Eigen::VectorXcd c = ldlt.solve(bj);
    if (c.allFinite()) return c;
  }
  return Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd>(gj).solve(bj);
}

// ||f - P_J f||^2 for the orthogonal projection coefficients c
double projection_residual_sq(const IpContext& ctx, const std::vector<int>& J,
                              const Eigen::VectorXcd& c) {
  const double val = ctx.fsq - (gather(ctx.b, J).adjoint() * c)(0).real();
  return std::max(val, 0.0);
}

struct GreedyRun {
  std::vector<int> selection;  // sorted
  Eigen::VectorXcd coeffs;
  std::vector<double> step_residuals;
};

// unnormalized selection: argmax_j |<r, phi_j>|, ties to the smallest index
GreedyRun greedy_project(const IpContext& ctx, int v) {
  const int N = static_cast<int>(ctx.b.size());
  GreedyRun run;
  std::vector<char> used(static_cast<std::size_t>(N), 0);
  Eigen::VectorXcd c;
  for (int step = 0; step < std::min(v, N); ++step) {
    const Eigen::VectorXcd corr =
        run.selection.empty()
            ? ctx.b
            : Eigen::VectorXcd(ctx.b - gather_cols(ctx.G, run.selection) * c);
    std::vector<double> scores(static_cast<std::size_t>(N), -1.0);
    for (int j = 0; j < N; ++j)
      if (!used[static_cast<std::size_t>(j)]) scores[static_cast<std::size_t>(j)] = std::abs(corr(j));
    const int pick = static_cast<int>(argmax_with_ties(scores, 1e-15));
    used[static_cast<std::size_t>(pick)] = 1;
    run.selection.push_back(pick);
    std::sort(run.selection.begin(), run.selection.end());
    c = project_onto(ctx, run.selection);
    run.step_residuals.push_back(std::sqrt(projection_residual_sq(ctx, run.selection, c)));
  }
  run.coeffs = c;
  return run;
}

struct ScanResult {
  std::vector<int> subset;
  Eigen::VectorXcd coeffs;
  double value = 0.0;
  bool exhaustive = false;
};

// exhaustive projection scan within the cap, greedy upper bound above it
ScanResult hilbert_sigma_scan(const IpContext& ctx, int v, const SigmaOptions& opts) {
  const int N = static_cast<int>(ctx.b.size());
  ScanResult res;
  const std::uint64_t total = binomial_capped(N, v, opts.subset_cap);
  if (total <= opts.subset_cap) {
    std::vector<double> vals(total);
    parallel_for(opts.exec, static_cast<std::int64_t>(total), [&](std::int64_t r) {
      std::vector<int> J;
      unrank_combination(static_cast<std::uint64_t>(r), N, v, J);
      vals[static_cast<std::size_t>(r)] = projection_residual_sq(ctx, J, project_onto(ctx, J));
    });
    const std::int64_t best = argmin_with_ties(vals, opts.tie_tol);
    unrank_combination(static_cast<std::uint64_t>(best), N, v, res.subset);
    res.coeffs = project_onto(ctx, res.subset);
    res.value = std::sqrt(projection_residual_sq(ctx, res.subset, res.coeffs));
    res.exhaustive = true;
  } else {
    const GreedyRun run = greedy_project(ctx, v);
    res.subset = run.selection;
    res.coeffs = run.coeffs;
    res.value = run.step_residuals.empty() ? std::sqrt(ctx.fsq) : run.step_residuals.back();
    res.exhaustive = false;
  }
  return res;
}

}  // namespace

MinimaxFit minimax_fit(const Eigen::MatrixXcd& design, const Eigen::VectorXcd& values, double tol,
                       int max_iter) {
  if (design.rows() != values.size()) throw param_error("minimax_fit: row count mismatch");
  const Eigen::Index m = design.rows();
  const Eigen::Index v = design.cols();
  Eigen::VectorXd lam = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));

  // per-iteration solve via the v x v normal equations; the orthogonal
  // factorization is the fallback when the weighted Gram degenerates
  Eigen::MatrixXcd gram(v, v);
  Eigen::VectorXcd rhs(v), c(v), r(m);
  auto solve_weighted = [&]() {
    gram.noalias() = design.adjoint() * lam.asDiagonal() * design;
    rhs.noalias() = design.adjoint() * (lam.asDiagonal() * values);
    const Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
    if (ldlt.info() == Eigen::Success) {
      c = ldlt.solve(rhs);
      if (c.allFinite()) return;
    }
    c = weighted_least_squares_fit(design, values, lam).coeffs;
  };

  MinimaxFit fit;
  fit.value = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    solve_weighted();
    r.noalias() = values - design * c;
    const double vmax = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    // sqrt(sum lam |r|^2) never exceeds the minimax value, which never
    // exceeds vmax; the gap encloses the distance to optimal
    double werr = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) werr += lam(i) * std::norm(r(i));
    werr = std::sqrt(werr);
    fit.iterations = it;
    fit.lower_bound = std::max(fit.lower_bound, werr);
    if (vmax < fit.value) {
      fit.value = vmax;
      fit.coeffs = c;
    }
    if (fit.value - werr <= tol * std::max(1.0, fit.value)) {
      fit.converged = true;
      break;
    }
    // Lawson update: lambda <- lambda * |r|, renormalized; dead weights stay dead
    double mass = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      lam(i) *= std::abs(r(i));
      mass += lam(i);
    }
    if (mass <= 0.0) {  // interpolation achieved
      fit.converged = true;
      break;
    }
    lam /= mass;
  }
  if (fit.coeffs.size() == 0) fit.coeffs = Eigen::VectorXcd::Zero(design.cols());
  return fit;
}

SigmaResult sigma_v(const Dictionary& dict, const Quadrature& q, const FunctionData& f, int v,
                    NormSpec norm, const PointSet* xi, const EvalGrid* grid,
                    const SigmaOptions& opts) {
  const int N = dict.size;
  if (v < 0 || v > N) throw param_error("sigma_v: need 0 <= v <= N");
  if (f.on_quadrature.size() != static_cast<Eigen::Index>(q.size()))
    throw param_error("sigma_v: function table does not match quadrature");

  const Eigen::MatrixXcd psi_q = design_matrix(dict, q.nodes);
  SigmaResult out;

  if (norm == NormSpec::uniform_grid) {
    if (!grid || !f.on_grid) throw param_error("sigma_v: uniform norm needs a grid and grid values");
    if (f.on_grid->size() != static_cast<Eigen::Index>(grid->size()))
      throw param_error("sigma_v: grid values do not match the grid");
    out.grid_size = grid->size();
    const Eigen::MatrixXcd psi_g = design_matrix(dict, grid->points);
    if (v == 0) {
      out.value = f.on_grid->cwiseAbs().maxCoeff();
      out.certification = "grid-estimate";
      return out;
    }
    const std::uint64_t total = binomial_capped(N, v, opts.subset_cap);
    if (total <= opts.subset_cap) {
      // two-phase scan. The first Lawson iteration already brackets each
      // subset's minimax value between its weighted L2 error and its max
      // residual. Only subsets whose lower bracket reaches the best upper
      // bracket can win; the winner's full run starts with the same first
      // iterate, so its value never exceeds that bracket and the pruning is
      // exact, order-independent, and execution-policy independent.
      std::vector<double> lo_bound(total), hi_bound(total);
      parallel_for(opts.exec, static_cast<std::int64_t>(total), [&](std::int64_t r) {
        std::vector<int> J;
        unrank_combination(static_cast<std::uint64_t>(r), N, v, J);
        const MinimaxFit first =
            minimax_fit(gather_cols(psi_g, J), *f.on_grid, opts.minimax_tol, 1);
        lo_bound[static_cast<std::size_t>(r)] = first.lower_bound;
        hi_bound[static_cast<std::size_t>(r)] = first.value;
      });
      const double cutoff =
          *std::min_element(hi_bound.begin(), hi_bound.end()) + opts.tie_tol;
      std::vector<double> vals = lo_bound;
      parallel_for(opts.exec, static_cast<std::int64_t>(total), [&](std::int64_t r) {
        if (lo_bound[static_cast<std::size_t>(r)] > cutoff) return;
        std::vector<int> J;
        unrank_combination(static_cast<std::uint64_t>(r), N, v, J);
        vals[static_cast<std::size_t>(r)] =
            minimax_fit(gather_cols(psi_g, J), *f.on_grid, opts.minimax_tol, opts.minimax_max_iter)
                .value;
      });
      const std::int64_t best = argmin_with_ties(vals, opts.tie_tol);
      unrank_combination(static_cast<std::uint64_t>(best), N, v, out.subset);
      out.value = vals[static_cast<std::size_t>(best)];
      out.certification = "grid-estimate";
    } else {
      // greedy subset in L2(mu), then one minimax on it
      const IpContext ctx = context_mu(psi_q, q, f.on_quadrature);
      const GreedyRun run = greedy_project(ctx, v);
      out.subset = run.selection;
      out.value = minimax_fit(gather_cols(psi_g, out.subset), *f.on_grid, opts.minimax_tol,
                              opts.minimax_max_iter)
                      .value;
      out.certification = "upper-bound-greedy";
    }
    return out;
  }

  IpContext ctx;
  Eigen::MatrixXcd phi_xi;
  if (norm == NormSpec::l2_mu) {
    ctx = context_mu(psi_q, q, f.on_quadrature);
  } else {
    if (!xi || !f.at_points) throw param_error("sigma_v: mixture norm needs points and sample values");
    if (f.at_points->size() != static_cast<Eigen::Index>(xi->size()))
      throw param_error("sigma_v: sample values do not match the point set");
    phi_xi = design_matrix(dict, xi->points);
    ctx = context_mu_xi(psi_q, q, f.on_quadrature, phi_xi, *f.at_points);
  }

  // values are recomputed from the residual table: the algebraic projection
  // formula loses digits once the residual is tiny
  auto direct_value = [&](const std::vector<int>& J, const Eigen::VectorXcd& c) {
    const Eigen::VectorXcd res_q = f.on_quadrature - gather_cols(psi_q, J) * c;
    if (norm == NormSpec::l2_mu) return norm_lp(res_q, q, 2.0);
    const Eigen::VectorXcd res_xi = *f.at_points - gather_cols(phi_xi, J) * c;
    return norm_l2_mu_xi(res_q, q, res_xi);
  };

  if (v == 0) {
    out.value = direct_value({}, Eigen::VectorXcd::Zero(0));
    out.certification = "exact-exhaustive";
    return out;
  }

  if (norm == NormSpec::l2_mu && dict.orthonormal) {
    // correlation thresholding: residual^2 = ||f||^2 - sum_{j in J} |b_j|^2,
    // minimized by the v largest |b_j|; ties keep the smallest indices
    std::vector<int> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      const double da = std::abs(ctx.b(a)), db = std::abs(ctx.b(b));
      if (da != db) return da > db;
      return a < b;
    });
    out.subset.assign(order.begin(), order.begin() + v);
    std::sort(out.subset.begin(), out.subset.end());
    out.value = direct_value(out.subset, gather(ctx.b, out.subset));
    out.certification = "exact-threshold";
    return out;
  }

  const ScanResult scan = hilbert_sigma_scan(ctx, v, opts);
  out.subset = scan.subset;
  out.value = direct_value(scan.subset, scan.coeffs);
  out.certification = scan.exhaustive ? "exact-exhaustive" : "upper-bound-greedy";
  return out;
}

SparseApproximant oga_approximate(const Dictionary& dict, const Quadrature& q,
                                  const FunctionData& f, int v, NormSpec norm,
                                  const PointSet* xi) {
  if (norm == NormSpec::uniform_grid)
    throw param_error("oga_approximate: inner product must be l2_mu or l2_mu_xi");
  if (v < 1 || v > dict.size) throw param_error("oga_approximate: need 1 <= v <= N");
  const Eigen::MatrixXcd psi_q = design_matrix(dict, q.nodes);

  IpContext ctx;
  Eigen::MatrixXcd phi_xi;
  if (norm == NormSpec::l2_mu) {
    ctx = context_mu(psi_q, q, f.on_quadrature);
  } else {
    if (!xi || !f.at_points)
      throw param_error("oga_approximate: mixture inner product needs points and sample values");
    phi_xi = design_matrix(dict, xi->points);
    ctx = context_mu_xi(psi_q, q, f.on_quadrature, phi_xi, *f.at_points);
  }
  for (int j = 0; j < dict.size; ++j)
    if (ctx.G(j, j).real() > 1.0 + 1e-9)
      throw param_error("oga_approximate: dictionary element norm exceeds 1 in this inner product");

  const GreedyRun run = greedy_project(ctx, v);
  SparseApproximant out;
  out.selection = run.selection;
  out.coeffs = run.coeffs;
  out.algorithm = norm == NormSpec::l2_mu ? "oga-mu" : "oga-mu-xi";
  out.step_residuals = run.step_residuals;

  const Eigen::VectorXcd res_q = f.on_quadrature - gather_cols(psi_q, out.selection) * out.coeffs;
  out.residual_l2_mu = norm_lp(res_q, q, 2.0);
  if (norm == NormSpec::l2_mu_xi) {
    const Eigen::VectorXcd res_xi = *f.at_points - gather_cols(phi_xi, out.selection) * out.coeffs;
    out.residual_l2_mu_xi = norm_l2_mu_xi(res_q, q, res_xi);
  }
  return out;
}

SparseApproximant bp1_approximant(const Dictionary& dict, const Quadrature& q,
                                  const Eigen::VectorXcd& coeffs, double r, int v,
                                  const PointSet& xi) {
  const int N = dict.size;
  if (coeffs.size() != N) throw param_error("bp1_approximant: coefficient count mismatch");
  if (v < 1) throw param_error("bp1_approximant: need v >= 1");
  if (r < 0.0) throw param_error("bp1_approximant: need r >= 0");
  double budget = 0.0;
  for (int j = 0; j < N; ++j)
    budget += std::abs(coeffs(j)) * std::pow(static_cast<double>(j + 1), r);
  if (budget > 1.0 + 1e-12) throw param_error("bp1_approximant: coefficient budget exceeds 1");

  const int head = std::min(v, N);
  Eigen::VectorXcd tail = coeffs;
  tail.head(head).setZero();

  const FunctionData f_full = tabulate_span(dict, coeffs, q, &xi);

  SparseApproximant out;
  out.algorithm = "bp1";
  Eigen::VectorXcd merged = Eigen::VectorXcd::Zero(N);
  merged.head(head) = coeffs.head(head);
  if (head < N && tail.cwiseAbs().maxCoeff() > 0.0) {
    const FunctionData f_tail = tabulate_span(dict, tail, q, &xi);
    const SparseApproximant greedy =
        oga_approximate(dict, q, f_tail, v, NormSpec::l2_mu_xi, &xi);
    for (std::size_t a = 0; a < greedy.selection.size(); ++a)
      merged(greedy.selection[a]) += greedy.coeffs(static_cast<Eigen::Index>(a));
    out.step_residuals = greedy.step_residuals;
  }
  for (int j = 0; j < N; ++j)
    if (merged(j) != cplx(0.0, 0.0)) out.selection.push_back(j);
  out.coeffs = gather(merged, out.selection);

  const Eigen::MatrixXcd psi_q = design_matrix(dict, q.nodes);
  const Eigen::MatrixXcd phi_xi = design_matrix(dict, xi.points);
  const Eigen::VectorXcd res_q = f_full.on_quadrature - gather_cols(psi_q, out.selection) * out.coeffs;
  const Eigen::VectorXcd res_xi = *f_full.at_points - gather_cols(phi_xi, out.selection) * out.coeffs;
  out.residual_l2_mu = norm_lp(res_q, q, 2.0);
  out.residual_l2_mu_xi = norm_l2_mu_xi(res_q, q, res_xi);
  return out;
}

int gegenbauer_kappa0(double r, double theta, double alpha) {
  if (theta <= 0.0 || theta > 1.0) throw param_error("gegenbauer_kappa0: need theta in (0,1]");
  if (r <= alpha + 0.5) throw param_error("gegenbauer_kappa0: need r > alpha + 1/2");
  const double ratio = (r + 1.0 / theta - 0.5) / (r - alpha - 0.5) + 1.0;
  return static_cast<int>(std::ceil(ratio - 1e-12));
}

std::vector<std::pair<int, std::int64_t>> gegenbauer_block_schedule(int m_level, double r,
                                                                    double theta, double alpha) {
  if (m_level < 1) throw param_error("gegenbauer_block_schedule: need m_level >= 1");
  const int kappa0 = gegenbauer_kappa0(r, theta, alpha);
  const double base = std::pow(2.0, static_cast<double>(m_level) - 2.0);
  std::vector<std::pair<int, std::int64_t>> out;
  std::int64_t total = 0;
  for (int k = m_level - 1; k <= kappa0 * m_level; ++k) {
    const double t = static_cast<double>(k - m_level + 2);
    const auto nk = static_cast<std::int64_t>(std::floor(base / (t * t)));
    out.emplace_back(k, nk);
    total += nk;
  }
  // sum n_k <= 2^{m-2} sum t^{-2} < 2^{m-1}
  if (total > (std::int64_t{1} << (m_level - 1)))
    throw std::logic_error("gegenbauer_block_schedule: budget invariant violated");
  return out;
}

SparseApproximant block_budget_approximate(const Dictionary& dict, const Eigen::VectorXcd& coeffs,
                                           int v, const BlockSchedule& schedule) {
  const int N = dict.size;
  if (coeffs.size() != N) throw param_error("block_budget_approximate: coefficient count mismatch");
  if (v < 1) throw param_error("block_budget_approximate: need v >= 1");

  // block id per element: |s|_1 dyadic level for trig, dyadic degree range
  // [2^{k-1}, 2^k) for polynomial systems
  std::vector<int> block(static_cast<std::size_t>(N));
  int max_block = 0;
  for (int j = 0; j < N; ++j) {
    int blk;
    if (dict.freq) {
      blk = dyadic_level(dict.freq->indices[static_cast<std::size_t>(j)]);
    } else {
      blk = j == 0 ? 0 : static_cast<int>(std::floor(std::log2(static_cast<double>(j)))) + 1;
    }
    block[static_cast<std::size_t>(j)] = blk;
    max_block = std::max(max_block, blk);
  }
  // only blocks that carry coefficient mass participate in the allocation
  std::vector<std::vector<int>> members(static_cast<std::size_t>(max_block) + 1);
  for (int j = 0; j < N; ++j)
    if (coeffs(j) != cplx(0.0, 0.0))
      members[static_cast<std::size_t>(block[static_cast<std::size_t>(j)])].push_back(j);

  std::vector<std::int64_t> budget(members.size(), 0);
  if (schedule.kind == BlockSchedule::Kind::gegenbauer) {
    // blocks below the scheduled range ride along whole; the construction
    // splits off the low-degree part exactly and budgets only the rest
    for (int k = 0; k < schedule.m_level - 1 && k < static_cast<int>(budget.size()); ++k)
      budget[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(members[static_cast<std::size_t>(k)].size());
    for (const auto& [k, nk] : gegenbauer_block_schedule(schedule.m_level, schedule.r,
                                                         schedule.theta, schedule.alpha))
      if (k < static_cast<int>(budget.size())) budget[static_cast<std::size_t>(k)] = nk;
  } else {
    // keep whole low blocks while they fit in v/2, then decay 2^{-kappa(k-L)}
    // proportionally; leftovers from the floors go round-robin low-to-high
    std::int64_t used = 0;
    std::size_t L = 0;
    while (L < members.size()) {
      const auto sz = static_cast<std::int64_t>(members[L].size());
      if (sz > 0 && used + sz > v / 2) break;
      budget[L] = sz;
      used += sz;
      ++L;
    }
    std::int64_t rest = v - used;
    const std::int64_t rest0 = rest;
    double wsum = 0.0;
    for (std::size_t k = L; k < members.size(); ++k)
      if (!members[k].empty())
        wsum += std::pow(2.0, -schedule.kappa * static_cast<double>(k - L));
    if (wsum > 0.0 && rest > 0) {
      for (std::size_t k = L; k < members.size(); ++k) {
        if (members[k].empty()) continue;
        const double w = std::pow(2.0, -schedule.kappa * static_cast<double>(k - L)) / wsum;
        budget[k] = std::min<std::int64_t>(
            static_cast<std::int64_t>(members[k].size()),
            static_cast<std::int64_t>(std::floor(w * static_cast<double>(rest0))));
        rest -= budget[k];
      }
      bool gave = true;
      while (rest > 0 && gave) {
        gave = false;
        for (std::size_t k = L; k < members.size() && rest > 0; ++k) {
          if (budget[k] < static_cast<std::int64_t>(members[k].size())) {
            ++budget[k];
            --rest;
            gave = true;
          }
        }
      }
    }
  }

  SparseApproximant out;
  out.algorithm = schedule.kind == BlockSchedule::Kind::wab ? "block-budget-wab"
                                                            : "block-budget-gegenbauer";
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (budget[k] <= 0) continue;
    std::vector<int> idx = members[k];
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      const double da = std::abs(coeffs(a)), db = std::abs(coeffs(b));
      if (da != db) return da > db;
      return a < b;
    });
    const auto take = std::min<std::size_t>(idx.size(), static_cast<std::size_t>(budget[k]));
    for (std::size_t a = 0; a < take; ++a) out.selection.push_back(idx[a]);
  }
  if (out.selection.size() > static_cast<std::size_t>(v))
    throw std::logic_error("block_budget_approximate: budget invariant violated");
  std::sort(out.selection.begin(), out.selection.end());
  out.coeffs = gather(coeffs, out.selection);
  return out;
}

KashinResult kashin_oracle_sigma(const Dictionary& dict, const Quadrature& q,
                                 const std::vector<int>& psi, int n, const KashinOptions& opts) {
  const int N = static_cast<int>(psi.size());
  const int Nd = dict.size;
  if (N < 1 || N > 14) throw size_error("kashin_oracle_sigma: need 1 <= |psi| <= 14");
  if (n < 0 || n > Nd) throw param_error("kashin_oracle_sigma: need 0 <= n <= |dict|");
  for (int j : psi)
    if (j < 0 || j >= Nd) throw param_error("kashin_oracle_sigma: psi index out of range");

  const Eigen::MatrixXcd gram = exact_gram(dict, q);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      const cplx g = gram(psi[static_cast<std::size_t>(a)], psi[static_cast<std::size_t>(b)]);
      const double want = a == b ? 1.0 : 0.0;
      if (std::abs(g - want) > 1e-8)
        throw param_error("kashin_oracle_sigma: psi sub-system is not orthonormal");
    }

  const std::uint64_t n_subsets = binomial_capped(Nd, n, opts.cap);
  const std::uint64_t n_vertices = std::uint64_t{1} << N;
  if (n_subsets > opts.cap / std::max<std::uint64_t>(n_vertices, 1))
    throw size_error("kashin_oracle_sigma: vertex x subset enumeration exceeds the cap");

  // K(i,j) = <psi_i, d_j>; vertex g = sum eps_i psi_i has b_j = <g, d_j> =
  // sum eps_i K(i,j). gram(a,b) = <d_b, d_a>, so K(i,j) = gram(j, psi_i).
  Eigen::MatrixXcd K(N, Nd);
  for (int i = 0; i < N; ++i) K.row(i) = gram.col(psi[static_cast<std::size_t>(i)]).transpose();

  // factor every subset once, reuse across vertices
  std::vector<std::vector<int>> subsets(n_subsets);
  std::vector<Eigen::LDLT<Eigen::MatrixXcd>> factors(n_subsets);
  for (std::uint64_t s = 0; s < n_subsets; ++s) {
    unrank_combination(s, Nd, n, subsets[s]);
    factors[s].compute(gather_block(gram, subsets[s]));
  }

  const double fsq = static_cast<double>(N);
  auto vertex_value = [&](std::uint64_t mask, std::vector<int>* best_subset) {
    Eigen::VectorXd eps(N);
    for (int i = 0; i < N; ++i) eps(i) = (mask >> i) & 1 ? -1.0 : 1.0;
    const Eigen::VectorXcd b = K.transpose() * eps.cast<cplx>();
    double best = fsq;  // n = 0 leaves the vertex untouched
    std::size_t best_idx = 0;
    for (std::uint64_t s = 0; s < n_subsets; ++s) {
      if (subsets[s].empty()) continue;
      const Eigen::VectorXcd bj = gather(b, subsets[s]);
      const double res = fsq - (bj.adjoint() * factors[s].solve(bj))(0).real();
      if (res < best - opts.tie_tol) {
        best = res;
        best_idx = s;
      }
    }
    if (best_subset) *best_subset = subsets[best_idx];
    return std::max(best, 0.0);
  };

  std::vector<double> vals(n_vertices);
  parallel_for(opts.exec, static_cast<std::int64_t>(n_vertices),
               [&](std::int64_t m) { vals[static_cast<std::size_t>(m)] = vertex_value(
                   static_cast<std::uint64_t>(m), nullptr); });
  const std::int64_t worst = argmax_with_ties(vals, opts.tie_tol);

  KashinResult out;
  std::vector<int> best_subset;
  out.value = std::sqrt(vertex_value(static_cast<std::uint64_t>(worst), &best_subset));
  out.signs.resize(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i)
    out.signs[static_cast<std::size_t>(i)] = (static_cast<std::uint64_t>(worst) >> i) & 1 ? -1 : 1;
  out.subset = best_subset;
  out.combinations = n_vertices * n_subsets;
  return out;
}

}  // namespace srlab
