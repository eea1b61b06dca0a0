#include "srlab/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srlab/subset.hpp"

namespace srlab {

namespace {

Eigen::MatrixXcd take_cols(const Eigen::MatrixXcd& m, const std::vector<int>& J) {
  Eigen::MatrixXcd out(m.rows(), static_cast<Eigen::Index>(J.size()));
  for (std::size_t a = 0; a < J.size(); ++a) out.col(static_cast<Eigen::Index>(a)) = m.col(J[a]);
  return out;
}

Eigen::MatrixXcd take_block(const Eigen::MatrixXcd& m, const std::vector<int>& J) {
  const auto v = static_cast<Eigen::Index>(J.size());
  Eigen::MatrixXcd out(v, v);
  for (Eigen::Index a = 0; a < v; ++a)
    for (Eigen::Index b = 0; b < v; ++b) out(a, b) = m(J[a], J[b]);
  return out;
}

Eigen::VectorXcd take_entries(const Eigen::VectorXcd& x, const std::vector<int>& J) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(J.size()));
  for (std::size_t a = 0; a < J.size(); ++a) out(static_cast<Eigen::Index>(a)) = x(J[a]);
  return out;
}

// ||f - sum_j c_j phi_j||^2 in the quadrature measure, from precomputed
// Gram/correlation data: fsq - 2 Re(c^H b_J) + c^H M_J c
double residual_sq(double fsq, const Eigen::MatrixXcd& M, const Eigen::VectorXcd& b,
                   const std::vector<int>& J, const Eigen::VectorXcd& c) {
  const Eigen::VectorXcd bj = take_entries(b, J);
  const Eigen::MatrixXcd mj = take_block(M, J);
  const double val = fsq - 2.0 * (c.adjoint() * bj)(0).real() + (c.adjoint() * mj * c)(0).real();
  return std::max(val, 0.0);
}

struct SpanContext {
  Eigen::MatrixXcd M;      // quadrature Gram, <phi_k, phi_j> as (j,k)
  Eigen::VectorXcd b;      // <f, phi_j>
  double fsq = 0.0;        // ||f||^2
  Eigen::MatrixXcd psi_q;  // dictionary on quadrature nodes
};

SpanContext make_span_context(const Dictionary& dict, const Quadrature& q,
                              const Eigen::VectorXcd& f_on_q) {
  if (f_on_q.size() != static_cast<Eigen::Index>(q.size()))
    throw param_error("recovery: function table does not match quadrature");
  SpanContext ctx;
  ctx.psi_q = design_matrix(dict, q.nodes);
  ctx.M = ctx.psi_q.adjoint() * q.weights.asDiagonal() * ctx.psi_q;
  ctx.b = ctx.psi_q.adjoint() * (q.weights.asDiagonal() * f_on_q);
  ctx.fsq = (f_on_q.adjoint() * (q.weights.asDiagonal() * f_on_q))(0).real();
  return ctx;
}

// subset scans rank by the algebraic residual_sq; reported norms are direct
// evaluations, which stay accurate when the residual is near zero
void fill_achieved_norms(SparseApproximant& out, const Dictionary& dict, const Quadrature& q,
                         const FunctionData& f, const PointSet* xi, const SpanContext& ctx,
                         const RecoverOptions& opts) {
  const Eigen::VectorXcd direct_res =
      f.on_quadrature - take_cols(ctx.psi_q, out.selection) * out.coeffs;
  out.residual_l2_mu = norm_lp(direct_res, q, 2.0);
  if (xi && f.at_points) {
    const Eigen::VectorXcd res_xi =
        *f.at_points - take_cols(design_matrix(dict, xi->points), out.selection) * out.coeffs;
    out.residual_l2_mu_xi = norm_l2_mu_xi(direct_res, q, res_xi);
  }
  if (opts.grid && f.on_grid) {
    const Eigen::VectorXcd res_g =
        *f.on_grid - take_cols(design_matrix(dict, opts.grid->points), out.selection) * out.coeffs;
    out.residual_uniform_grid = res_g.size() ? res_g.cwiseAbs().maxCoeff() : 0.0;
  }
}

}  // namespace

LsFit weighted_least_squares_fit(const Eigen::MatrixXcd& design, const Eigen::VectorXcd& samples,
                                 const Eigen::VectorXd& w) {
  if (design.rows() != samples.size() || design.rows() != w.size())
    throw param_error("weighted_least_squares_fit: row count mismatch");
  if (w.minCoeff() < 0.0) throw param_error("weighted_least_squares_fit: negative weight");
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXcd a = sw.asDiagonal() * design;
  const Eigen::VectorXcd y = sw.asDiagonal() * samples;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
  LsFit fit;
  fit.coeffs = cod.solve(y);
  fit.rank = static_cast<int>(cod.rank());
  fit.degenerate = fit.rank < design.cols();
  return fit;
}

IrlsResult least_p_fit(const Eigen::MatrixXcd& design, const Eigen::VectorXcd& samples,
                       const Eigen::VectorXd& w, double p, double tol, int max_iter) {
  if (p < 1.0 || std::isinf(p)) throw param_error("least_p_fit: p must be finite and >= 1");
  auto objective = [&](const Eigen::VectorXcd& c) {
    const Eigen::VectorXcd r = samples - design * c;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) acc += w(i) * std::pow(std::abs(r(i)), p);
    return acc;
  };

  IrlsResult res;
  res.coeffs = weighted_least_squares_fit(design, samples, w).coeffs;
  res.objective = objective(res.coeffs);
  if (p == 2.0) {
    res.converged = true;
    return res;
  }

  // residual floor keeps the p < 2 reweighting bounded
  const double eps = 1e-10 * (1.0 + samples.cwiseAbs().maxCoeff());
  Eigen::VectorXcd c = res.coeffs;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXcd r = samples - design * c;
    Eigen::VectorXd wp(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
      wp(i) = w(i) * std::pow(std::max(std::abs(r(i)), eps), p - 2.0);
    c = weighted_least_squares_fit(design, samples, wp).coeffs;
    const double obj = objective(c);
    res.iterations = it;
    const double gain = std::abs(res.objective - obj);
    if (obj < res.objective) {
      res.coeffs = c;
      res.objective = obj;
    }
    if (gain <= tol * std::max(1.0, res.objective)) {
      res.converged = true;
      break;
    }
  }
  return res;
}

SparseApproximant ideal_projection_recover(const Dictionary& dict, const Quadrature& q,
                                           const FunctionData& f, int v,
                                           const RecoverOptions& opts) {
  const int N = dict.size;
  if (v < 1 || v > N) throw param_error("ideal_projection_recover: need 1 <= v <= N");
  const SpanContext ctx = make_span_context(dict, q, f.on_quadrature);

  auto project = [&](const std::vector<int>& J) -> Eigen::VectorXcd {
    const Eigen::MatrixXcd mj = take_block(ctx.M, J);
    const Eigen::VectorXcd bj = take_entries(ctx.b, J);
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(mj);
    if (ldlt.info() == Eigen::Success) {
      const Eigen::VectorXcd c = ldlt.solve(bj);
      if (c.allFinite()) return c;
    }
    return Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd>(mj).solve(bj);
  };

  SparseApproximant out;
  const std::uint64_t total = binomial_capped(N, v, opts.subset_cap);
  if (total <= opts.subset_cap) {
    std::vector<double> vals(total);
    parallel_for(opts.exec, static_cast<std::int64_t>(total), [&](std::int64_t r) {
      std::vector<int> J;
      unrank_combination(static_cast<std::uint64_t>(r), N, v, J);
      vals[static_cast<std::size_t>(r)] = residual_sq(ctx.fsq, ctx.M, ctx.b, J, project(J));
    });
    const std::int64_t best = argmin_with_ties(vals, opts.tie_tol);
    unrank_combination(static_cast<std::uint64_t>(best), N, v, out.selection);
    out.coeffs = project(out.selection);
    out.algorithm = "projection-exhaustive";
  } else {
    // greedy fallback above the cap: orthogonal greedy in L2(mu)
    std::vector<int> sel;
    Eigen::VectorXcd c;
    std::vector<char> used(static_cast<std::size_t>(N), 0);
    for (int step = 0; step < v; ++step) {
      const Eigen::VectorXcd corr =
          ctx.b - (sel.empty() ? Eigen::VectorXcd::Zero(N).eval()
                               : Eigen::VectorXcd((take_cols(ctx.M, sel) * c)));
      int pick = -1;
      double best = -1.0;
      for (int j = 0; j < N; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double a = std::abs(corr(j));
        if (a > best + 1e-15) {
          best = a;
          pick = j;
        }
      }
      used[static_cast<std::size_t>(pick)] = 1;
      sel.push_back(pick);
      std::sort(sel.begin(), sel.end());
      c = project(sel);
      out.step_residuals.push_back(std::sqrt(residual_sq(ctx.fsq, ctx.M, ctx.b, sel, c)));
    }
    out.selection = sel;
    out.coeffs = c;
    out.algorithm = "projection-greedy";
  }
  fill_achieved_norms(out, dict, q, f, nullptr, ctx, opts);
  return out;
}

SparseApproximant sparse_ls_recover(const Dictionary& dict, const Quadrature& q,
                                    const FunctionData& f, const PointSet& xi, int v,
                                    RecoverMode mode, const RecoverOptions& opts) {
  const int N = dict.size;
  if (v < 1 || v > N) throw param_error("sparse_ls_recover: need 1 <= v <= N");
  if (!f.at_points) throw param_error("sparse_ls_recover: sample values required");
  if (f.at_points->size() != static_cast<Eigen::Index>(xi.size()))
    throw param_error("sparse_ls_recover: sample values do not match the point set");

  const SpanContext ctx = make_span_context(dict, q, f.on_quadrature);
  const Eigen::MatrixXcd phi = design_matrix(dict, xi.points);
  const Eigen::VectorXcd& y = *f.at_points;

  const std::uint64_t total = binomial_capped(N, v, opts.subset_cap);
  const bool exhaustive = (mode == RecoverMode::exhaustive) ||
                          (mode == RecoverMode::automatic && total <= opts.subset_cap);
  if (exhaustive && total > opts.subset_cap)
    throw size_error("sparse_ls_recover: subset count exceeds the cap");

  SparseApproximant out;
  if (exhaustive) {
    std::vector<double> vals(total);
    parallel_for(opts.exec, static_cast<std::int64_t>(total), [&](std::int64_t r) {
      std::vector<int> J;
      unrank_combination(static_cast<std::uint64_t>(r), N, v, J);
      const LsFit fit = weighted_least_squares_fit(take_cols(phi, J), y, xi.weights);
      vals[static_cast<std::size_t>(r)] = residual_sq(ctx.fsq, ctx.M, ctx.b, J, fit.coeffs);
    });
    const std::int64_t best = argmin_with_ties(vals, opts.tie_tol);
    unrank_combination(static_cast<std::uint64_t>(best), N, v, out.selection);
    const LsFit fit = weighted_least_squares_fit(take_cols(phi, out.selection), y, xi.weights);
    out.coeffs = fit.coeffs;
    out.degenerate = fit.degenerate;
    out.algorithm = "ls-exhaustive";
  } else {
    // orthogonal-matching selection on the weighted sample inner product
    std::vector<int> sel;
    Eigen::VectorXcd c;
    std::vector<char> used(static_cast<std::size_t>(N), 0);
    Eigen::VectorXd colnorm(N);
    for (int j = 0; j < N; ++j) {
      double acc = 0.0;
      for (Eigen::Index nu = 0; nu < phi.rows(); ++nu) acc += xi.weights(nu) * std::norm(phi(nu, j));
      colnorm(j) = std::sqrt(acc);
    }
    bool degenerate = false;
    for (int step = 0; step < v; ++step) {
      const Eigen::VectorXcd r = sel.empty() ? y : Eigen::VectorXcd(y - take_cols(phi, sel) * c);
      int pick = -1;
      double best = -1.0;
      for (int j = 0; j < N; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        cplx ip = 0.0;
        for (Eigen::Index nu = 0; nu < phi.rows(); ++nu)
          ip += xi.weights(nu) * r(nu) * std::conj(phi(nu, j));
        const double score = colnorm(j) > 1e-14 ? std::abs(ip) / colnorm(j) : 0.0;
        if (score > best + 1e-15) {
          best = score;
          pick = j;
        }
      }
      used[static_cast<std::size_t>(pick)] = 1;
      sel.push_back(pick);
      std::sort(sel.begin(), sel.end());
      const LsFit fit = weighted_least_squares_fit(take_cols(phi, sel), y, xi.weights);
      c = fit.coeffs;
      degenerate = degenerate || fit.degenerate;
      const Eigen::VectorXcd res = y - take_cols(phi, sel) * c;
      out.step_residuals.push_back(sample_norm_weighted(res, xi.weights, 2.0));
    }
    out.selection = sel;
    out.coeffs = c;
    out.degenerate = degenerate;
    out.algorithm = "ls-greedy";
  }
  fill_achieved_norms(out, dict, q, f, &xi, ctx, opts);
  return out;
}

RhoLsEstimate estimate_rho_ls(const Dictionary& dict, const Quadrature& q, int v,
                              const std::vector<PointSet>& candidates,
                              const std::vector<Eigen::VectorXcd>& member_coeffs, RecoverMode mode,
                              const RecoverOptions& opts) {
  if (candidates.empty() || member_coeffs.empty())
    throw param_error("estimate_rho_ls: need at least one candidate and one member");
  RhoLsEstimate est;
  est.value = std::numeric_limits<double>::infinity();
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    double worst = -1.0;
    std::size_t worst_f = 0;
    for (std::size_t fi = 0; fi < member_coeffs.size(); ++fi) {
      const FunctionData f = tabulate_span(dict, member_coeffs[fi], q, &candidates[ci]);
      const SparseApproximant rec = sparse_ls_recover(dict, q, f, candidates[ci], v, mode, opts);
      if (*rec.residual_l2_mu > worst) {
        worst = *rec.residual_l2_mu;
        worst_f = fi;
      }
    }
    if (worst < est.value) {
      est.value = worst;
      est.best_candidate = ci;
      est.worst_member = worst_f;
    }
  }
  return est;
}

}  // namespace srlab
