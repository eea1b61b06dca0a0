#include "srlab/lower_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace srlab {

namespace {

// min-norm solve of A y = t, or nullopt when the system is inconsistent
std::optional<Eigen::VectorXcd> feasible_min_norm(const Eigen::MatrixXcd& A,
                                                  const Eigen::VectorXcd& t) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(A);
  const Eigen::VectorXcd y = cod.solve(t);
  const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
  if ((A * y - t).cwiseAbs().maxCoeff() > 1e-8 * scale) return std::nullopt;
  return y;
}

}  // namespace

NullspaceBasis nullspace_basis(const Dictionary& dict, const PointSet& xi, const Quadrature& q,
                               double rank_tol) {
  NullspaceBasis out;
  const Eigen::MatrixXcd psi_q = design_matrix(dict, q.nodes);
  Eigen::MatrixXcd kernel;
  if (xi.size() == 0) {
    kernel = Eigen::MatrixXcd::Identity(dict.size, dict.size);
  } else {
    const Eigen::MatrixXcd phi = design_matrix(dict, xi.points);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(phi);
    lu.setThreshold(rank_tol);
    kernel = lu.kernel();
    if (lu.dimensionOfKernel() == 0) {
      out.dim = 0;
      out.coeffs.resize(dict.size, 0);
      return out;
    }
  }

  // orthonormalize in L2(mu): columns B = K R with R^H (K^H G K) R = I
  const Eigen::MatrixXcd gram = psi_q.adjoint() * q.weights.asDiagonal() * psi_q;
  const Eigen::MatrixXcd small = kernel.adjoint() * gram * kernel;
  Eigen::LLT<Eigen::MatrixXcd> llt(small);
  if (llt.info() == Eigen::Success) {
    const Eigen::MatrixXcd L = llt.matrixL();
    const Eigen::MatrixXcd R = L.adjoint().triangularView<Eigen::Upper>().solve(
        Eigen::MatrixXcd::Identity(kernel.cols(), kernel.cols()));
    out.coeffs = kernel * R;
  } else {
    // nearly dependent kernel columns: eigen-orthonormalize, dropping nulls
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(small);
    const Eigen::VectorXd ev = es.eigenvalues();
    const double cut = rank_tol * std::max(ev.cwiseAbs().maxCoeff(), 1.0);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > cut) keep.push_back(i);
    Eigen::MatrixXcd r(kernel.cols(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t a = 0; a < keep.size(); ++a)
      r.col(static_cast<Eigen::Index>(a)) = es.eigenvectors().col(keep[a]) / std::sqrt(ev(keep[a]));
    out.coeffs = kernel * r;
  }
  out.dim = static_cast<int>(out.coeffs.cols());

  if (xi.size() > 0) {
    const Eigen::MatrixXcd at_xi = design_matrix(dict, xi.points) * out.coeffs;
    out.max_point_value = at_xi.size() ? at_xi.cwiseAbs().maxCoeff() : 0.0;
  }
  const Eigen::MatrixXcd check =
      out.coeffs.adjoint() * gram * out.coeffs - Eigen::MatrixXcd::Identity(out.dim, out.dim);
  out.gram_defect = check.size() ? check.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

VertexSearchResult lorentz_vertex_search(const Eigen::MatrixXcd& basis, int n, double tol) {
  VertexSearchResult out;
  const Eigen::Index m = basis.rows();
  if (m == 0 || basis.cols() == 0 || n < 1) return out;

  // orthonormal column basis of the span
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(basis);
  qr.setThreshold(1e-12);
  const Eigen::Index r = qr.rank();
  if (r == 0) return out;
  // n > r breaks the existence guarantee; the search still runs and the
  // validator decides
  Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, r);

  // greedily pin coordinates to unit targets, each time choosing the pin that
  // keeps the interpolant's sup norm smallest
  std::vector<Eigen::Index> pinned;
  std::vector<char> is_pinned(static_cast<std::size_t>(m), 0);
  Eigen::MatrixXcd A(0, r);
  Eigen::VectorXcd targets(0);
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(m);

  for (Eigen::Index step = 0; step < r; ++step) {
    double best_sup = std::numeric_limits<double>::infinity();
    Eigen::Index best_i = -1;
    cplx best_tau = 1.0;
    Eigen::VectorXcd best_z;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (is_pinned[static_cast<std::size_t>(i)]) continue;
      // keep the phase the current interpolant already has there
      const cplx cur = z(i);
      const cplx tau = std::abs(cur) > 1e-12 ? cur / std::abs(cur) : cplx(1.0);
      Eigen::MatrixXcd A2(A.rows() + 1, r);
      A2.topRows(A.rows()) = A;
      A2.row(A.rows()) = Q.row(i);
      Eigen::VectorXcd t2(targets.size() + 1);
      t2.head(targets.size()) = targets;
      t2(targets.size()) = tau;
      const auto y = feasible_min_norm(A2, t2);
      if (!y) continue;
      const Eigen::VectorXcd zc = Q * *y;
      const double sup = zc.cwiseAbs().maxCoeff();
      if (sup < best_sup - 1e-12) {
        best_sup = sup;
        best_i = i;
        best_tau = tau;
        best_z = zc;
      }
    }
    if (best_i < 0) break;
    is_pinned[static_cast<std::size_t>(best_i)] = 1;
    pinned.push_back(best_i);
    Eigen::MatrixXcd A2(A.rows() + 1, r);
    A2.topRows(A.rows()) = A;
    A2.row(A.rows()) = Q.row(best_i);
    A = std::move(A2);
    Eigen::VectorXcd t2(targets.size() + 1);
    t2.head(targets.size()) = targets;
    t2(targets.size()) = best_tau;
    targets = std::move(t2);
    z = best_z;
  }

  const double zmax = z.cwiseAbs().maxCoeff();
  if (zmax <= 0.0) return out;
  z /= zmax;
  int strong = 0;
  const double bar = 1.0 / std::sqrt(2.0) - tol;
  for (Eigen::Index i = 0; i < m; ++i)
    if (std::abs(z(i)) >= bar) ++strong;
  out.z = z;
  out.strong_count = strong;
  out.found = strong >= n && std::abs(z.cwiseAbs().maxCoeff() - 1.0) <= tol;
  return out;
}

D1Certificate check_condition_D1(const Dictionary& dict, const PointSet& X, double p,
                                 const Quadrature& q, const D1Options& opts) {
  if (p < 2.0) throw param_error("check_condition_D1: need p >= 2");
  if (X.size() == 0) throw param_error("check_condition_D1: empty point set");
  const int N = dict.size;
  const double M = static_cast<double>(X.size());

  D1Certificate cert;
  cert.points = X;
  cert.p = p;
  cert.seed = opts.seed;

  const Eigen::MatrixXcd phi = design_matrix(dict, X.points);
  const Eigen::MatrixXcd psi_q = design_matrix(dict, q.nodes);
  const Eigen::MatrixXcd gram = exact_gram(dict, q);
  const Eigen::MatrixXcd H = (phi.adjoint() * phi) / M;

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(H, gram,
                                                                 Eigen::Ax_lBx | Eigen::ComputeEigenvectors);
  if (ges.info() != Eigen::Success) throw size_error("check_condition_D1: eigensolve failed");
  cert.vt5_low = ges.eigenvalues().minCoeff();
  cert.vt5_high = ges.eigenvalues().maxCoeff();

  const double lo = 0.5, hi = 1.5;
  if (p == 2.0) {
    cert.vt4_low = cert.vt5_low;
    cert.vt4_high = cert.vt5_high;
    cert.certified = true;
    cert.passed = cert.vt5_low >= lo - 1e-12 && cert.vt5_high <= hi + 1e-12;
    return cert;
  }

  // ratio (1/M) sum |f(x)|^p / ||f||_p^p searched by seeded projected ascent;
  // a pass means no violation was found, never a certificate
  auto ratio_grad = [&](const Eigen::VectorXcd& c, Eigen::VectorXcd* grad) {
    const Eigen::VectorXcd fx = phi * c;
    const Eigen::VectorXcd fq = psi_q * c;
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < fx.size(); ++i) num += std::pow(std::abs(fx(i)), p);
    num /= M;
    for (Eigen::Index i = 0; i < fq.size(); ++i)
      den += q.weights(i) * std::pow(std::abs(fq(i)), p);
    if (den <= 0.0) return 0.0;
    if (grad) {
      Eigen::VectorXcd wn(fx.size()), wd(fq.size());
      for (Eigen::Index i = 0; i < fx.size(); ++i)
        wn(i) = std::pow(std::abs(fx(i)), p - 2.0) * fx(i) / M;
      for (Eigen::Index i = 0; i < fq.size(); ++i)
        wd(i) = q.weights(i) * std::pow(std::abs(fq(i)), p - 2.0) * fq(i);
      *grad = (phi.adjoint() * wn) / num - (psi_q.adjoint() * wd) / den;
    }
    return num / den;
  };

  auto ascend = [&](Eigen::VectorXcd c, double dir) {
    c /= std::max(c.norm(), 1e-300);
    double val = ratio_grad(c, nullptr);
    double eta = 0.25;
    for (int it = 0; it < opts.max_iter && eta > 1e-12; ++it) {
      Eigen::VectorXcd g;
      ratio_grad(c, &g);
      Eigen::VectorXcd c2 = c + dir * eta * g;
      const double nn = c2.norm();
      if (nn <= 0.0) break;
      c2 /= nn;
      const double v2 = ratio_grad(c2, nullptr);
      if (dir * (v2 - val) > 0.0) {
        c = c2;
        val = v2;
        eta *= 1.3;
      } else {
        eta *= 0.5;
      }
    }
    return val;
  };

  const int R = opts.restarts;
  cert.restarts = R;
  std::vector<double> highs(static_cast<std::size_t>(R)), lows(static_cast<std::size_t>(R));
  Rng base(opts.seed);
  std::vector<Eigen::VectorXcd> starts(static_cast<std::size_t>(R));
  for (int t = 0; t < R; ++t) {
    if (t < N) {
      starts[static_cast<std::size_t>(t)] = Eigen::VectorXcd::Zero(N);
      starts[static_cast<std::size_t>(t)](t) = 1.0;
    } else if (t == N) {
      starts[static_cast<std::size_t>(t)] = ges.eigenvectors().col(0);
    } else if (t == N + 1) {
      starts[static_cast<std::size_t>(t)] = ges.eigenvectors().col(N - 1);
    } else {
      Rng rr = base.fork(static_cast<std::uint64_t>(t));
      Eigen::VectorXcd c(N);
      for (int j = 0; j < N; ++j) c(j) = cplx(rr.normal(), rr.normal());
      starts[static_cast<std::size_t>(t)] = c;
    }
  }
  parallel_for(opts.exec, R, [&](std::int64_t t) {
    highs[static_cast<std::size_t>(t)] = ascend(starts[static_cast<std::size_t>(t)], +1.0);
    lows[static_cast<std::size_t>(t)] = ascend(starts[static_cast<std::size_t>(t)], -1.0);
  });
  cert.vt4_high = *std::max_element(highs.begin(), highs.end());
  cert.vt4_low = *std::min_element(lows.begin(), lows.end());
  cert.certified = false;
  cert.passed = cert.vt5_low >= lo - 1e-12 && cert.vt5_high <= hi + 1e-12 &&
                cert.vt4_low >= lo - opts.tol && cert.vt4_high <= hi + opts.tol;
  return cert;
}

TauWitness tau_m_witness(const Dictionary& dict, const PointSet& xi, double p, const Quadrature& q,
                         const D1Certificate& cert) {
  TauWitness out;
  if (!cert.passed) {
    out.failure = "discretization premise not satisfied";
    return out;
  }
  const int D = dict.size;
  const int m = static_cast<int>(xi.size());
  const double M = static_cast<double>(cert.points.size());
  if (m >= D) {
    out.failure = "no hidden mass: sample count reaches the dimension";
    return out;
  }

  const NullspaceBasis nb = nullspace_basis(dict, xi, q);
  out.nullspace_dim = nb.dim;
  if (nb.dim < D - m) {
    out.failure = "nullspace dimension below D - m";
    return out;
  }

  // sampled images on the discretization points span the search space
  const Eigen::MatrixXcd T = design_matrix(dict, cert.points.points) * nb.coeffs;
  const VertexSearchResult vs = lorentz_vertex_search(T, D - m);
  out.strong_coords = vs.strong_count;
  if (!vs.found) {
    out.failure = "vertex search did not reach the required coordinate count";
    return out;
  }

  // f0 in the nullspace with f0(x^nu) = z_nu: solve T y = z, g = 2^{-1/p} f0
  const auto y = feasible_min_norm(T, vs.z);
  if (!y) {
    out.failure = "interpolation back-solve failed";
    return out;
  }
  const double scale = std::pow(2.0, -1.0 / p);
  out.coeffs = scale * (nb.coeffs * *y);

  const FunctionData g = tabulate_span(dict, out.coeffs, q, &xi);
  out.l2_value = norm_lp(g.on_quadrature, q, 2.0);
  out.p_norm = norm_lp(g.on_quadrature, q, p);
  out.max_at_xi = g.at_points->size() ? g.at_points->cwiseAbs().maxCoeff() : 0.0;
  out.bound = std::sqrt(std::pow(2.0, -2.0 / p) * (2.0 / 3.0) * static_cast<double>(D - m) /
                        (3.0 * M));
  out.bound_satisfied = out.l2_value >= out.bound - 1e-12;
  out.found = out.p_norm <= 1.0 + 1e-10 && out.max_at_xi <= 1e-10;
  if (!out.found) out.failure = "witness failed validation";
  return out;
}

}  // namespace srlab
