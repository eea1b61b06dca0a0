// Times the three hot scans through both execution policies and checks the
// outputs match bit for bit. The scans fill per-iteration value arrays and
// reduce serially, so the parallel path must reproduce the serial one exactly;
// on a single-core host the timings themselves will be close.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "srlab/discretization.hpp"
#include "srlab/recovery.hpp"
#include "srlab/sparse_oracles.hpp"

using namespace srlab;

namespace {

template <class F>
double best_seconds(int reps, F&& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, std::uint64_t items, double serial, double parallel, bool match) {
  std::printf("%-28s %10llu %12.4f %12.4f %8.2fx  %s\n", name,
              static_cast<unsigned long long>(items), serial * 1e3, parallel * 1e3,
              serial / parallel, match ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("reps=%d omp_max_threads=%d\n", reps, threads);
  std::printf("%-28s %10s %12s %12s %9s\n", "scan", "items", "serial(ms)", "parallel(ms)",
              "speedup");

  // subset scan: generalized eigenvalue sandwich per 3-subset
  {
    const Dictionary dict = trig_dictionary(frequency_set_consecutive(18));
    const PointSet xi = equispaced_torus(100, 1);
    VerifyOptions o;
    DiscretizationReport rs, rp;
    o.exec = Exec::serial;
    const double ts = best_seconds(reps, [&] {
      rs = verify_universal_discretization(dict, xi, 3, Side::two_sided, {}, o);
    });
    o.exec = Exec::parallel;
    const double tp = best_seconds(reps, [&] {
      rp = verify_universal_discretization(dict, xi, 3, Side::two_sided, {}, o);
    });
    const bool match = rs.C1 == rp.C1 && rs.C2 == rp.C2 &&
                       rs.worst_subset_low == rp.worst_subset_low;
    row("discretization-subsets", rs.subsets_checked, ts, tp, match);
  }

  // per-subset least squares with L2(mu) scoring
  {
    const Dictionary dict = trig_dictionary(frequency_set_consecutive(18));
    const Quadrature q = default_quadrature_for(dict);
    Rng rng(42);
    const PointSet xi = draw_points(dict.measure, 60, rng);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dict.size);
    c[2] = cplx(1.0, 0.0);
    c[9] = cplx(0.0, 0.7);
    c[15] = cplx(-0.4, 0.2);
    const FunctionData f = tabulate_span(dict, c, q, &xi, nullptr);
    RecoverOptions o;
    SparseApproximant as, ap;
    o.exec = Exec::serial;
    const double ts = best_seconds(
        reps, [&] { as = sparse_ls_recover(dict, q, f, xi, 3, RecoverMode::exhaustive, o); });
    o.exec = Exec::parallel;
    const double tp = best_seconds(
        reps, [&] { ap = sparse_ls_recover(dict, q, f, xi, 3, RecoverMode::exhaustive, o); });
    const bool match =
        as.selection == ap.selection && as.coeffs == ap.coeffs &&
        as.residual_l2_mu == ap.residual_l2_mu;
    row("sparse-ls-subsets", 816, ts, tp, match);
  }

  // sign-vertex sup of the thresholding oracle
  {
    const Dictionary dict = trig_dictionary(frequency_set_consecutive(14));
    const Quadrature q = default_quadrature_for(dict);
    std::vector<int> psi(static_cast<std::size_t>(dict.size));
    for (int i = 0; i < dict.size; ++i) psi[static_cast<std::size_t>(i)] = i;
    KashinOptions o;
    KashinResult ks, kp;
    o.exec = Exec::serial;
    const double ts = best_seconds(reps, [&] { ks = kashin_oracle_sigma(dict, q, psi, 3, o); });
    o.exec = Exec::parallel;
    const double tp = best_seconds(reps, [&] { kp = kashin_oracle_sigma(dict, q, psi, 3, o); });
    const bool match = ks.value == kp.value && ks.signs == kp.signs && ks.subset == kp.subset;
    row("kashin-vertices", ks.combinations, ts, tp, match);
  }

  return 0;
}
