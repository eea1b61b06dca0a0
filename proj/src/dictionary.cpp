#include "srlab/dictionary.hpp"

#include <algorithm>
#include <cmath>

namespace srlab {

namespace {

void check_cap(std::size_t n, std::size_t cap, const char* who) {
  if (n > cap) throw size_error(std::string(who) + ": index set exceeds cap");
}

std::vector<std::vector<int>> sorted_unique(std::vector<std::vector<int>> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

FrequencySet frequency_set_gamma(int N, int d, std::size_t cap) {
  if (N < 1 || d < 1) throw param_error("frequency_set_gamma: need N >= 1, d >= 1");
  FrequencySet fs;
  fs.kind = "gamma";
  fs.dim = d;
  // every coordinate of a member is bounded by N, so a box scan suffices
  std::vector<int> k(d, -N);
  while (true) {
    long long prod = 1;
    for (int j = 0; j < d; ++j) prod *= std::max(std::abs(k[j]), 1);
    if (prod <= N) {
      fs.indices.push_back(k);
      check_cap(fs.indices.size(), cap, "frequency_set_gamma");
    }
    int j = d - 1;
    while (j >= 0 && k[j] == N) k[j--] = -N;
    if (j < 0) break;
    ++k[j];
  }
  fs.indices = sorted_unique(std::move(fs.indices));
  return fs;
}

FrequencySet frequency_set_block(const std::vector<int>& s, std::size_t cap) {
  if (s.empty()) throw param_error("frequency_set_block: empty level vector");
  for (int sj : s)
    if (sj < 0) throw param_error("frequency_set_block: levels must be >= 0");
  FrequencySet fs;
  fs.kind = "dyadic-block";
  fs.dim = static_cast<int>(s.size());
  // per-coordinate ranges [2^{s-1}] <= |k| < 2^s; s = 0 gives {0}
  std::vector<std::vector<int>> per_coord(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] == 0) {
      per_coord[j] = {0};
    } else {
      const int lo = 1 << (s[j] - 1);  // [2^{s-1}] is an integer once s >= 1
      const int hi = (1 << s[j]) - 1;
      for (int a = lo; a <= hi; ++a) {
        per_coord[j].push_back(-a);
        per_coord[j].push_back(a);
      }
      std::sort(per_coord[j].begin(), per_coord[j].end());
    }
  }
  std::vector<std::size_t> idx(s.size(), 0);
  std::vector<int> k(s.size());
  while (true) {
    for (std::size_t j = 0; j < s.size(); ++j) k[j] = per_coord[j][idx[j]];
    fs.indices.push_back(k);
    check_cap(fs.indices.size(), cap, "frequency_set_block");
    int j = static_cast<int>(s.size()) - 1;
    while (j >= 0 && ++idx[j] == per_coord[j].size()) idx[j--] = 0;
    if (j < 0) break;
  }
  fs.indices = sorted_unique(std::move(fs.indices));
  return fs;
}

FrequencySet frequency_set_step(int n, int d, std::size_t cap) {
  if (n < 0 || d < 1) throw param_error("frequency_set_step: need n >= 0, d >= 1");
  FrequencySet fs;
  fs.kind = "step-hyperbolic";
  fs.dim = d;
  // enumerate compositions |s|_1 <= n and take the union of blocks
  std::vector<int> s(d, 0);
  while (true) {
    int sum = 0;
    for (int j = 0; j < d; ++j) sum += s[j];
    if (sum <= n) {
      auto block = frequency_set_block(s, cap);
      for (auto& k : block.indices) {
        fs.indices.push_back(std::move(k));
        check_cap(fs.indices.size(), 4 * cap + 16, "frequency_set_step");
      }
    }
    int j = d - 1;
    while (j >= 0 && s[j] == n) s[j--] = 0;
    if (j < 0) break;
    ++s[j];
  }
  fs.indices = sorted_unique(std::move(fs.indices));
  check_cap(fs.indices.size(), cap, "frequency_set_step");
  return fs;
}

FrequencySet frequency_set_explicit(std::vector<std::vector<int>> indices) {
  if (indices.empty()) throw param_error("frequency_set_explicit: empty index list");
  const std::size_t d = indices.front().size();
  for (const auto& k : indices)
    if (k.size() != d) throw param_error("frequency_set_explicit: inconsistent dimensions");
  FrequencySet fs;
  fs.kind = "explicit";
  fs.dim = static_cast<int>(d);
  fs.indices = sorted_unique(std::move(indices));
  return fs;
}

FrequencySet frequency_set_consecutive(int n) {
  if (n < 1) throw param_error("frequency_set_consecutive: need n >= 1");
  std::vector<std::vector<int>> idx;
  idx.reserve(n);
  for (int k = -(n / 2); k < (n + 1) / 2; ++k) idx.push_back({k});
  return frequency_set_explicit(std::move(idx));
}

int dyadic_level(const std::vector<int>& k) {
  int lvl = 0;
  for (int kj : k) {
    const int a = std::abs(kj);
    if (a > 0) lvl += static_cast<int>(std::floor(std::log2(static_cast<double>(a)))) + 1;
  }
  return lvl;
}

Eigen::VectorXcd Dictionary::evaluate_all(const Point& x) const {
  if (eval_all_fn) return eval_all_fn(x);
  Eigen::VectorXcd v(size);
  for (int j = 0; j < size; ++j) v(j) = eval(j, x);
  return v;
}

Dictionary trig_dictionary(const FrequencySet& freq) {
  Dictionary d;
  d.kind = "trig";
  d.size = static_cast<int>(freq.size());
  d.measure = MeasureSpec::torus(freq.dim);
  d.orthonormal = true;
  d.uniform_bound = 1.0;
  d.riesz_lower = 1.0;
  int mx = 0;
  for (const auto& k : freq.indices)
    for (int kj : k) mx = std::max(mx, std::abs(kj));
  d.max_degree = mx;
  d.freq = freq;
  auto indices = freq.indices;
  d.eval = [indices](int j, const Point& x) -> cplx {
    const auto& k = indices[static_cast<std::size_t>(j)];
    double t = 0.0;
    for (std::size_t c = 0; c < k.size(); ++c) t += k[c] * x[c];
    return {std::cos(t), std::sin(t)};
  };
  return d;
}

double gegenbauer_eval(double alpha, int n, double x) {
  return gegenbauer_eval_all(alpha, n, x)(n);
}

Eigen::VectorXd gegenbauer_eval_all(double alpha, int max_n, double x) {
  if (alpha <= -1.0) throw param_error("gegenbauer_eval_all: alpha must exceed -1");
  if (max_n < 0) throw param_error("gegenbauer_eval_all: degree must be >= 0");
  Eigen::VectorXd p(max_n + 1);
  p(0) = 1.0;  // the probability measure gives ||1|| = 1
  if (max_n == 0) return p;
  // orthonormal recurrence for a symmetric weight:
  //   sqrt(b_{k+1}) p_{k+1} = x p_k - sqrt(b_k) p_{k-1}
  auto beta = [alpha](int k) {
    if (k == 1) return 1.0 / (3.0 + 2.0 * alpha);
    return k * (k + 2.0 * alpha) / (4.0 * sqr(k + alpha) - 1.0);
  };
  double sb_prev = 0.0, prev = 0.0, cur = 1.0;
  for (int k = 0; k < max_n; ++k) {
    const double sb = std::sqrt(beta(k + 1));
    const double nxt = (x * cur - sb_prev * prev) / sb;
    p(k + 1) = nxt;
    prev = cur;
    cur = nxt;
    sb_prev = sb;
  }
  return p;
}

Dictionary gegenbauer_dictionary(const GegenbauerParams& params) {
  if (params.max_degree < 0) throw param_error("gegenbauer_dictionary: max_degree must be >= 0");
  Dictionary d;
  d.kind = "gegenbauer";
  d.size = params.max_degree + 1;
  d.measure = MeasureSpec::gegenbauer(params.alpha);
  d.orthonormal = true;
  d.riesz_lower = 1.0;
  d.max_degree = params.max_degree;
  const double alpha = params.alpha;
  d.eval = [alpha](int j, const Point& x) -> cplx { return {gegenbauer_eval(alpha, j, x[0]), 0.0}; };
  const int N = params.max_degree;
  d.eval_all_fn = [alpha, N](const Point& x) -> Eigen::VectorXcd {
    return gegenbauer_eval_all(alpha, N, x[0]).cast<cplx>();
  };
  return d;
}

Dictionary gegenbauer_weighted_dictionary(const GegenbauerParams& params, int oversample) {
  if (params.max_degree < 0) throw param_error("gegenbauer_weighted_dictionary: max_degree must be >= 0");
  const double alpha = params.alpha;
  const int N = params.max_degree;
  auto wfac = [alpha](double x) { return std::pow(std::max(1.0 - x * x, 0.0), alpha / 2.0 + 0.25); };

  // empirical normalizer: max over the grid of the weighted values, all degrees
  Dictionary probe = gegenbauer_dictionary(params);
  const EvalGrid grid = evaluation_grid(probe, oversample);
  double c = 0.0;
  for (const Point& x : grid.points) {
    const Eigen::VectorXd vals = gegenbauer_eval_all(alpha, N, x[0]);
    const double w = wfac(x[0]);
    for (int n = 0; n <= N; ++n) c = std::max(c, std::abs(vals(n)) * w);
  }
  if (c <= 0.0) throw param_error("gegenbauer_weighted_dictionary: degenerate normalizer");

  Dictionary d;
  d.kind = "gegenbauer-weighted";
  d.size = N + 1;
  d.measure = MeasureSpec::chebyshev();
  d.orthonormal = false;
  d.uniform_bound = 1.0;
  d.max_degree = N;
  d.eval = [alpha, c, wfac](int j, const Point& x) -> cplx {
    return {gegenbauer_eval(alpha, j, x[0]) * wfac(x[0]) / c, 0.0};
  };
  d.eval_all_fn = [alpha, c, wfac, N](const Point& x) -> Eigen::VectorXcd {
    return (gegenbauer_eval_all(alpha, N, x[0]) * (wfac(x[0]) / c)).cast<cplx>();
  };
  // <phi_n, phi_m>_cheb = delta_nm / (pi c_alpha C^2)
  const double diag = 1.0 / (pi * gegenbauer_normalizer(alpha) * c * c);
  d.known_gram = Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(N + 1, N + 1) * diag);
  d.riesz_lower = 1.0 / diag;
  return d;
}

Eigen::MatrixXcd design_matrix(const Dictionary& dict, const std::vector<Point>& pts) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(pts.size()), dict.size);
  for (std::size_t i = 0; i < pts.size(); ++i)
    m.row(static_cast<Eigen::Index>(i)) = dict.evaluate_all(pts[i]).transpose();
  return m;
}

Eigen::MatrixXcd dictionary_gram(const Dictionary& dict, const Quadrature& q, bool* exact_out) {
  if (exact_out) {
    if (q.measure.domain == Domain::torus)
      *exact_out = q.measure == dict.measure && q.exactness_degree >= 2 * dict.max_degree;
    else
      // weighted interval systems are not polynomial; only the plain
      // polynomial system has a meaningful quadrature exactness statement
      *exact_out = q.measure == dict.measure && dict.kind != "gegenbauer-weighted" &&
                   q.exactness_degree >= 2 * dict.max_degree;
  }
  const Eigen::MatrixXcd psi = design_matrix(dict, q.nodes);
  return psi.adjoint() * q.weights.asDiagonal() * psi;
}

Quadrature default_quadrature_for(const Dictionary& dict) {
  if (dict.measure.domain == Domain::torus) return build_quadrature(dict.measure, 2 * dict.max_degree + 1);
  return build_quadrature(dict.measure, dict.max_degree + 1);
}

EvalGrid evaluation_grid(const Dictionary& dict, int oversample) {
  if (oversample < 1) throw param_error("evaluation_grid: oversample must be >= 1");
  const std::size_t target = static_cast<std::size_t>(oversample) * std::max(dict.size, 2);
  EvalGrid g;
  if (dict.measure.domain == Domain::torus) {
    const int d = dict.measure.dim;
    auto per = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(target), 1.0 / d)));
    per = std::max<std::size_t>(per, 2);
    g.kind = "torus-equispaced";
    std::vector<std::size_t> idx(d, 0);
    Point x(d, 0.0);
    const double h = two_pi / static_cast<double>(per);
    while (true) {
      for (int j = 0; j < d; ++j) x[j] = h * static_cast<double>(idx[j]);
      g.points.push_back(x);
      int j = d - 1;
      while (j >= 0 && ++idx[j] == per) idx[j--] = 0;
      if (j < 0) break;
    }
  } else {
    g.kind = "chebyshev-extrema";
    const std::size_t G = std::max<std::size_t>(target, 3);
    for (std::size_t i = 0; i < G; ++i)
      g.points.push_back({std::cos(pi * static_cast<double>(i) / static_cast<double>(G - 1))});
    std::reverse(g.points.begin(), g.points.end());
  }
  return g;
}

Eigen::MatrixXcd exact_gram(const Dictionary& dict, const Quadrature& q) {
  if (dict.known_gram) return *dict.known_gram;
  if (dict.orthonormal) return Eigen::MatrixXcd::Identity(dict.size, dict.size);
  return dictionary_gram(dict, q);
}

}  // namespace srlab
