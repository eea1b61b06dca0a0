#include "srlab/function_classes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace srlab {

namespace {

double wab_level_cap(const ClassSpec& spec, int level) {
  const double jbar = std::max(level, 1);
  return std::pow(2.0, -spec.a * level) * std::pow(jbar, (spec.d - 1) * spec.b);
}

// level -> dictionary indices, every index assigned
std::map<int, std::vector<int>> level_blocks(const Dictionary& dict) {
  if (!dict.freq) throw param_error("level_blocks: dictionary carries no frequency set");
  std::map<int, std::vector<int>> blocks;
  for (int j = 0; j < dict.size; ++j)
    blocks[dyadic_level(dict.freq->indices[static_cast<std::size_t>(j)])].push_back(j);
  return blocks;
}

std::vector<int> draw_distinct(int count, int n, Rng& rng) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  // partial Fisher-Yates, stable under the stream contract of Rng
  for (int i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(i) +
                   static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

}  // namespace

void validate_spec(const ClassSpec& spec) {
  switch (spec.kind) {
    case ClassSpec::Kind::a1r:
      if (spec.r < 0.0) throw param_error("ClassSpec: a1r needs r >= 0");
      if (spec.support < 1) throw param_error("ClassSpec: support must be positive");
      return;
    case ClassSpec::Kind::wab:
      if (spec.a <= 0.0) throw param_error("ClassSpec: wab needs a > 0");
      if (spec.d < 1) throw param_error("ClassSpec: wab needs d >= 1");
      return;
    case ClassSpec::Kind::geg_wiener:
      if (spec.theta <= 0.0 || spec.theta > 1.0)
        throw param_error("ClassSpec: geg_wiener needs theta in (0, 1]");
      if (spec.r <= spec.alpha + 0.5)
        throw param_error("ClassSpec: geg_wiener needs r > alpha + 1/2");
      if (spec.support < 1) throw param_error("ClassSpec: support must be positive");
      return;
  }
  throw param_error("ClassSpec: unknown kind");
}

Eigen::VectorXcd sample_class(const ClassSpec& spec, const Dictionary& dict, Rng& rng) {
  validate_spec(spec);
  if (dict.size < 1) throw param_error("sample_class: empty dictionary");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dict.size);

  if (spec.kind == ClassSpec::Kind::wab) {
    for (const auto& [level, block] : level_blocks(dict)) {
      double mass = 0.0;
      for (const int j : block) {
        const double mag = rng.uniform(0.2, 1.0);
        c[j] = mag * rng.unit_phase();
        mass += mag;
      }
      const double cap = wab_level_cap(spec, level);
      for (const int j : block) c[j] *= cap / mass;
    }
    return c;
  }

  const int count = std::min(spec.support, dict.size);
  const auto chosen = draw_distinct(count, dict.size, rng);
  double budget = 0.0;
  for (const int j : chosen) {
    const double mag = rng.uniform(0.2, 1.0);
    c[j] = mag * rng.unit_phase();
    const double weighted = mag * std::pow(j + 1.0, spec.r);
    budget += spec.kind == ClassSpec::Kind::a1r ? weighted : std::pow(weighted, spec.theta);
  }
  const double shrink = spec.kind == ClassSpec::Kind::a1r
                            ? 1.0 / budget
                            : std::pow(budget, -1.0 / spec.theta);
  c *= shrink;
  return c;
}

MembershipResult class_membership_check(const Eigen::VectorXcd& coeffs, const ClassSpec& spec,
                                        const Dictionary& dict) {
  validate_spec(spec);
  if (coeffs.size() != dict.size)
    throw param_error("class_membership_check: coefficient length mismatch");
  MembershipResult out;

  if (spec.kind == ClassSpec::Kind::wab) {
    for (const auto& [level, block] : level_blocks(dict)) {
      double mass = 0.0;
      for (const int j : block) mass += std::abs(coeffs[j]);
      out.budget = std::max(out.budget, mass / wab_level_cap(spec, level));
    }
  } else {
    for (int j = 0; j < dict.size; ++j) {
      const double w = std::abs(coeffs[j]) * std::pow(j + 1.0, spec.r);
      if (w == 0.0) continue;
      out.budget += spec.kind == ClassSpec::Kind::a1r ? w : std::pow(w, spec.theta);
    }
  }
  out.member = out.budget <= 1.0 + 1e-12;
  return out;
}

WitnessBox thm83_witness_class(double alpha, double r, double theta, int m_level,
                               const Dictionary& dict, Rng& rng, int m0,
                               std::uint64_t vertex_cap) {
  const ClassSpec spec{.kind = ClassSpec::Kind::geg_wiener, .r = r, .alpha = alpha,
                       .theta = theta};
  validate_spec(spec);
  if (m_level < 0 || m0 < 0) throw param_error("thm83_witness_class: negative level");
  if (vertex_cap < 1) throw param_error("thm83_witness_class: vertex_cap must be positive");

  WitnessBox box;
  box.m1 = m_level + m0;
  box.block_lo = 1 << box.m1;
  box.block_size = 1 << box.m1;
  if (2 * box.block_lo > dict.size)
    throw size_error("thm83_witness_class: dictionary does not cover the block");
  box.scale = std::pow(2.0, -(box.m1 + 1) * (r + 1.0 / theta));

  const int B = box.block_size;
  box.complete = B < 63 && (std::uint64_t{1} << B) <= vertex_cap;

  const auto vertex = [&](const std::vector<double>& eps) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dict.size);
    for (int i = 0; i < B; ++i) c[box.block_lo + i] = box.scale * eps[static_cast<std::size_t>(i)];
    return c;
  };

  std::vector<double> eps(static_cast<std::size_t>(B), 1.0);
  if (box.complete) {
    const std::uint64_t total = std::uint64_t{1} << B;
    box.members.reserve(total);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      for (int i = 0; i < B; ++i)
        eps[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? -1.0 : 1.0;
      box.members.push_back(vertex(eps));
    }
  } else {
    box.members.reserve(vertex_cap);
    box.members.push_back(vertex(eps));  // all-ones corner always included
    for (std::uint64_t k = 1; k < vertex_cap; ++k) {
      for (auto& e : eps) e = rng.sign();
      box.members.push_back(vertex(eps));
    }
  }

  for (const auto& m : box.members)
    if (!class_membership_check(m, spec, dict).member)
      throw std::logic_error("thm83_witness_class: vertex escaped the class");
  return box;
}

Eigen::VectorXcd sample_decay_profile(const ClassSpec& spec, double delta, const Dictionary& dict,
                                      Rng& rng) {
  if (spec.kind != ClassSpec::Kind::geg_wiener)
    throw param_error("sample_decay_profile: spec must be geg_wiener");
  validate_spec(spec);
  if (delta <= 0.0) throw param_error("sample_decay_profile: delta must be positive");

  Eigen::VectorXcd c(dict.size);
  const double expo = -(spec.r + 1.0 / spec.theta + delta);
  double budget = 0.0;
  for (int j = 0; j < dict.size; ++j) {
    const double mag = rng.uniform(0.5, 1.0) * std::pow(j + 1.0, expo);
    c[j] = mag * rng.unit_phase();
    budget += std::pow(mag * std::pow(j + 1.0, spec.r), spec.theta);
  }
  c *= std::pow(budget, -1.0 / spec.theta);
  return c;
}

}  // namespace srlab
