#pragma once

#include <functional>
#include <optional>

#include "srlab/dictionary.hpp"

namespace srlab {

// Values of one function on the discretizations an operation needs. Ops never
// integrate symbolically; they consume these tables.
struct FunctionData {
  Eigen::VectorXcd on_quadrature;
  std::optional<Eigen::VectorXcd> at_points;
  std::optional<Eigen::VectorXcd> on_grid;
};

inline Eigen::VectorXcd tabulate_fn(const std::function<cplx(const Point&)>& f,
                                    const std::vector<Point>& pts) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) v(static_cast<Eigen::Index>(i)) = f(pts[i]);
  return v;
}

inline FunctionData tabulate(const std::function<cplx(const Point&)>& f, const Quadrature& q,
                             const PointSet* xi = nullptr, const EvalGrid* grid = nullptr) {
  FunctionData d;
  d.on_quadrature = tabulate_fn(f, q.nodes);
  if (xi) d.at_points = tabulate_fn(f, xi->points);
  if (grid) d.on_grid = tabulate_fn(f, grid->points);
  return d;
}

// span member given by dictionary coefficients
inline FunctionData tabulate_span(const Dictionary& dict, const Eigen::VectorXcd& coeffs,
                                  const Quadrature& q, const PointSet* xi = nullptr,
                                  const EvalGrid* grid = nullptr) {
  if (coeffs.size() != dict.size) throw param_error("tabulate_span: coefficient count mismatch");
  FunctionData d;
  d.on_quadrature = design_matrix(dict, q.nodes) * coeffs;
  if (xi) d.at_points = design_matrix(dict, xi->points) * coeffs;
  if (grid) d.on_grid = design_matrix(dict, grid->points) * coeffs;
  return d;
}

}  // namespace srlab
