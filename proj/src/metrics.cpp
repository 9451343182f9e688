#include "avglqr/metrics.hpp"

#include <cmath>

namespace avglqr {

double w1_to_dirac(const DiscreteMatrixMeasure& measure, const Mat& a_hat) {
  if (a_hat.rows() != measure.dim() || a_hat.cols() != measure.dim())
    throw ShapeError("w1_to_dirac: dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i)
    total +=
        measure.weights()[i] * matrix_distance(measure.supports()[i], a_hat);
  return total;
}

ValueErrorResult sup_norm_value_error(const RiccatiSolution& p_aug,
                                      std::size_t support_count,
                                      const RiccatiSolution& p_base,
                                      const Box& k_box,
                                      std::size_t space_grid_per_axis) {
  if (!(p_aug.grid == p_base.grid))
    throw Error("sup_norm_value_error: grid mismatch");
  const std::size_t n = p_base.P.values[0].rows();
  if (p_aug.P.values[0].rows() != n * support_count)
    throw ShapeError("sup_norm_value_error: augmented dimension mismatch");
  if (k_box.lo.size() != n || k_box.hi.size() != n)
    throw ShapeError("sup_norm_value_error: box dimension mismatch");
  if (space_grid_per_axis < 2)
    throw Error("sup_norm_value_error: need at least 2 lattice points");

  // Lattice on the box, row-major over axes.
  std::size_t lattice_size = 1;
  for (std::size_t a = 0; a < n; ++a) lattice_size *= space_grid_per_axis;
  std::vector<Vec> points(lattice_size, Vec(n));
  for (std::size_t idx = 0; idx < lattice_size; ++idx) {
    std::size_t rem = idx;
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t j = rem % space_grid_per_axis;
      rem /= space_grid_per_axis;
      points[idx][a] = k_box.lo[a] + (k_box.hi[a] - k_box.lo[a]) * double(j) /
                                         double(space_grid_per_axis - 1);
    }
  }

  ValueErrorResult res;
  for (std::size_t k = 0; k < p_base.grid.node_count(); ++k) {
    // At X0 = (x0, ..., x0) the augmented form collapses to x0' D x0 with
    // D the sum of all n x n blocks of P~ minus the base P.
    Mat d(n, n);
    const Mat& pa = p_aug.P.values[k];
    for (std::size_t bi = 0; bi < support_count; ++bi)
      for (std::size_t bj = 0; bj < support_count; ++bj)
        d = d + pa.block(bi * n, bj * n, n, n);
    d = d - p_base.P.values[k];

    double slice = 0.0;
    for (const Vec& x : points)
      slice = std::max(slice, std::abs(quadratic_form(d, x)));
    if (k == 0) res.at_start = slice;
    res.max_over_time = std::max(res.max_over_time, slice);
  }
  return res;
}

double sup_norm_control_error(const VectorPath& u_n, const VectorPath& u_a) {
  if (!(u_n.grid == u_a.grid))
    throw Error("sup_norm_control_error: grid mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < u_n.grid.node_count(); ++k) {
    Vec diff = u_n.values[k];
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] -= u_a.values[k][j];
    worst = std::max(worst, euclidean_norm(diff));
  }
  return worst;
}

std::vector<double> convergence_order(const std::vector<double>& errors) {
  std::vector<double> orders;
  orders.reserve(errors.size() > 0 ? errors.size() - 1 : 0);
  for (std::size_t k = 1; k < errors.size(); ++k) {
    if (!(errors[k - 1] > 0.0) || !(errors[k] > 0.0))
      throw Error("convergence_order: errors must be positive");
    orders.push_back(std::log2(errors[k - 1] / errors[k]));
  }
  return orders;
}

double riccati_block_deviation(const RiccatiSolution& p_aug,
                               const RiccatiSolution& p_base) {
  if (!(p_aug.grid == p_base.grid))
    throw Error("riccati_block_deviation: grid mismatch");
  const std::size_t n = p_base.P.values[0].rows();
  const std::size_t nm = p_aug.P.values[0].rows();
  if (nm % n != 0)
    throw ShapeError("riccati_block_deviation: dimensions incompatible");

  double worst = 0.0;
  for (std::size_t k = 0; k < p_aug.grid.node_count(); ++k) {
    Mat diff = p_aug.P.values[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        diff(i, j) -= p_base.P.values[k](i, j);
    worst = std::max(worst, matrix_2norm(diff));
  }
  return worst;
}

}  // namespace avglqr
