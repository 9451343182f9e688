#pragma once

#include <optional>

#include "avglqr/averaged.hpp"

// Distances and convergence diagnostics: Wasserstein-1 against a Dirac,
// sup-norm value/control errors, empirical convergence orders and the
// block-limit deviation of the augmented Riccati solution.

namespace avglqr {

/// One row of the convergence report.
struct ConvergenceRow {
  std::size_t N = 0;
  double alpha1 = 0.0;
  double value_error = 0.0;
  std::optional<double> value_order;
  double control_error = 0.0;
  std::optional<double> control_order;
  double w1 = 0.0;
};

/// W1(pi, delta_Ahat) = sum_i alpha_i d2(A_i, Ahat). Against a Dirac the
/// transport plan is forced, so the closed form is exact.
double w1_to_dirac(const DiscreteMatrixMeasure& measure, const Mat& a_hat);

/// Axis-aligned evaluation box for the spatial supremum.
struct Box {
  Vec lo;
  Vec hi;
};

struct ValueErrorResult {
  double max_over_time = 0.0;  // sup over all time nodes x lattice points
  double at_start = 0.0;       // the s = t_start slice alone
};

/// Sup over the time grid and a uniform lattice on the box of
/// | X0' P~(t) X0 - x0' P(t) x0 | with X0 = (x0, ..., x0). Raw quadratic
/// forms, no 1/2 factor: this is the convention the convergence table uses.
/// Evaluation only; both Riccati paths must already be solved on one grid.
ValueErrorResult sup_norm_value_error(const RiccatiSolution& p_aug,
                                      std::size_t support_count,
                                      const RiccatiSolution& p_base,
                                      const Box& k_box,
                                      std::size_t space_grid_per_axis);

/// max over nodes of |u_n(t) - u_a(t)| (Euclidean norm per node).
double sup_norm_control_error(const VectorPath& u_n, const VectorPath& u_a);

/// order_k = log2(error_{k-1} / error_k); one entry per consecutive pair.
std::vector<double> convergence_order(const std::vector<double>& errors);

/// sup over nodes of ||P~(t) - Pbar(t)||_2 where Pbar embeds the base P(t)
/// in the leading n x n block and is zero elsewhere.
double riccati_block_deviation(const RiccatiSolution& p_aug,
                               const RiccatiSolution& p_base);

}  // namespace avglqr
