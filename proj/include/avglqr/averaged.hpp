#pragma once

#include <optional>

#include "avglqr/lqr.hpp"

// Problem B: finite-support measures over state matrices, the augmented
// block LQR, averaged cost, costate fields, stationarity verification and
// the explicit bound constants.

namespace avglqr {

/// Finite-support probability measure pi = sum_i alpha_i delta_{A_i} on
/// n x n matrices.
class DiscreteMatrixMeasure {
 public:
  DiscreteMatrixMeasure(std::vector<Mat> supports, std::vector<double> weights);

  static DiscreteMatrixMeasure dirac(Mat a);

  std::size_t size() const { return supports_.size(); }
  std::size_t dim() const { return supports_[0].rows(); }
  const std::vector<Mat>& supports() const { return supports_; }
  const std::vector<double>& weights() const { return weights_; }

  /// max_i ||A_i||_2, cached at construction.
  double support_norm_bound() const { return c_a_; }

 private:
  std::vector<Mat> supports_;
  std::vector<double> weights_;
  double c_a_;
};

struct AveragedLqrProblem {
  DiscreteMatrixMeasure measure;
  Mat B;
  Mat Q;
  Mat R;
  Mat Q_f;
  double T = 1.0;

  std::size_t state_dim() const { return measure.dim(); }
  std::size_t control_dim() const { return B.cols(); }

  void validate() const;

  /// Problem A with the given state matrix and this problem's cost data.
  LqrProblem base_problem(const Mat& a) const;
};

/// The nM-dimensional block system equivalent to Problem B.
struct AugmentedLqr {
  LqrProblem problem;  // built from the block matrices below
  std::size_t n = 0;   // base state dimension
  std::size_t M = 0;   // support count

  /// X0 = (x0, ..., x0), the replicated initial state.
  Vec replicate(const Vec& x0) const;
};

AugmentedLqr assemble_augmented(const AveragedLqrProblem& prob);

struct ProblemBSolution {
  /// nM-dimensional P~; absent for the forward-backward sweep route.
  std::optional<RiccatiSolution> riccati;
  VectorPath u;                          // shared open-loop optimal control
  std::vector<VectorPath> trajectories;  // per-support x_{A_i}
  std::vector<VectorPath> costates;      // per-support p_{A_i}, Eq-30 signs
  double value = 0.0;                    // kValueHalf * X0' P~(s) X0
};

/// Solves Problem B through the augmented Riccati route: assembles the block
/// system, solves its Riccati equation, simulates the closed loop from the
/// replicated initial state, splits per-support trajectories and attaches
/// costates.
ProblemBSolution solve_problem_b(const AveragedLqrProblem& prob, double s,
                                 const Vec& x0, std::size_t steps);

/// Expected Bolza cost of an arbitrary control: per support, integrates the
/// dynamics forward (u interpolated linearly between nodes) and Simpson-sums
/// the running cost; returns the weight-averaged total.
double averaged_cost(const AveragedLqrProblem& prob, const VectorPath& u,
                     double s, const Vec& x0);

/// Backward costate sweep per support:
///   -pdot = A' p - Q x,   p(T) = -Q_f x(T),
/// with the trajectory interpolated linearly at RK4 interior stages. The sign
/// convention matches the Pontryagin form used throughout; it relates to the
/// feedback convention through p(t) = -P(t) x(t) along the optimum.
std::vector<VectorPath> costate_solve(
    const AveragedLqrProblem& prob,
    const std::vector<VectorPath>& trajectories);

/// Stationarity defect: sup over nodes of
///   | u(t) - R^-1 B' sum_i alpha_i p_{A_i}(t) |.
double pmp_residual(const AveragedLqrProblem& prob,
                    const ProblemBSolution& sol);

/// Explicit a-priori constants from the existence and Lipschitz estimates.
struct BoundConstants {
  double C_A = 0.0;    // max_i ||A_i||_2
  double r1 = 0.0;     // min eigenvalue of R
  double C_u = 0.0;    // L2 bound on the optimal control
  double C_x = 0.0;    // sup bound on optimal trajectories
  double C_p = 0.0;    // sup bound on costates
  double C_K = 0.0;    // value-function Lipschitz constant on |x0| <= radius
};

BoundConstants bound_constants(const AveragedLqrProblem& prob, const Vec& x0,
                               double k_radius);

struct SweepOptions {
  std::size_t max_iterations = 500;
  double tolerance = 1e-8;   // successive-u sup distance
  double relaxation = 0.5;
};

/// Direct forward-backward sweep: iterate forward trajectories with the
/// current control, backward costates, and the stationarity update
/// u <- u + relaxation * (R^-1 B' E_pi[p] - u). Cross-checks the Riccati
/// route on small instances; throws NonConvergenceError when the iteration
/// does not settle.
ProblemBSolution solve_problem_b_sweep(const AveragedLqrProblem& prob,
                                       double s, const Vec& x0,
                                       std::size_t steps,
                                       const SweepOptions& opts = {});

}  // namespace avglqr
