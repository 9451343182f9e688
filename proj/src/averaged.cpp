#include "avglqr/averaged.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace avglqr {

namespace {

Mat inverse(const Mat& m) {
  return linear_solve(m, Mat::identity(m.rows())).x;
}

}  // namespace

DiscreteMatrixMeasure::DiscreteMatrixMeasure(std::vector<Mat> supports,
                                             std::vector<double> weights)
    : supports_(std::move(supports)), weights_(std::move(weights)), c_a_(0.0) {
  if (supports_.empty()) throw Error("measure needs at least one support");
  if (supports_.size() != weights_.size())
    throw Error("measure: support/weight count mismatch");
  const std::size_t n = supports_[0].rows();
  for (const Mat& a : supports_) {
    if (!a.square() || a.rows() != n)
      throw ShapeError("measure supports must be square with equal dimension");
    c_a_ = std::max(c_a_, matrix_2norm(a));
  }
  double total = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw Error("measure weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error("measure weights must sum to 1, got " + std::to_string(total));
}

DiscreteMatrixMeasure DiscreteMatrixMeasure::dirac(Mat a) {
  return DiscreteMatrixMeasure({std::move(a)}, {1.0});
}

void AveragedLqrProblem::validate() const {
  base_problem(measure.supports()[0]).validate();
  if (B.rows() != measure.dim())
    throw ShapeError("B row count must match measure dimension");
}

LqrProblem AveragedLqrProblem::base_problem(const Mat& a) const {
  return {a, B, Q, R, Q_f, T};
}

Vec AugmentedLqr::replicate(const Vec& x0) const {
  if (x0.size() != n) throw ShapeError("replicate: x0 dimension mismatch");
  Vec out(n * M);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = x0[j];
  return out;
}

AugmentedLqr assemble_augmented(const AveragedLqrProblem& prob) {
  prob.validate();
  const std::size_t n = prob.state_dim();
  const std::size_t m = prob.control_dim();
  const std::size_t M = prob.measure.size();

  Mat a_blk(n * M, n * M);
  Mat b_blk(n * M, m);
  Mat q_blk(n * M, n * M);
  Mat qf_blk(n * M, n * M);
  for (std::size_t i = 0; i < M; ++i) {
    const double alpha = prob.measure.weights()[i];
    a_blk.set_block(i * n, i * n, prob.measure.supports()[i]);
    b_blk.set_block(i * n, 0, prob.B);
    q_blk.set_block(i * n, i * n, prob.Q * alpha);
    qf_blk.set_block(i * n, i * n, prob.Q_f * alpha);
  }
  return {{std::move(a_blk), std::move(b_blk), std::move(q_blk), prob.R,
           std::move(qf_blk), prob.T},
          n, M};
}

std::vector<VectorPath> costate_solve(
    const AveragedLqrProblem& prob,
    const std::vector<VectorPath>& trajectories) {
  if (trajectories.size() != prob.measure.size())
    throw Error("costate_solve: expected one trajectory per support");
  const TimeGrid& grid = trajectories[0].grid;
  for (const VectorPath& x : trajectories)
    if (!(x.grid == grid)) throw Error("costate_solve: grid mismatch");

  std::vector<VectorPath> costates;
  costates.reserve(trajectories.size());
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const Mat at = prob.measure.supports()[i].transposed();
    const VectorPath& x = trajectories[i];
    auto rhs = [&](double t, const Vec& p) {
      // -pdot = A'p - Q x  =>  pdot = -(A'p) + Q x
      Vec dp = at * p;
      const Vec qx = prob.Q * x.at_time(t);
      for (std::size_t j = 0; j < dp.size(); ++j) dp[j] = -dp[j] + qx[j];
      return dp;
    };
    Vec p_terminal = prob.Q_f * x.values.back();
    for (double& e : p_terminal) e = -e;  // -p(T) = Q_f x(T)
    costates.push_back(
        integrate_ode(rhs, p_terminal, grid, Direction::Backward));
  }
  return costates;
}

ProblemBSolution solve_problem_b(const AveragedLqrProblem& prob, double s,
                                 const Vec& x0, std::size_t steps) {
  const AugmentedLqr aug = assemble_augmented(prob);
  const std::size_t n = aug.n;
  const std::size_t M = aug.M;

  RiccatiSolution riccati = riccati_solve_direct(aug.problem, s, steps);
  const Vec big_x0 = aug.replicate(x0);
  Trajectory closed = simulate_closed_loop(aug.problem, riccati, s, big_x0);

  std::vector<VectorPath> trajectories(M);
  for (std::size_t i = 0; i < M; ++i) {
    trajectories[i].grid = closed.grid;
    trajectories[i].values.reserve(closed.grid.node_count());
    for (const Vec& state : closed.x.values)
      trajectories[i].values.emplace_back(state.begin() + i * n,
                                          state.begin() + (i + 1) * n);
  }

  ProblemBSolution sol;
  sol.value = value(riccati, 0, big_x0);
  sol.riccati = std::move(riccati);
  sol.u = std::move(closed.u);
  sol.costates = costate_solve(prob, trajectories);
  sol.trajectories = std::move(trajectories);
  return sol;
}

double averaged_cost(const AveragedLqrProblem& prob, const VectorPath& u,
                     double s, const Vec& x0) {
  if (x0.size() != prob.state_dim())
    throw ShapeError("averaged_cost: x0 dimension mismatch");
  if (u.grid.t_start != s || u.grid.t_end != prob.T)
    throw Error("averaged_cost: control grid does not span [s, T]");

  double total = 0.0;
  for (std::size_t i = 0; i < prob.measure.size(); ++i) {
    const Mat& a = prob.measure.supports()[i];
    auto rhs = [&](double t, const Vec& x) {
      Vec dx = a * x;
      const Vec bu = prob.B * u.at_time(t);
      for (std::size_t j = 0; j < dx.size(); ++j) dx[j] += bu[j];
      return dx;
    };
    Trajectory traj{u.grid, integrate_ode(rhs, x0, u.grid, Direction::Forward),
                    u};
    total += prob.measure.weights()[i] *
             cost_open_loop(prob.base_problem(a), traj);
  }
  return total;
}

double pmp_residual(const AveragedLqrProblem& prob,
                    const ProblemBSolution& sol) {
  if (sol.costates.size() != prob.measure.size())
    throw Error("pmp_residual: incomplete solution");
  const Mat r_inv_bt = inverse(prob.R) * prob.B.transposed();
  const std::size_t nodes = sol.u.grid.node_count();

  double worst = 0.0;
  for (std::size_t k = 0; k < nodes; ++k) {
    Vec p_mean(prob.state_dim(), 0.0);
    for (std::size_t i = 0; i < prob.measure.size(); ++i) {
      const double alpha = prob.measure.weights()[i];
      const Vec& p = sol.costates[i].values[k];
      for (std::size_t j = 0; j < p_mean.size(); ++j)
        p_mean[j] += alpha * p[j];
    }
    const Vec u_pmp = r_inv_bt * p_mean;  // u = +R^-1 B' E_pi[p]
    Vec defect = sol.u.values[k];
    for (std::size_t j = 0; j < defect.size(); ++j) defect[j] -= u_pmp[j];
    worst = std::max(worst, euclidean_norm(defect));
  }
  return worst;
}

BoundConstants bound_constants(const AveragedLqrProblem& prob, const Vec& x0,
                               double k_radius) {
  BoundConstants c;
  c.C_A = prob.measure.support_norm_bound();
  c.r1 = symmetric_eigenvalues(prob.R).front();
  const double norm_q = matrix_2norm(prob.Q);
  const double norm_qf = matrix_2norm(prob.Q_f);
  const double norm_b = spectral_norm(prob.B);
  const double T = prob.T;
  const double x0_norm = euclidean_norm(x0);

  auto c_u_at = [&](double r) {
    return std::sqrt((T * norm_q + norm_qf) * r * r *
                     std::exp(2.0 * c.C_A * T) / c.r1);
  };
  auto c_x_at = [&](double r) {
    return (r + std::sqrt(T) * norm_b * c_u_at(r)) * std::exp(c.C_A * T);
  };

  c.C_u = c_u_at(x0_norm);
  c.C_x = c_x_at(x0_norm);
  c.C_p = (norm_qf + T * norm_q) * c.C_x * std::exp(c.C_A * T);

  // C_K = sup over |x0| <= k_radius of (T L_l + L_h) C_x T e^{C_A T}; the
  // expression is increasing in |x0|, so the sup sits on the radius.
  const double c_x_worst = c_x_at(k_radius);
  c.C_K = (T * norm_q + norm_qf) * c_x_worst * c_x_worst * T *
          std::exp(c.C_A * T);
  return c;
}

ProblemBSolution solve_problem_b_sweep(const AveragedLqrProblem& prob,
                                       double s, const Vec& x0,
                                       std::size_t steps,
                                       const SweepOptions& opts) {
  prob.validate();
  const TimeGrid grid(s, prob.T, steps);
  const std::size_t m = prob.control_dim();
  const std::size_t M = prob.measure.size();
  const Mat r_inv_bt = inverse(prob.R) * prob.B.transposed();

  VectorPath u{grid, std::vector<Vec>(grid.node_count(), Vec(m, 0.0))};
  std::vector<VectorPath> trajectories(M);
  std::vector<VectorPath> costates;

  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    for (std::size_t i = 0; i < M; ++i) {
      const Mat& a = prob.measure.supports()[i];
      auto rhs = [&](double t, const Vec& x) {
        Vec dx = a * x;
        const Vec bu = prob.B * u.at_time(t);
        for (std::size_t j = 0; j < dx.size(); ++j) dx[j] += bu[j];
        return dx;
      };
      trajectories[i] = integrate_ode(rhs, x0, grid, Direction::Forward);
    }
    costates = costate_solve(prob, trajectories);

    delta = 0.0;
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
      Vec p_mean(prob.state_dim(), 0.0);
      for (std::size_t i = 0; i < M; ++i) {
        const double alpha = prob.measure.weights()[i];
        for (std::size_t j = 0; j < p_mean.size(); ++j)
          p_mean[j] += alpha * costates[i].values[k][j];
      }
      const Vec u_new = r_inv_bt * p_mean;
      Vec& uk = u.values[k];
      double diff = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        diff = std::max(diff, std::abs(u_new[j] - uk[j]));
        uk[j] += opts.relaxation * (u_new[j] - uk[j]);
      }
      delta = std::max(delta, diff);
    }
    if (delta <= opts.tolerance) {
      ProblemBSolution sol;
      sol.u = std::move(u);
      sol.trajectories = std::move(trajectories);
      sol.costates = std::move(costates);
      sol.value = averaged_cost(prob, sol.u, s, x0);
      return sol;
    }
  }
  throw NonConvergenceError(
      "solve_problem_b_sweep: no convergence after " +
      std::to_string(opts.max_iterations) +
      " iterations (last delta = " + std::to_string(delta) + ")");
}

}  // namespace avglqr
