#pragma once

#include "avglqr/core.hpp"

// Classical finite-horizon LQR: Riccati solution by two independent routes,
// value evaluation, feedback synthesis, closed-loop simulation and open-loop
// cost evaluation.

namespace avglqr {

/// Finite-horizon LQR data: dynamics xdot = A x + B u on [0, T] with running
/// cost (1/2)(x'Qx + u'Ru) and terminal cost (1/2) x(T)'Qf x(T).
struct LqrProblem {
  Mat A;    // n x n
  Mat B;    // n x m
  Mat Q;    // n x n, symmetric PSD
  Mat R;    // m x m, symmetric PD
  Mat Q_f;  // n x n, symmetric PSD
  double T = 1.0;

  std::size_t state_dim() const { return A.rows(); }
  std::size_t control_dim() const { return B.cols(); }

  /// Smallest eigenvalue of R; positive for a valid problem.
  double r_min() const;

  /// Throws Error with a description when any invariant fails.
  void validate() const;
};

enum class RiccatiRoute { Direct, Hamiltonian };

/// Time-indexed symmetric matrix path P(t) on [s, T]; P(T) = Q_f exactly.
struct RiccatiSolution {
  TimeGrid grid;
  MatrixPath P;
  RiccatiRoute provenance = RiccatiRoute::Direct;
};

struct Trajectory {
  TimeGrid grid;
  VectorPath x;
  VectorPath u;
};

// The Riccati equation is solved exactly as the classical matrix ODE
//   -Pdot = A'P + PA - P B R^-1 B' P + Q,  P(T) = Q_f,
// whose P gives the feedback u = -R^-1 B' P x. With the running cost carrying
// the factor 1/2, the minimal cost is (1/2) x0' P(s) x0; kValueHalf is that
// factor, pinned once against the discrete-time QP oracle in the tests.
inline constexpr double kValueHalf = 0.5;

/// Backward RK4 on the matrix Riccati ODE; every node symmetrized.
RiccatiSolution riccati_solve_direct(const LqrProblem& prob, double s,
                                     std::size_t steps);

/// Integrates the linear Hamiltonian system for (X, Y) backward from
/// (I, Q_f) and recovers P(t) = Y(t) X(t)^-1 at every node. Throws
/// SingularityError when X(t) has estimated condition worse than 1e12.
RiccatiSolution riccati_solve_hamiltonian(const LqrProblem& prob, double s,
                                          std::size_t steps);

/// Minimal cost-to-go from grid node s_index: kValueHalf * x0' P x0.
double value(const RiccatiSolution& sol, std::size_t s_index, const Vec& x0);

/// -R^-1 B' P(s) x.
Vec feedback_control(const LqrProblem& prob, const RiccatiSolution& sol,
                     std::size_t s_index, const Vec& x);

/// Forward RK4 of the closed loop xdot = (A - B R^-1 B' P(t)) x from x0 at
/// time s; P is interpolated linearly at RK4 interior stages. Records
/// u(t) = -R^-1 B' P(t) x(t) at every node.
Trajectory simulate_closed_loop(const LqrProblem& prob,
                                const RiccatiSolution& sol, double s,
                                const Vec& x0);

/// Composite Simpson quadrature of (1/2)(x'Qx + u'Ru) plus the terminal cost;
/// an odd step count falls back to trapezoid on the last interval.
double cost_open_loop(const LqrProblem& prob, const Trajectory& traj);

}  // namespace avglqr
