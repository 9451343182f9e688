#include "avglqr/lqr.hpp"

#include <cmath>
#include <string>

namespace avglqr {

namespace {

Vec flatten(const Mat& m) { return m.entries(); }

Mat unflatten(const Vec& v, std::size_t rows, std::size_t cols) {
  return Mat(rows, cols, v);
}

Mat symmetrized(const Mat& m) { return (m + m.transposed()) * 0.5; }

Mat inverse(const Mat& m) {
  return linear_solve(m, Mat::identity(m.rows())).x;
}

}  // namespace

double LqrProblem::r_min() const { return symmetric_eigenvalues(R).front(); }

void LqrProblem::validate() const {
  const std::size_t n = state_dim();
  if (!A.square()) throw ShapeError("A must be square");
  if (B.rows() != n) throw ShapeError("B row count must match A");
  auto check_sym_psd = [n](const Mat& m, const char* name) {
    if (!m.square() || m.rows() != n)
      throw ShapeError(std::string(name) + " must be n x n");
    const double scale = spectral_norm(m);
    if (spectral_norm(m - m.transposed()) > 1e-12 * std::max(scale, 1.0))
      throw Error(std::string(name) + " must be symmetric");
    if (symmetric_eigenvalues(m).front() < -1e-10)
      throw Error(std::string(name) + " must be positive semidefinite");
  };
  check_sym_psd(Q, "Q");
  check_sym_psd(Q_f, "Q_f");
  if (!R.square() || R.rows() != control_dim())
    throw ShapeError("R must be m x m");
  if (spectral_norm(R - R.transposed()) >
      1e-12 * std::max(spectral_norm(R), 1.0))
    throw Error("R must be symmetric");
  if (r_min() <= 0.0) throw Error("R must be positive definite");
  if (!(T > 0.0)) throw Error("T must be positive");
  if (!A.all_finite() || !B.all_finite() || !Q.all_finite() ||
      !R.all_finite() || !Q_f.all_finite())
    throw Error("problem data must be finite");
}

RiccatiSolution riccati_solve_direct(const LqrProblem& prob, double s,
                                     std::size_t steps) {
  const std::size_t n = prob.state_dim();
  const Mat br_inv_bt = prob.B * inverse(prob.R) * prob.B.transposed();
  const Mat at = prob.A.transposed();

  auto rhs = [&](double /*t*/, const Vec& pflat) {
    const Mat p = unflatten(pflat, n, n);
    const Mat dp = (at * p + p * prob.A - p * br_inv_bt * p + prob.Q) * -1.0;
    return flatten(dp);
  };

  const TimeGrid grid(s, prob.T, steps);
  VectorPath raw =
      integrate_ode(rhs, flatten(prob.Q_f), grid, Direction::Backward);

  MatrixPath path{grid, {}};
  path.values.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k)
    path.values.push_back(symmetrized(unflatten(raw.values[k], n, n)));
  path.values[steps] = prob.Q_f;  // terminal node copied, not integrated
  return {grid, std::move(path), RiccatiRoute::Direct};
}

RiccatiSolution riccati_solve_hamiltonian(const LqrProblem& prob, double s,
                                          std::size_t steps) {
  const std::size_t n = prob.state_dim();
  const Mat br_inv_bt = prob.B * inverse(prob.R) * prob.B.transposed();

  // H = [ A, -B R^-1 B'; -Q, -A' ] acting on the stacked columns (X; Y).
  Mat h(2 * n, 2 * n);
  h.set_block(0, 0, prob.A);
  h.set_block(0, n, br_inv_bt * -1.0);
  h.set_block(n, 0, prob.Q * -1.0);
  h.set_block(n, n, prob.A.transposed() * -1.0);

  auto rhs = [&](double /*t*/, const Vec& zflat) {
    const Mat z = unflatten(zflat, 2 * n, n);
    return flatten(h * z);
  };

  Mat terminal(2 * n, n);
  terminal.set_block(0, 0, Mat::identity(n));
  terminal.set_block(n, 0, prob.Q_f);

  const TimeGrid grid(s, prob.T, steps);
  VectorPath raw =
      integrate_ode(rhs, flatten(terminal), grid, Direction::Backward);

  MatrixPath path{grid, {}};
  path.values.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const Mat z = unflatten(raw.values[k], 2 * n, n);
    const Mat x = z.block(0, 0, n, n);
    const Mat y = z.block(n, 0, n, n);
    LinearSolveResult sol = linear_solve(x.transposed(), y.transposed());
    if (sol.rcond < 1e-12)
      throw SingularityError(
          "riccati_solve_hamiltonian: X(t) near-singular at node " +
              std::to_string(k),
          sol.rcond, k);
    path.values.push_back(symmetrized(sol.x));  // P = Y X^-1 = (X^-T Y^T)^T
  }
  path.values[steps] = prob.Q_f;
  return {grid, std::move(path), RiccatiRoute::Hamiltonian};
}

double value(const RiccatiSolution& sol, std::size_t s_index, const Vec& x0) {
  if (s_index >= sol.P.values.size()) throw Error("value: node out of range");
  return kValueHalf * quadratic_form(sol.P.values[s_index], x0);
}

Vec feedback_control(const LqrProblem& prob, const RiccatiSolution& sol,
                     std::size_t s_index, const Vec& x) {
  if (s_index >= sol.P.values.size())
    throw Error("feedback_control: node out of range");
  const Vec px = sol.P.values[s_index] * x;
  Vec bpx = prob.B.transposed() * px;
  Vec u = linear_solve(prob.R, Mat(bpx.size(), 1, bpx)).x.entries();
  for (double& e : u) e = -e;
  return u;
}

Trajectory simulate_closed_loop(const LqrProblem& prob,
                                const RiccatiSolution& sol, double s,
                                const Vec& x0) {
  if (sol.grid.t_start != s || sol.grid.t_end != prob.T)
    throw Error("simulate_closed_loop: solution grid does not span [s, T]");
  if (x0.size() != prob.state_dim())
    throw ShapeError("simulate_closed_loop: x0 dimension mismatch");

  const Mat r_inv_bt = inverse(prob.R) * prob.B.transposed();
  auto rhs = [&](double t, const Vec& x) {
    const Mat p = sol.P.at_time(t);
    Vec u = r_inv_bt * (p * x);
    for (double& e : u) e = -e;
    Vec dx = prob.A * x;
    const Vec bu = prob.B * u;
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += bu[i];
    return dx;
  };

  VectorPath x = integrate_ode(rhs, x0, sol.grid, Direction::Forward);
  VectorPath u{sol.grid, {}};
  u.values.reserve(sol.grid.node_count());
  for (std::size_t k = 0; k < sol.grid.node_count(); ++k) {
    Vec uk = r_inv_bt * (sol.P.values[k] * x.values[k]);
    for (double& e : uk) e = -e;
    u.values.push_back(std::move(uk));
  }
  return {sol.grid, std::move(x), std::move(u)};
}

double cost_open_loop(const LqrProblem& prob, const Trajectory& traj) {
  const std::size_t steps = traj.grid.steps;
  const double h = traj.grid.step();
  auto integrand = [&](std::size_t k) {
    return 0.5 * (quadratic_form(prob.Q, traj.x.values[k]) +
                  quadratic_form(prob.R, traj.u.values[k]));
  };

  double integral = 0.0;
  const std::size_t simpson_end = steps % 2 == 0 ? steps : steps - 1;
  for (std::size_t k = 0; k + 2 <= simpson_end; k += 2)
    integral +=
        h / 3.0 * (integrand(k) + 4.0 * integrand(k + 1) + integrand(k + 2));
  if (steps % 2 != 0)
    integral += h / 2.0 * (integrand(steps - 1) + integrand(steps));

  return integral + 0.5 * quadratic_form(prob.Q_f, traj.x.values[steps]);
}

}  // namespace avglqr
