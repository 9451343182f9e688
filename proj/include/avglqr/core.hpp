#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Dense small-matrix linear algebra, the matrix 2-norm, and a fixed-step
// RK4 integrator. Everything here is sized for n <= ~64; no attempt is made
// to be fast on large matrices.

namespace avglqr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  SingularityError(const std::string& msg, double pivot, std::size_t node = 0)
      : Error(msg), pivot_(pivot), node_(node) {}
  double pivot() const { return pivot_; }
  std::size_t node() const { return node_; }

 private:
  double pivot_;
  std::size_t node_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& msg, std::size_t node)
      : Error(msg), node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

using Vec = std::vector<double>;

/// Dense row-major matrix.
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
  Mat(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Mat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  const std::vector<double>& entries() const { return entries_; }

  Mat transposed() const;
  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Mat& o) const;
  Mat operator*(double c) const;
  Vec operator*(const Vec& v) const;

  /// Writes the block at (row, col); the block must fit.
  void set_block(std::size_t row, std::size_t col, const Mat& block);
  Mat block(std::size_t row, std::size_t col, std::size_t r,
            std::size_t c) const;

  bool all_finite() const;

 private:
  std::size_t rows_, cols_;
  std::vector<double> entries_;
};

/// sup{x'Ay : |x|=|y|=1}, the largest singular value. Square input only.
double matrix_2norm(const Mat& a);

/// d2(A, A') = ||A - A'||_2 for square matrices of equal shape.
double matrix_distance(const Mat& a, const Mat& b);

/// Largest singular value for any shape; used internally for ||B||_2.
double spectral_norm(const Mat& a);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(const Mat& a);

struct LinearSolveResult {
  Mat x;
  double rcond;  // estimated reciprocal condition number of A
};

/// Solves A X = B by partially pivoted elimination. Throws SingularityError
/// when a pivot falls below tolerance (relative to the largest entry of A).
LinearSolveResult linear_solve(const Mat& a, const Mat& b);

/// Uniform grid of `steps` subintervals on [t_start, t_end].
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  std::size_t steps = 1;

  TimeGrid() = default;
  TimeGrid(double t0, double t1, std::size_t n);

  double step() const { return (t_end - t_start) / double(steps); }
  double node(std::size_t k) const { return t_start + double(k) * step(); }
  std::size_t node_count() const { return steps + 1; }

  bool operator==(const TimeGrid& o) const {
    return t_start == o.t_start && t_end == o.t_end && steps == o.steps;
  }
};

/// One vector per grid node; node 0 is t_start.
struct VectorPath {
  TimeGrid grid;
  std::vector<Vec> values;

  std::size_t dim() const { return values.empty() ? 0 : values[0].size(); }

  /// Linear interpolation between the surrounding nodes.
  Vec at_time(double t) const;
};

struct MatrixPath {
  TimeGrid grid;
  std::vector<Mat> values;

  Mat at_time(double t) const;
};

enum class Direction { Forward, Backward };

using OdeRhs = std::function<Vec(double t, const Vec& state)>;

/// Classical fixed-step RK4. Backward integration runs in the reversed time
/// variable tau = t_end - t, so there is a single stepping code path; the
/// returned path is always indexed by grid nodes (node 0 = t_start).
/// Forward: state0 is the state at t_start; backward: at t_end.
VectorPath integrate_ode(const OdeRhs& f, const Vec& state0,
                         const TimeGrid& grid, Direction direction);

double dot(const Vec& a, const Vec& b);
double euclidean_norm(const Vec& v);

/// x' Q x for square Q.
double quadratic_form(const Mat& q, const Vec& x);

}  // namespace avglqr
