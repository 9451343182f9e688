#include "avglqr/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace avglqr {

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {
  if (rows < 1 || cols < 1) throw ShapeError("matrix dimensions must be >= 1");
}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows < 1 || cols < 1) throw ShapeError("matrix dimensions must be >= 1");
  if (entries_.size() != rows * cols)
    throw ShapeError("entry count does not match rows x cols");
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat Mat::operator+(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw ShapeError("matrix addition shape mismatch");
  Mat r = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    r.entries_[i] += o.entries_[i];
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw ShapeError("matrix subtraction shape mismatch");
  Mat r = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    r.entries_[i] -= o.entries_[i];
  return r;
}

Mat Mat::operator*(const Mat& o) const {
  if (cols_ != o.rows_) throw ShapeError("matrix product shape mismatch");
  Mat r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
    }
  return r;
}

Mat Mat::operator*(double c) const {
  Mat r = *this;
  for (double& e : r.entries_) e *= c;
  return r;
}

Vec Mat::operator*(const Vec& v) const {
  if (cols_ != v.size()) throw ShapeError("matrix-vector shape mismatch");
  Vec r(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
  return r;
}

void Mat::set_block(std::size_t row, std::size_t col, const Mat& block) {
  if (row + block.rows() > rows_ || col + block.cols() > cols_)
    throw ShapeError("block does not fit");
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j)
      (*this)(row + i, col + j) = block(i, j);
}

Mat Mat::block(std::size_t row, std::size_t col, std::size_t r,
               std::size_t c) const {
  if (row + r > rows_ || col + c > cols_)
    throw ShapeError("block out of range");
  Mat b(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) b(i, j) = (*this)(row + i, col + j);
  return b;
}

bool Mat::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](double e) { return std::isfinite(e); });
}

std::vector<double> symmetric_eigenvalues(const Mat& a) {
  if (!a.square()) throw ShapeError("eigenvalues need a square matrix");
  const std::size_t n = a.rows();
  Mat m = a;
  // Cyclic Jacobi: sweep all off-diagonal pairs until they vanish.
  const int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = m(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double spectral_norm(const Mat& a) {
  if (!a.all_finite()) throw Error("spectral_norm: non-finite entries");
  const Mat ata = a.transposed() * a;
  const auto eig = symmetric_eigenvalues(ata);
  return std::sqrt(std::max(0.0, eig.back()));
}

double matrix_2norm(const Mat& a) {
  if (!a.square()) throw ShapeError("matrix_2norm needs a square matrix");
  return spectral_norm(a);
}

double matrix_distance(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("matrix_distance shape mismatch");
  if (!a.square()) throw ShapeError("matrix_distance needs square matrices");
  return spectral_norm(a - b);
}

LinearSolveResult linear_solve(const Mat& a, const Mat& b) {
  if (!a.square()) throw ShapeError("linear_solve needs a square matrix");
  if (a.rows() != b.rows()) throw ShapeError("linear_solve shape mismatch");
  const std::size_t n = a.rows();

  double amax = 0.0;
  for (double e : a.entries()) amax = std::max(amax, std::abs(e));
  const double tol = std::max(amax, 1.0) * 1e-300;

  // Factor once, solve for B and for I (the latter feeds the rcond estimate).
  Mat lu = a;
  Mat rhs(n, b.cols() + n);
  rhs.set_block(0, 0, b);
  rhs.set_block(0, b.cols(), Mat::identity(n));

  double pivot_min = std::numeric_limits<double>::infinity();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(lu(i, col)) > std::abs(lu(piv, col))) piv = i;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(piv, j));
      for (std::size_t j = 0; j < rhs.cols(); ++j)
        std::swap(rhs(col, j), rhs(piv, j));
    }
    const double p = lu(col, col);
    if (std::abs(p) <= tol)
      throw SingularityError("linear_solve: pivot below tolerance", p);
    pivot_min = std::min(pivot_min, std::abs(p));
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = lu(i, col) / p;
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) lu(i, j) -= f * lu(col, j);
      for (std::size_t j = 0; j < rhs.cols(); ++j)
        rhs(i, j) -= f * rhs(col, j);
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    const double p = lu(col, col);
    for (std::size_t j = 0; j < rhs.cols(); ++j) {
      double s = rhs(col, j);
      for (std::size_t k = col + 1; k < n; ++k) s -= lu(col, k) * rhs(k, j);
      rhs(col, j) = s / p;
    }
  }

  // rcond = 1 / (||A||_1 ||A^-1||_1), with A^-1 available from the factoring.
  auto one_norm = [](const Mat& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
      best = std::max(best, s);
    }
    return best;
  };
  const Mat inv = rhs.block(0, b.cols(), n, n);
  const double denom = one_norm(a) * one_norm(inv);
  const double rcond = denom > 0.0 ? 1.0 / denom : 0.0;
  return {rhs.block(0, 0, n, b.cols()), rcond};
}

TimeGrid::TimeGrid(double t0, double t1, std::size_t n)
    : t_start(t0), t_end(t1), steps(n) {
  if (!(t0 < t1)) throw Error("TimeGrid: t_start must be < t_end");
  if (n < 1) throw Error("TimeGrid: steps must be >= 1");
}

Vec VectorPath::at_time(double t) const {
  const double h = grid.step();
  double s = (t - grid.t_start) / h;
  s = std::clamp(s, 0.0, double(grid.steps));
  const std::size_t k = std::min<std::size_t>(std::size_t(s), grid.steps - 1);
  const double w = s - double(k);
  Vec out = values[k];
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (1.0 - w) * out[i] + w * values[k + 1][i];
  return out;
}

Mat MatrixPath::at_time(double t) const {
  const double h = grid.step();
  double s = (t - grid.t_start) / h;
  s = std::clamp(s, 0.0, double(grid.steps));
  const std::size_t k = std::min<std::size_t>(std::size_t(s), grid.steps - 1);
  const double w = s - double(k);
  Mat out = values[k] * (1.0 - w) + values[k + 1] * w;
  return out;
}

namespace {

Vec axpy(const Vec& y, double a, const Vec& x) {
  Vec r = y;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += a * x[i];
  return r;
}

bool finite(const Vec& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double e) { return std::isfinite(e); });
}

}  // namespace

VectorPath integrate_ode(const OdeRhs& f, const Vec& state0,
                         const TimeGrid& grid, Direction direction) {
  const std::size_t n = grid.steps;
  const double h = grid.step();
  std::vector<Vec> values(n + 1);

  // Backward runs in tau = t_end - t so both directions share one stepper.
  const bool back = direction == Direction::Backward;
  auto rhs = [&](double tau, const Vec& y) {
    if (!back) return f(tau, y);
    Vec g = f(grid.t_end - (tau - grid.t_start), y);
    for (double& e : g) e = -e;
    return g;
  };

  Vec y = state0;
  values[back ? n : 0] = y;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = grid.node(k);
    const Vec k1 = rhs(t, y);
    const Vec k2 = rhs(t + h / 2, axpy(y, h / 2, k1));
    const Vec k3 = rhs(t + h / 2, axpy(y, h / 2, k2));
    const Vec k4 = rhs(t + h, axpy(y, h, k3));
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    const std::size_t node = back ? n - 1 - k : k + 1;
    if (!finite(y))
      throw DivergenceError(
          "integrate_ode: non-finite state at node " + std::to_string(node),
          node);
    values[node] = y;
  }
  return {grid, std::move(values)};
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double euclidean_norm(const Vec& v) { return std::sqrt(dot(v, v)); }

double quadratic_form(const Mat& q, const Vec& x) {
  if (q.rows() != x.size() || q.cols() != x.size())
    throw ShapeError("quadratic_form shape mismatch");
  return dot(x, q * x);
}

}  // namespace avglqr
