#pragma once
// Dense row-major matrix, just enough linear algebra for the pipeline.

#include <cassert>
#include <cstddef>
#include <vector>

namespace drbmclust {

struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

  double& operator()(size_t i, size_t j) { return a[i * cols + j]; }
  double operator()(size_t i, size_t j) const { return a[i * cols + j]; }

  const double* row(size_t i) const { return a.data() + i * cols; }
  double* row(size_t i) { return a.data() + i * cols; }
};

// C = A * B
inline Matrix matmul(const Matrix& A, const Matrix& B) {
  assert(A.cols == B.rows);
  Matrix C(A.rows, B.cols, 0.0);
  for (size_t i = 0; i < A.rows; ++i) {
    for (size_t k = 0; k < A.cols; ++k) {
      double aik = A(i, k);
      if (aik == 0.0) continue;
      const double* brow = B.row(k);
      double* crow = C.row(i);
      for (size_t j = 0; j < B.cols; ++j) crow[j] += aik * brow[j];
    }
  }
  return C;
}

// C = A^T * B  (A: m x r, B: m x c -> C: r x c)
inline Matrix matmul_tn(const Matrix& A, const Matrix& B) {
  assert(A.rows == B.rows);
  Matrix C(A.cols, B.cols, 0.0);
  for (size_t m = 0; m < A.rows; ++m) {
    const double* arow = A.row(m);
    const double* brow = B.row(m);
    for (size_t i = 0; i < A.cols; ++i) {
      double aim = arow[i];
      if (aim == 0.0) continue;
      double* crow = C.row(i);
      for (size_t j = 0; j < B.cols; ++j) crow[j] += aim * brow[j];
    }
  }
  return C;
}

inline double dot(const double* x, const double* y, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

inline double sq_dist(const double* x, const double* y, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

}  // namespace drbmclust
