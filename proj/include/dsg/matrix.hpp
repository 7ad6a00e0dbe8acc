#pragma once

#include <cassert>
#include <vector>

namespace dsg {

// Small dense row-major matrix. Sizes in this toolkit stay tiny (state
// counts below ten), so no external linear-algebra dependency is needed.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  Matrix operator*(const Matrix& o) const {
    assert(cols == o.rows);
    Matrix out(rows, o.cols);
    for (int i = 0; i < rows; ++i) {
      for (int k = 0; k < cols; ++k) {
        const double v = (*this)(i, k);
        if (v == 0.0) continue;
        for (int j = 0; j < o.cols; ++j) out(i, j) += v * o(k, j);
      }
    }
    return out;
  }

  double row_sum(int r) const {
    double s = 0.0;
    for (int c = 0; c < cols; ++c) s += (*this)(r, c);
    return s;
  }

  double min_entry() const {
    double m = a.empty() ? 0.0 : a[0];
    for (double v : a)
      if (v < m) m = v;
    return m;
  }
};

}  // namespace dsg
