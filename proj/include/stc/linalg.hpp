#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "stc/scalar.hpp"

namespace stc {

// Dense square matrix with entries of scalar type T, row major.
template <class T>
struct Mat {
  int n = 0;
  std::vector<T> a;

  Mat() = default;
  explicit Mat(int dim) : n(dim), a(size_t(dim) * dim, scalar_traits<T>::zero()) {}

  T& operator()(int i, int j) { return a[size_t(i) * n + j]; }
  const T& operator()(int i, int j) const { return a[size_t(i) * n + j]; }

  static Mat identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = scalar_traits<T>::from_long(1);
    return m;
  }

  friend Mat operator+(Mat a, const Mat& b) {
    for (size_t i = 0; i < a.a.size(); ++i) a.a[i] = a.a[i] + b.a[i];
    return a;
  }
  friend Mat operator-(Mat a, const Mat& b) {
    for (size_t i = 0; i < a.a.size(); ++i) a.a[i] = a.a[i] - b.a[i];
    return a;
  }
  friend Mat operator*(const T& s, Mat a) {
    for (auto& v : a.a) v = s * v;
    return a;
  }

  bool is_identity() const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        T want = scalar_traits<T>::from_long(i == j ? 1 : 0);
        if (!((*this)(i, j) == want)) return false;
      }
    return true;
  }
};

namespace detail {
template <class T>
double pivot_size(const T& v) { return std::abs(to_double(v)); }
}

// Solves A x = b for multiple right-hand sides by Gaussian elimination with
// partial pivoting. Exact over exact scalar types.
template <class T>
std::vector<std::vector<T>> solve_linear(Mat<T> A, std::vector<std::vector<T>> rhs) {
  const int n = A.n;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    double best = 0;
    for (int r = col; r < n; ++r) {
      double s = detail::pivot_size(A(r, col));
      if (s > best) { best = s; piv = r; }
    }
    if (piv < 0 || is_zero(A(piv, col)))
      throw std::domain_error("singular linear system");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(A(col, j), A(piv, j));
      for (auto& b : rhs) std::swap(b[col], b[piv]);
    }
    T d = A(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (is_zero(A(r, col))) continue;
      T f = A(r, col) / d;
      for (int j = col; j < n; ++j) A(r, j) = A(r, j) - f * A(col, j);
      for (auto& b : rhs) b[r] = b[r] - f * b[col];
    }
  }
  for (auto& b : rhs) {
    for (int r = n - 1; r >= 0; --r) {
      T s = b[r];
      for (int j = r + 1; j < n; ++j) s = s - A(r, j) * b[j];
      b[r] = s / A(r, r);
    }
  }
  return rhs;
}

template <class T>
Mat<T> invert(const Mat<T>& A) {
  const int n = A.n;
  std::vector<std::vector<T>> cols(n, std::vector<T>(n, scalar_traits<T>::zero()));
  for (int j = 0; j < n; ++j) cols[j][j] = scalar_traits<T>::from_long(1);
  cols = solve_linear(A, std::move(cols));
  Mat<T> inv(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) inv(i, j) = cols[j][i];
  return inv;
}

// Metric on an n-dimensional space: the matrix and its inverse.
template <class T>
struct Metric {
  Mat<T> g;
  Mat<T> ginv;
  bool identity = false;

  Metric() = default;
  explicit Metric(Mat<T> m) : g(std::move(m)) {
    identity = g.is_identity();
    ginv = identity ? g : invert(g);
  }
  static Metric standard(int n) { return Metric(Mat<T>::identity(n)); }
  int dim() const { return g.n; }
};

}  // namespace stc
