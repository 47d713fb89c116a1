#pragma once

// Dense matrices and exact Gaussian elimination.

#include <vector>

#include "g2k/field.hpp"

namespace g2k {

template <FieldType F>
class Matrix {
 public:
  using Element = typename F::Element;

  Matrix(F field, size_t rows, size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), a_(rows * cols, field_.zero()) {}

  static Matrix identity(const F& field, size_t n) {
    Matrix m(field, n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  const F& field() const noexcept { return field_; }
  size_t rows() const noexcept { return rows_; }
  size_t cols() const noexcept { return cols_; }

  Element& operator()(size_t r, size_t c) { return a_[r * cols_ + c]; }
  const Element& operator()(size_t r, size_t c) const { return a_[r * cols_ + c]; }

  std::vector<Element> row(size_t r) const {
    return std::vector<Element>(a_.begin() + static_cast<long>(r * cols_),
                                a_.begin() + static_cast<long>((r + 1) * cols_));
  }

  void append_row(const std::vector<Element>& r) {
    if (r.size() != cols_) fail(ErrorCode::LengthMismatch, "row length does not match matrix width");
    a_.insert(a_.end(), r.begin(), r.end());
    ++rows_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorCode::LengthMismatch, "matrix product shape mismatch");
    Matrix c(a.field_, a.rows_, b.cols_);
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        const Element& x = a(i, k);
        if (x.is_zero()) continue;
        for (size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
      }
    return c;
  }

  std::vector<Element> apply_matrix(const std::vector<Element>& v) const {
    if (v.size() != cols_) fail(ErrorCode::LengthMismatch, "vector length does not match matrix width");
    std::vector<Element> out(rows_, field_.zero());
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Element& s) {
    Matrix c = a;
    for (auto& e : c.a_) e *= s;
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (size_t i = 0; i < a.a_.size(); ++i)
      if (!(a.a_[i] == b.a_[i])) return false;
    return true;
  }

  /// In-place reduced row echelon form; returns the pivot column of each
  /// leading row. Rows past the rank are zero afterwards.
  std::vector<size_t> rref() {
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < cols_ && r < rows_; ++c) {
      size_t p = r;
      while (p < rows_ && (*this)(p, c).is_zero()) ++p;
      if (p == rows_) continue;
      if (p != r)
        for (size_t j = 0; j < cols_; ++j) std::swap((*this)(p, j), (*this)(r, j));
      const Element inv = (*this)(r, c).inv();
      for (size_t j = c; j < cols_; ++j) (*this)(r, j) *= inv;
      for (size_t i = 0; i < rows_; ++i) {
        if (i == r) continue;
        const Element factor = (*this)(i, c);
        if (factor.is_zero()) continue;
        for (size_t j = c; j < cols_; ++j) {
          const Element& src = (*this)(r, j);
          if (!src.is_zero()) (*this)(i, j) -= factor * src;
        }
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  size_t rank() const {
    Matrix tmp = *this;
    return tmp.rref().size();
  }

  Matrix inverse() const {
    if (rows_ != cols_) fail(ErrorCode::LengthMismatch, "inverse of a non-square matrix");
    Matrix aug(field_, rows_, 2 * cols_);
    for (size_t i = 0; i < rows_; ++i) {
      for (size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, cols_ + i) = field_.one();
    }
    auto piv = aug.rref();
    if (piv.size() < rows_ || piv.back() >= cols_) fail(ErrorCode::DivisionByZero, "singular matrix");
    Matrix inv(field_, rows_, cols_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) inv(i, j) = aug(i, cols_ + j);
    return inv;
  }

 private:
  F field_;
  size_t rows_, cols_;
  std::vector<Element> a_;
};

/// Scales v so that its first nonzero entry is 1. Zero vectors pass through.
template <FieldType F>
void normalize_first_nonzero(std::vector<typename F::Element>& v) {
  for (const auto& e : v) {
    if (e.is_zero()) continue;
    const auto inv = e.inv();
    for (auto& x : v) x *= inv;
    return;
  }
}

/// Basis of the right kernel; each vector has first nonzero coordinate 1.
/// Works on a private copy.
template <FieldType F>
std::vector<std::vector<typename F::Element>> solve_kernel(Matrix<F> m) {
  const F f = m.field();
  auto pivots = m.rref();
  std::vector<bool> is_pivot(m.cols(), false);
  for (size_t c : pivots) is_pivot[c] = true;
  std::vector<std::vector<typename F::Element>> basis;
  for (size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<typename F::Element> v(m.cols(), f.zero());
    v[free] = f.one();
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
    normalize_first_nonzero<F>(v);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace g2k
