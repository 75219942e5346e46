#pragma once

// Exact dense linear algebra over a field. Every routine here is plain
// Gauss-Jordan elimination with a nonzero pivot search, so it is only
// meaningful for exact scalar types.

#include "tractor/scalar.hpp"

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tractor {

template <typename Scalar>
struct Echelon {
  MatrixX<Scalar> reduced;          // reduced row echelon form, zero rows trimmed
  std::vector<Eigen::Index> pivots;  // pivot column of each row of `reduced`

  Eigen::Index rank() const { return static_cast<Eigen::Index>(pivots.size()); }
};

template <typename Scalar>
Echelon<Scalar> row_reduce(MatrixX<Scalar> m) {
  Echelon<Scalar> out;
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (!is_zero(m(i, c))) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != r) m.row(pivot).swap(m.row(r));
    const Scalar inv = Scalar(1) / m(r, c);
    for (Eigen::Index j = c; j < cols; ++j) m(r, j) *= inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      const Scalar factor = m(i, c);
      for (Eigen::Index j = c; j < cols; ++j) m(i, j) -= factor * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = m.topRows(r);
  return out;
}

template <typename Scalar>
Eigen::Index rank(const MatrixX<Scalar>& m) {
  return row_reduce<Scalar>(m).rank();
}

/// Basis of {v : m v = 0}, one basis vector per column.
template <typename Scalar>
MatrixX<Scalar> null_space(const MatrixX<Scalar>& m) {
  const auto ech = row_reduce<Scalar>(m);
  const Eigen::Index cols = m.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (auto p : ech.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<Eigen::Index> free_cols;
  for (Eigen::Index c = 0; c < cols; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);

  MatrixX<Scalar> basis = MatrixX<Scalar>::Zero(cols, static_cast<Eigen::Index>(free_cols.size()));
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const Eigen::Index f = free_cols[k];
    const auto col = static_cast<Eigen::Index>(k);
    basis(f, col) = Scalar(1);
    for (Eigen::Index r = 0; r < ech.rank(); ++r)
      basis(ech.pivots[static_cast<std::size_t>(r)], col) = -ech.reduced(r, f);
  }
  return basis;
}

/// Row-reduced basis of the row space of m.
template <typename Scalar>
MatrixX<Scalar> row_space(const MatrixX<Scalar>& m) {
  return row_reduce<Scalar>(m).reduced;
}

/// Any solution of m x = b, or nullopt when the system is inconsistent.
template <typename Scalar>
std::optional<VectorX<Scalar>> solve(const MatrixX<Scalar>& m, const VectorX<Scalar>& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: right-hand side size mismatch");
  MatrixX<Scalar> aug(m.rows(), m.cols() + 1);
  aug << m, b;
  const auto ech = row_reduce<Scalar>(aug);
  VectorX<Scalar> x = VectorX<Scalar>::Zero(m.cols());
  for (Eigen::Index r = 0; r < ech.rank(); ++r) {
    const Eigen::Index p = ech.pivots[static_cast<std::size_t>(r)];
    if (p == m.cols()) return std::nullopt;
    x(p) = ech.reduced(r, m.cols());
  }
  return x;
}

template <typename Scalar>
Scalar determinant(MatrixX<Scalar> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  const Eigen::Index n = m.rows();
  Scalar det(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = c; i < n; ++i) {
      if (!is_zero(m(i, c))) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) return Scalar(0);
    if (pivot != c) {
      m.row(pivot).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    for (Eigen::Index i = c + 1; i < n; ++i) {
      if (is_zero(m(i, c))) continue;
      const Scalar factor = m(i, c) / m(c, c);
      for (Eigen::Index j = c; j < n; ++j) m(i, j) -= factor * m(c, j);
    }
  }
  return det;
}

/// Inverse of a nonsingular square matrix.
template <typename Scalar>
MatrixX<Scalar> inverse(const MatrixX<Scalar>& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse: matrix not square");
  MatrixX<Scalar> aug(n, 2 * n);
  aug << m, MatrixX<Scalar>::Identity(n, n);
  const auto ech = row_reduce<Scalar>(aug);
  if (ech.rank() < n || ech.pivots[static_cast<std::size_t>(n - 1)] >= n)
    throw std::domain_error("inverse: singular matrix");
  return ech.reduced.rightCols(n);
}

template <typename Scalar>
bool is_zero_matrix(const MatrixX<Scalar>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!is_zero(m(i, j))) return false;
  return true;
}

template <typename Derived>
bool is_zero_vector(const Eigen::MatrixBase<Derived>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!is_zero(v(i))) return false;
  return true;
}

/// True when every row of `rows` lies in the row span of `span_rows`.
template <typename Scalar>
bool rows_in_span(const MatrixX<Scalar>& rows, const MatrixX<Scalar>& span_rows) {
  if (rows.rows() == 0) return true;
  if (span_rows.rows() == 0) return is_zero_matrix<Scalar>(rows);
  MatrixX<Scalar> stacked(span_rows.rows() + rows.rows(), span_rows.cols());
  stacked << span_rows, rows;
  return rank<Scalar>(stacked) == rank<Scalar>(span_rows);
}

}  // namespace tractor
