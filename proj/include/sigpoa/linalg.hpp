#pragma once

#include <vector>

#include "sigpoa/scalar.hpp"

namespace sigpoa {

template <class Scalar>
struct LinearSolveResult {
  bool consistent = false;
  bool underdetermined = false;  // consistent with free variables
  int rank = 0;
  VecX<Scalar> solution;  // particular solution, free variables fixed at 0
};

/// Dense Gauss-Jordan with partial pivoting on |entry|. Works for both double
/// and exact rationals (pivot_tol = 0 in exact mode); the coefficient-wise
/// loops deliberately avoid Eigen expressions so one instantiation serves both
/// scalar types. Deterministic: pivot ties keep the earliest row.
template <class Scalar>
LinearSolveResult<Scalar> solve_linear_system(MatX<Scalar> a, VecX<Scalar> b,
                                              const Scalar& pivot_tol) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  std::vector<int> pivot_col_of_row(rows, -1);
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    Scalar best = pivot_tol;
    for (int r = rank; r < rows; ++r) {
      Scalar mag = abs_value<Scalar>(a(r, col));
      if (mag > best) {
        best = mag;
        piv = r;
      }
    }
    if (piv < 0) continue;
    if (piv != rank) {
      for (int c = 0; c < cols; ++c) std::swap(a(rank, c), a(piv, c));
      std::swap(b(rank), b(piv));
    }
    Scalar inv = Scalar(1) / a(rank, col);
    for (int c = 0; c < cols; ++c) a(rank, c) *= inv;
    b(rank) *= inv;
    a(rank, col) = 1;
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      Scalar f = a(r, col);
      if (f == 0) continue;
      for (int c = 0; c < cols; ++c) a(r, c) -= f * a(rank, c);
      b(r) -= f * b(rank);
      a(r, col) = 0;
    }
    pivot_col_of_row[rank] = col;
    ++rank;
  }

  LinearSolveResult<Scalar> out;
  out.rank = rank;
  out.consistent = true;
  for (int r = rank; r < rows; ++r) {
    if (abs_value<Scalar>(b(r)) > (pivot_tol == 0 ? Scalar(0) : pivot_tol)) {
      out.consistent = false;
      break;
    }
  }
  out.underdetermined = out.consistent && rank < cols;
  out.solution = VecX<Scalar>::Zero(cols);
  if (out.consistent)
    for (int r = 0; r < rank; ++r) out.solution(pivot_col_of_row[r]) = b(r);
  return out;
}

}  // namespace sigpoa
