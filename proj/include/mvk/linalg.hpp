#ifndef MVK_LINALG_HPP
#define MVK_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "mvk/error.hpp"
#include "mvk/scalar.hpp"

namespace mvk {

template <class T>
using Matrix = std::vector<std::vector<T>>;

/// Solves A c = b for an m x n system with m >= n by row reduction. Throws
/// ValidationError when the columns are dependent or the system is
/// inconsistent. Exact for rationals; partial pivoting for doubles.
template <class T>
std::vector<T> solve_consistent(Matrix<T> A, std::vector<T> b, double tol = 1e-9) {
  const std::size_t m = A.size();
  if (m == 0) return {};
  const std::size_t n = A.front().size();
  if (b.size() != m) throw DomainError("right-hand side length mismatch");
  if (m < n) throw ValidationError("underdetermined interpolation system");
  std::size_t row = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = m;
    if constexpr (is_exact_v<T>) {
      for (std::size_t r = row; r < m; ++r) {
        if (A[r][col] != 0) {
          piv = r;
          break;
        }
      }
    } else {
      double best = tol;
      for (std::size_t r = row; r < m; ++r) {
        if (std::abs(A[r][col]) > best) {
          best = std::abs(A[r][col]);
          piv = r;
        }
      }
    }
    if (piv == m) throw ValidationError("interpolation system is singular");
    std::swap(A[row], A[piv]);
    std::swap(b[row], b[piv]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row || A[r][col] == T(0)) continue;
      const T f = A[r][col] / A[row][col];
      for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[row][c];
      b[r] -= f * b[row];
    }
    ++row;
  }
  for (std::size_t r = n; r < m; ++r) {
    if (!near_zero(b[r], tol)) throw ValidationError("interpolation system is inconsistent");
  }
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return x;
}

}  // namespace mvk

#endif  // MVK_LINALG_HPP
