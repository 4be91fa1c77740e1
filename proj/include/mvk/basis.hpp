#ifndef MVK_BASIS_HPP
#define MVK_BASIS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "mvk/error.hpp"
#include "mvk/linalg.hpp"
#include "mvk/scalar.hpp"

namespace mvk {

/// Orthogonal functions u^(0) = 1, u^(1), ..., u^(d-1) on a probability
/// vector p, with sum_j u_j^(l) u_j^(m) p_j = a_l delta_lm.
///
/// Rows are basis functions and columns are categories: u(l, j) = u_j^(l),
/// with categories indexed from 0.
template <class T>
class Basis {
 public:
  using Table = Matrix<T>;

  /// Validates p and the orthogonality relations; the norms a_l are recorded.
  Basis(std::vector<T> p, Table u, double tol = 1e-12) : p_(std::move(p)), u_(std::move(u)) {
    const std::size_t d = p_.size();
    if (d == 0) throw ValidationError("basis needs at least one category");
    if (u_.size() != d) throw ValidationError("basis must have d functions");
    T total(0);
    for (std::size_t j = 0; j < d; ++j) {
      if (!(p_[j] > T(0))) throw ValidationError("category probabilities must be positive");
      total += p_[j];
    }
    if (!near_zero(T(total - T(1)), tol)) throw ValidationError("category probabilities must sum to 1");
    for (std::size_t l = 0; l < d; ++l) {
      if (u_[l].size() != d) throw ValidationError("basis function " + std::to_string(l) + " has wrong length");
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (!near_zero(T(u_[0][j] - T(1)), tol)) throw ValidationError("u^(0) must be identically 1");
    }
    a_.resize(d);
    for (std::size_t l = 0; l < d; ++l) a_[l] = inner(l, l);
    for (std::size_t l = 0; l < d; ++l) {
      if (!(a_[l] > T(0))) throw ValidationError("basis function " + std::to_string(l) + " has zero norm");
      for (std::size_t m = l + 1; m < d; ++m) {
        const T s = inner(l, m);
        const double scale = std::sqrt(to_double(a_[l]) * to_double(a_[m]));
        if (!near_zero(s, tol * std::max(1.0, scale))) {
          throw ValidationError("basis functions (" + std::to_string(l) + "," + std::to_string(m) +
                                ") are not orthogonal");
        }
      }
    }
  }

  /// Validates against stated norms as well.
  Basis(std::vector<T> p, Table u, const std::vector<T>& stated_norms, double tol)
      : Basis(std::move(p), std::move(u), tol) {
    if (stated_norms.size() != a_.size()) throw ValidationError("norm vector has wrong length");
    for (std::size_t l = 0; l < a_.size(); ++l) {
      if (!near_zero(T(stated_norms[l] - a_[l]), tol * std::max(1.0, std::abs(to_double(a_[l]))))) {
        throw ValidationError("stated norm a_" + std::to_string(l) + " disagrees with the basis");
      }
    }
  }

  std::size_t dim() const { return p_.size(); }
  const std::vector<T>& p() const { return p_; }
  const T& u(std::size_t l, std::size_t j) const { return u_[l][j]; }
  const Table& table() const { return u_; }
  const std::vector<T>& norms() const { return a_; }

  bool orthonormal(double tol = 1e-12) const {
    for (const auto& a : a_) {
      if (!near_zero(T(a - T(1)), tol)) return false;
    }
    return true;
  }

  void require_orthonormal(const char* what) const {
    if (!orthonormal()) throw ValidationError(std::string(what) + " requires an orthonormal basis");
  }

 private:
  T inner(std::size_t l, std::size_t m) const {
    T s(0);
    for (std::size_t j = 0; j < p_.size(); ++j) s += u_[l][j] * u_[m][j] * p_[j];
    return s;
  }

  std::vector<T> p_;
  Table u_;
  std::vector<T> a_;
};

namespace detail {

template <class T>
Matrix<T> gram_schmidt_monomials(const std::vector<T>& p) {
  const std::size_t d = p.size();
  T total(0);
  for (const auto& v : p) {
    if (!(v > T(0))) throw ValidationError("degenerate probability vector");
    total += v;
  }
  if (!near_zero(T(total - T(1)), 1e-12)) throw ValidationError("probability vector must sum to 1");
  Matrix<T> u;
  for (std::size_t l = 0; l < d; ++l) {
    std::vector<T> f(d);
    for (std::size_t j = 0; j < d; ++j) f[j] = power(T(static_cast<int>(j) + 1), static_cast<int>(l));
    for (const auto& g : u) {
      T num(0), den(0);
      for (std::size_t j = 0; j < d; ++j) {
        num += f[j] * g[j] * p[j];
        den += g[j] * g[j] * p[j];
      }
      const T c = num / den;
      for (std::size_t j = 0; j < d; ++j) f[j] -= c * g[j];
    }
    u.push_back(std::move(f));
  }
  return u;
}

}  // namespace detail

/// Gram-Schmidt on 1, j, j^2, ... against p, left unnormalized (a_l != 1).
/// Stays exact for rational p.
template <class T>
Basis<T> orthogonal_basis_from(const std::vector<T>& p) {
  return Basis<T>(p, detail::gram_schmidt_monomials(p));
}

/// Canonical orthonormal basis: Gram-Schmidt on 1, j, j^2, ... with a_l = 1.
template <class T = double>
Basis<T> orthonormal_basis_from(const std::vector<T>& p) {
  auto u = detail::gram_schmidt_monomials(p);
  for (auto& row : u) {
    T norm(0);
    for (std::size_t j = 0; j < p.size(); ++j) norm += row[j] * row[j] * p[j];
    const T s = sqrt_of(norm);
    for (auto& v : row) v /= s;
  }
  return Basis<T>(p, std::move(u));
}

/// Replaces rows 1..d-1 by R times those rows; orthogonal R keeps an
/// orthonormal basis orthonormal.
template <class T>
Basis<T> remix(const Basis<T>& basis, const Matrix<T>& rotation) {
  const std::size_t d = basis.dim();
  if (rotation.size() + 1 != d) throw ValidationError("rotation must be (d-1)x(d-1)");
  Matrix<T> u = basis.table();
  for (std::size_t r = 0; r + 1 < d; ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      T s(0);
      for (std::size_t c = 0; c + 1 < d; ++c) s += rotation[r][c] * basis.u(c + 1, j);
      u[r + 1][j] = s;
    }
  }
  return Basis<T>(basis.p(), std::move(u), 1e-10);
}

/// Haar-ish random k x k orthogonal matrix: Gram-Schmidt on Gaussian columns.
template <class Rng>
Matrix<double> random_orthogonal_matrix(std::size_t k, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix<double> m(k, std::vector<double>(k));
  for (std::size_t r = 0; r < k; ++r) {
    for (;;) {
      for (auto& v : m[r]) v = g(rng);
      for (std::size_t s = 0; s < r; ++s) {
        double dot = 0;
        for (std::size_t c = 0; c < k; ++c) dot += m[r][c] * m[s][c];
        for (std::size_t c = 0; c < k; ++c) m[r][c] -= dot * m[s][c];
      }
      double nrm = 0;
      for (double v : m[r]) nrm += v * v;
      nrm = std::sqrt(nrm);
      if (nrm < 1e-6) continue;
      for (auto& v : m[r]) v /= nrm;
      break;
    }
  }
  return m;
}

}  // namespace mvk

#endif  // MVK_BASIS_HPP
