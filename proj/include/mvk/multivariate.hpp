#ifndef MVK_MULTIVARIATE_HPP
#define MVK_MULTIVARIATE_HPP

// Multivariate Krawtchouk polynomials Q_n(x; u) on the multinomial
// distribution m(x; p), their duals, recurrences and degree structure.
//
// Categories are indexed 0..d-1 and basis functions 0..d-1 (u^(0) = 1); a
// multi-index n = (n_1..n_{d-1}) is paired with the derived n_0 = N - |n|.

#include <map>
#include <span>
#include <vector>

#include "mvk/basis.hpp"
#include "mvk/combinatorics.hpp"
#include "mvk/error.hpp"
#include "mvk/linalg.hpp"
#include "mvk/series.hpp"

namespace mvk {

namespace detail {

/// Coefficient of prod_{l>=1} w_l^{n_l} in
/// prod_j (rows[0][j] + sum_{l>=1} w_l rows[l][j])^{x_j}.
/// The first row is the constant term; it need not be identically one.
template <class T>
T gf_coefficient(std::span<const int> n, std::span<const int> x, const Matrix<T>& rows) {
  if (rows.size() != n.size() + 1) throw DomainError("generating function: row count mismatch");
  auto s = MultiSeries<T>::box(n);
  std::vector<T> c(n.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t l = 0; l < n.size(); ++l) c[l] = rows[l + 1][j];
    for (int rep = 0; rep < x[j]; ++rep) s.multiply_linear(rows[0][j], c);
  }
  return s.coefficient(n);
}

template <class T>
void require_shape(const MultiIndex& n, const Composition& x, const Basis<T>& basis) {
  if (x.size() != basis.dim()) throw DomainError("composition length differs from basis dimension");
  if (n.size() + 1 != basis.dim()) throw DomainError("multi-index length must be d - 1");
  if (n.total() != x.total()) throw DomainError("multi-index total differs from |x|");
}

template <class T>
T multinomial_pmf(const Composition& x, const std::vector<T>& p) {
  T r = multinomial<T>(x.values());
  for (std::size_t j = 0; j < x.size(); ++j) r *= power(p[j], x[j]);
  return r;
}

}  // namespace detail

/// m(x; p) = C(N; x) prod p_j^{x_j}.
template <class T>
T multinomial_pmf(const Composition& x, const std::vector<T>& p) {
  if (x.size() != p.size()) throw DomainError("composition length differs from p");
  return detail::multinomial_pmf(x, p);
}

/// Q_n(x; u): coefficient of prod w_l^{n_l} in prod_j (1 + sum_l w_l u_j^(l))^{x_j}.
template <class T>
T mvk_eval(const MultiIndex& n, const Composition& x, const Basis<T>& basis) {
  detail::require_shape(n, x, basis);
  return detail::gf_coefficient(n.values(), x.values(), basis.table());
}

/// Q_n(x; u) from the explicit sum over tables r (d x (d-1)) with column sums n_k:
/// sum prod_j x_j[r_j.] / prod_{j,k} r_jk! * prod (u_j^(k))^{r_jk}.
template <class T>
T mvk_eval_explicit(const MultiIndex& n, const Composition& x, const Basis<T>& basis) {
  detail::require_shape(n, x, basis);
  const std::size_t d = basis.dim();
  std::vector<int> used(d, 0);
  T total(0);
  // column k, row j, remaining count in column k, running term
  auto rec = [&](auto&& self, std::size_t k, std::size_t j, int left, T term) -> void {
    if (k + 1 == d) {
      T t = term;
      for (std::size_t r = 0; r < d; ++r) t *= falling(T(x[r]), used[r]);
      total += t;
      return;
    }
    if (j + 1 == d) {
      if (used[j] + left > x[j]) return;
      used[j] += left;
      self(self, k + 1, 0, k + 2 < d ? n[k + 1] : 0, term * power(basis.u(k + 1, j), left) / factorial<T>(left));
      used[j] -= left;
      return;
    }
    for (int r = 0; r <= left && used[j] + r <= x[j]; ++r) {
      used[j] += r;
      self(self, k, j + 1, left - r, term * power(basis.u(k + 1, j), r) / factorial<T>(r));
      used[j] -= r;
    }
  };
  if (d == 1) return T(1);
  rec(rec, 0, 0, n[0], T(1));
  return total;
}

/// Every Q_n(x) with |n| <= N and |x| = N, computed once.
template <class T>
class PolynomialTable {
 public:
  PolynomialTable(const Basis<T>& basis, int N)
      : N_(N), xs_(compositions(N, basis.dim())), ns_(multi_indices(N, basis.dim() - 1)) {
    for (std::size_t i = 0; i < xs_.size(); ++i) x_index_[xs_[i].vector()] = i;
    for (std::size_t i = 0; i < ns_.size(); ++i) {
      n_index_[std::vector<int>(ns_[i].values().begin(), ns_[i].values().end())] = i;
    }
    values_.resize(xs_.size());
    const std::size_t k = basis.dim() - 1;
    for (std::size_t ix = 0; ix < xs_.size(); ++ix) {
      auto s = MultiSeries<T>::simplex(k, N);
      std::vector<T> c(k);
      for (std::size_t j = 0; j < basis.dim(); ++j) {
        for (std::size_t l = 0; l < k; ++l) c[l] = basis.u(l + 1, j);
        for (int rep = 0; rep < xs_[ix][j]; ++rep) s.multiply_linear(T(1), c);
      }
      values_[ix].reserve(ns_.size());
      for (const auto& n : ns_) values_[ix].push_back(s.coefficient(n.values()));
    }
  }

  int total() const { return N_; }
  const std::vector<Composition>& states() const { return xs_; }
  const std::vector<MultiIndex>& degrees() const { return ns_; }

  /// Q_n(x), or 0 when n has a negative entry or |n| > N.
  T operator()(std::span<const int> n, const Composition& x) const {
    int sum = 0;
    for (int v : n) {
      if (v < 0) return T(0);
      sum += v;
    }
    if (sum > N_) return T(0);
    return values_.at(x_index_.at(x.vector())).at(n_index_.at(std::vector<int>(n.begin(), n.end())));
  }
  T operator()(const MultiIndex& n, const Composition& x) const { return (*this)(n.values(), x); }

 private:
  int N_;
  std::vector<Composition> xs_;
  std::vector<MultiIndex> ns_;
  std::map<std::vector<int>, std::size_t> x_index_;
  std::map<std::vector<int>, std::size_t> n_index_;
  std::vector<std::vector<T>> values_;
};

/// C(N; n+) prod_j a_j^{n_j}: the squared norm of Q_n.
template <class T>
T mvk_norm(const MultiIndex& n, const Basis<T>& basis) {
  T r = multinomial_plus<T>(n);
  for (std::size_t k = 0; k < n.size(); ++k) r *= power(basis.norms()[k + 1], n[k]);
  return r;
}

/// sum_x Q_m(x) Q_n(x) m(x; p) by enumeration of all compositions.
template <class T>
T mvk_gram(const Basis<T>& basis, int N, const MultiIndex& m, const MultiIndex& n) {
  T s(0);
  for (const auto& x : compositions(N, basis.dim())) {
    s += mvk_eval(m, x, basis) * mvk_eval(n, x, basis) * detail::multinomial_pmf(x, basis.p());
  }
  return s;
}

/// sum_{|n|<=N} C(N; n+)^{-1} prod a_j^{-n_j} Q_n(x) Q_n(y).
template <class T>
T mvk_dual_gram(const Basis<T>& basis, int N, const Composition& x, const Composition& y) {
  T s(0);
  for (const auto& n : multi_indices(N, basis.dim() - 1)) {
    s += mvk_eval(n, x, basis) * mvk_eval(n, y, basis) / mvk_norm(n, basis);
  }
  return s;
}

/// T_i(phi) = sum_j p_j phi_j u_j^(i).
template <class T>
T transform_factor(std::size_t i, std::span<const T> phi, const Basis<T>& basis) {
  T s(0);
  for (std::size_t j = 0; j < basis.dim(); ++j) s += basis.p()[j] * phi[j] * basis.u(i, j);
  return s;
}

/// Closed form of E[prod phi_j^{X_j} Q_n(X)]:
/// C(N, |n|) C(|n|; n) T_0^{N-|n|} prod T_i^{n_i}.
template <class T>
T mvk_transform(const MultiIndex& n, std::span<const T> phi, const Basis<T>& basis) {
  if (phi.size() != basis.dim()) throw DomainError("phi length differs from basis dimension");
  T r = binomial<T>(n.total(), n.degree()) * multinomial<T>(n.values());
  r *= power(transform_factor(0, phi, basis), n.n0());
  for (std::size_t i = 0; i < n.size(); ++i) r *= power(transform_factor(i + 1, phi, basis), n[i]);
  return r;
}

/// E[prod phi_j^{X_j} Q_n(X)] by enumeration.
template <class T>
T mvk_transform_expectation(const MultiIndex& n, std::span<const T> phi, const Basis<T>& basis) {
  T s(0);
  for (const auto& x : compositions(n.total(), basis.dim())) {
    T w = detail::multinomial_pmf(x, basis.p()) * mvk_eval(n, x, basis);
    for (std::size_t j = 0; j < x.size(); ++j) w *= power(phi[j], x[j]);
    s += w;
  }
  return s;
}

/// The dual system: omega_i^(j) = u_{j+1}^(i-1) read with the roles of
/// points and functions exchanged, scaled by its first function.
template <class T>
struct DualBasis {
  /// omega[j][i]: function j at point i (function-major).
  Matrix<T> omega;
  /// omega_hat[j][i] = omega[j][i] / omega[0][i].
  Matrix<T> omega_hat;
  /// b_i proportional to a_i^{-1} (omega_i^(0))^2.
  std::vector<T> b;
  /// sum_i a_i^{-1} (omega_i^(0))^2.
  T scale;
  /// omega_hat as a validated basis on b (norms 1 / (p_j scale)).
  Basis<T> basis;
};

template <class T>
DualBasis<T> dual_basis(const Basis<T>& u) {
  const std::size_t d = u.dim();
  Matrix<T> omega(d, std::vector<T>(d)), hat(d, std::vector<T>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (u.u(i, 0) == T(0)) {
      throw DualityUnavailableError("duality unavailable: u^(" + std::to_string(i) +
                                    ") vanishes on the first category");
    }
  }
  T scale(0);
  std::vector<T> b(d);
  for (std::size_t i = 0; i < d; ++i) {
    b[i] = u.u(i, 0) * u.u(i, 0) / u.norms()[i];
    scale += b[i];
  }
  for (auto& v : b) v /= scale;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      omega[j][i] = u.u(i, j);
      hat[j][i] = u.u(i, j) / u.u(i, 0);
    }
  }
  Basis<T> dual(b, hat, 1e-10);
  return DualBasis<T>{std::move(omega), std::move(hat), std::move(b), std::move(scale), std::move(dual)};
}

template <class T>
struct DualitySides {
  T lhs;
  T rhs;
};

/// Both sides of C(N;n+)^{-1} C(N;x) Q_n(x;u) = prod_i (omega_i^(0))^{n_{i-1}} Q*_{x-}(n+; omega_hat).
template <class T>
DualitySides<T> duality_sides(const MultiIndex& n, const Composition& x, const Basis<T>& u,
                              const DualBasis<T>& dual) {
  const T lhs = mvk_eval(n, x, u) * multinomial<T>(x.values()) / multinomial_plus<T>(n);
  const auto plus = n.plus();
  T factor(1);
  for (std::size_t i = 0; i < plus.size(); ++i) factor *= power(dual.omega[0][i], plus[i]);
  const MultiIndex x_minus(std::vector<int>(x.values().begin() + 1, x.values().end()), x.total());
  const T rhs = factor * mvk_eval(x_minus, Composition(plus), dual.basis);
  return {lhs, rhs};
}

/// c(i, l, k) = sum_j u_j^(i) u_j^(l) u_j^(k) p_j.
template <class T>
T c_tensor(std::size_t i, std::size_t l, std::size_t k, const Basis<T>& basis) {
  const std::size_t d = basis.dim();
  if (i >= d || l >= d || k >= d) throw DomainError("c_tensor index out of range");
  T s(0);
  for (std::size_t j = 0; j < d; ++j) s += basis.u(i, j) * basis.u(l, j) * basis.u(k, j) * basis.p()[j];
  return s;
}

enum class RecurrenceKind { XSide, USide, Dual };

/// LHS - RHS of one of the three recurrence systems. Q terms whose index
/// leaves {n >= 0, |n| <= N} are zero.
///   XSide (index j, a category): x_j Q_n in terms of Q_{n +- e}
///   USide (index i in 1..d-1):    U_i Q_n in terms of Q_{n +- e} and c(i,l,k)
///   Dual  (index i in 0..d-1):    n_i Q_n(x) = sum x_j u_j^(i) u_l^(i) p_l Q_n(x - e_j + e_l)
template <class T>
T mvk_recurrence_residual(RecurrenceKind kind, std::size_t index, const MultiIndex& n, const Composition& x,
                          const Basis<T>& basis) {
  detail::require_shape(n, x, basis);
  basis.require_orthonormal("recurrence");
  const std::size_t d = basis.dim();
  const int N = n.total();
  const int n0 = n.n0();
  std::vector<int> nv(n.values().begin(), n.values().end());
  auto q = [&](const std::vector<int>& m, const Composition& y) -> T {
    int s = 0;
    for (int v : m) {
      if (v < 0) return T(0);
      s += v;
    }
    if (s > N) return T(0);
    return detail::gf_coefficient(std::span<const int>(m), y.values(), basis.table());
  };
  auto shifted = [&](int minus, int plus) {
    std::vector<int> m = nv;
    if (minus >= 0) --m[minus];
    if (plus >= 0) ++m[plus];
    return m;
  };
  const auto& p = basis.p();
  switch (kind) {
    case RecurrenceKind::XSide: {
      const std::size_t j = index;
      if (j >= d) throw DomainError("x-side recurrence index out of range");
      T rhs(0);
      for (std::size_t k = 1; k < d; ++k) {
        rhs += T(nv[k - 1] + 1) * p[j] * basis.u(k, j) * q(shifted(-1, static_cast<int>(k - 1)), x);
        rhs += T(n0 + 1) * p[j] * basis.u(k, j) * q(shifted(static_cast<int>(k - 1), -1), x);
      }
      for (std::size_t l = 1; l < d; ++l) {
        for (std::size_t k = 1; k < d; ++k) {
          const int c = nv[k - 1] + 1 - (l == k ? 1 : 0);
          rhs += T(c) * p[j] * basis.u(l, j) * basis.u(k, j) *
                 q(shifted(static_cast<int>(l - 1), static_cast<int>(k - 1)), x);
        }
      }
      rhs += p[j] * T(n0) * q(nv, x);
      return T(x[j]) * q(nv, x) - rhs;
    }
    case RecurrenceKind::USide: {
      const std::size_t i = index;
      if (i < 1 || i >= d) throw DomainError("u-side recurrence index must lie in 1..d-1");
      T ui(0);
      for (std::size_t j = 0; j < d; ++j) ui += basis.u(i, j) * T(x[j]);
      T rhs = T(nv[i - 1] + 1) * q(shifted(-1, static_cast<int>(i - 1)), x) +
              T(n0 + 1) * q(shifted(static_cast<int>(i - 1), -1), x);
      for (std::size_t l = 1; l < d; ++l) {
        for (std::size_t k = 1; k < d; ++k) {
          const int c = nv[k - 1] + 1 - (l == k ? 1 : 0);
          rhs += c_tensor(i, l, k, basis) * T(c) * q(shifted(static_cast<int>(l - 1), static_cast<int>(k - 1)), x);
        }
      }
      return ui * q(nv, x) - rhs;
    }
    case RecurrenceKind::Dual: {
      const std::size_t i = index;
      if (i >= d) throw DomainError("dual recurrence index out of range");
      const int ni = i == 0 ? n0 : nv[i - 1];
      T rhs(0);
      for (std::size_t j = 0; j < d; ++j) {
        if (x[j] == 0) continue;
        for (std::size_t l = 0; l < d; ++l) {
          rhs += T(x[j]) * basis.u(i, j) * basis.u(i, l) * p[l] * q(nv, x.moved(j, l));
        }
      }
      return T(ni) * q(nv, x) - rhs;
    }
  }
  return T(0);
}

/// U_l = sum_j u_j^(l) x_j for l = 1..d-1.
template <class T>
std::vector<T> linear_statistics(const Composition& x, const Basis<T>& basis) {
  if (x.size() != basis.dim()) throw DomainError("composition length differs from basis dimension");
  std::vector<T> U(basis.dim() - 1, T(0));
  for (std::size_t l = 1; l < basis.dim(); ++l) {
    for (std::size_t j = 0; j < basis.dim(); ++j) U[l - 1] += basis.u(l, j) * T(x[j]);
  }
  return U;
}

/// kappa_l = sum_j u_l^(j) n_j over n+ for categories l = 1..d-1.
template <class T>
std::vector<T> dual_linear_statistics(const MultiIndex& n, const Basis<T>& basis) {
  if (n.size() + 1 != basis.dim()) throw DomainError("multi-index length must be d - 1");
  const auto plus = n.plus();
  std::vector<T> kappa(basis.dim() - 1, T(0));
  for (std::size_t l = 1; l < basis.dim(); ++l) {
    for (std::size_t j = 0; j < basis.dim(); ++j) kappa[l - 1] += basis.u(j, l) * T(plus[j]);
  }
  return kappa;
}

/// Result of expressing a polynomial in monomials of a set of statistics.
template <class T>
struct StructureReport {
  /// (exponents, coefficient) for every nonzero monomial.
  std::vector<std::pair<std::vector<int>, T>> terms;
  int degree = 0;
  std::vector<std::vector<int>> top_monomials;
  T leading_coefficient{};
  std::vector<int> expected_monomial;
  T expected_coefficient{};
  bool passed = false;
};

namespace detail {

template <class T>
T monomial_value(std::span<const T> vars, std::span<const int> e) {
  T r(1);
  for (std::size_t i = 0; i < e.size(); ++i) r *= power(vars[i], e[i]);
  return r;
}

/// Fits values at points by the monomials, then summarizes the top degree.
template <class T>
StructureReport<T> interpolate_structure(const std::vector<std::vector<T>>& points, const std::vector<T>& values,
                                         const std::vector<std::vector<int>>& monomials,
                                         std::vector<int> expected_monomial, T expected_coefficient,
                                         int expected_degree, double tol = 1e-8) {
  Matrix<T> A;
  A.reserve(points.size());
  for (const auto& pt : points) {
    std::vector<T> row;
    row.reserve(monomials.size());
    for (const auto& e : monomials) row.push_back(monomial_value<T>(pt, e));
    A.push_back(std::move(row));
  }
  const auto coef = solve_consistent(std::move(A), values, tol);
  StructureReport<T> rep;
  rep.degree = -1;
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    if (near_zero(coef[i], tol)) continue;
    rep.terms.emplace_back(monomials[i], coef[i]);
    rep.degree = std::max(rep.degree, std::accumulate(monomials[i].begin(), monomials[i].end(), 0));
  }
  for (const auto& [e, c] : rep.terms) {
    if (std::accumulate(e.begin(), e.end(), 0) == rep.degree) {
      rep.top_monomials.push_back(e);
      rep.leading_coefficient = c;
    }
  }
  rep.expected_monomial = std::move(expected_monomial);
  rep.expected_coefficient = expected_coefficient;
  rep.passed = rep.degree == expected_degree && rep.top_monomials.size() == 1 &&
               rep.top_monomials.front() == rep.expected_monomial &&
               near_zero(T(rep.leading_coefficient - rep.expected_coefficient), tol);
  return rep;
}

}  // namespace detail

/// Expresses Q_n(x; u) in monomials of (U_1..U_{d-1}) by exact interpolation
/// over all compositions; Q_n has degree |n| with the single top monomial
/// prod U_k^{n_k}, whose coefficient is 1 / prod n_k!.
template <class T>
StructureReport<T> leading_term_check(const MultiIndex& n, const Basis<T>& basis) {
  const int N = n.total();
  const std::size_t k = basis.dim() - 1;
  if (basis.dim() > 4 || N > 6) throw ScaleError("leading-term check limited to d <= 4, N <= 6");
  std::vector<std::vector<T>> pts;
  std::vector<T> vals;
  for (const auto& x : compositions(N, basis.dim())) {
    pts.push_back(linear_statistics(x, basis));
    vals.push_back(mvk_eval(n, x, basis));
  }
  std::vector<std::vector<int>> monos;
  for (const auto& m : multi_indices(N, k)) monos.emplace_back(m.values().begin(), m.values().end());
  T expected(1);
  for (std::size_t i = 0; i < k; ++i) expected /= factorial<T>(n[i]);
  return detail::interpolate_structure<T>(pts, vals, monos, std::vector<int>(n.values().begin(), n.values().end()),
                                          expected, n.degree());
}

/// Dual structure: for a basis with u^(j) = 1 on the first category,
/// C(N; n+)^{-1} Q_n(x; u), as a function of n, has degree x_1+..+x_{d-1} in
/// (kappa_1..kappa_{d-1}) with the single top monomial prod kappa_l^{x_l},
/// whose coefficient is x_0! / N!.
template <class T>
StructureReport<T> dual_leading_term_check(const Composition& x, const Basis<T>& basis) {
  const int N = x.total();
  const std::size_t d = basis.dim();
  if (d > 4 || N > 6) throw ScaleError("leading-term check limited to d <= 4, N <= 6");
  for (std::size_t j = 0; j < d; ++j) {
    if (!near_zero(T(basis.u(j, 0) - T(1)), 1e-12)) {
      throw ValidationError("dual structure check needs u^(j) = 1 on the first category");
    }
  }
  std::vector<std::vector<T>> pts;
  std::vector<T> vals;
  for (const auto& n : multi_indices(N, d - 1)) {
    pts.push_back(dual_linear_statistics(n, basis));
    vals.push_back(mvk_eval(n, x, basis) / multinomial_plus<T>(n));
  }
  std::vector<std::vector<int>> monos;
  for (const auto& m : multi_indices(N, d - 1)) monos.emplace_back(m.values().begin(), m.values().end());
  const std::vector<int> expected_mono(x.values().begin() + 1, x.values().end());
  const int deg = N - x[0];
  return detail::interpolate_structure<T>(pts, vals, monos, expected_mono,
                                          factorial<T>(x[0]) / factorial<T>(N), deg);
}

/// Reproducing kernel sum_{|n| = degree} C(N; n+)^{-1} Q_n(x) Q_n(y).
template <class T>
T reproducing_kernel(int degree, const Composition& x, const Composition& y, const Basis<T>& basis) {
  basis.require_orthonormal("reproducing kernel");
  if (x.total() != y.total()) throw DomainError("kernel arguments must have equal totals");
  const int N = x.total();
  if (degree < 0 || degree > N) throw DomainError("kernel degree outside [0, N]");
  T s(0);
  for (const auto& n : multi_indices_of_degree(N, basis.dim() - 1, degree)) {
    s += mvk_eval(n, x, basis) * mvk_eval(n, y, basis) / multinomial_plus<T>(n);
  }
  return s;
}

/// Expansion of (sum_j v_j)^{n_0} prod_i (sum_j v_j u_j^(i))^{n_i} as a map
/// from the exponent vector x of v to its coefficient,
/// which equals C(N; n+)^{-1} C(N; x) Q_n(x; u).
template <class T>
std::map<Composition, T> dual_gf_coefficients(const MultiIndex& n, const Basis<T>& basis) {
  const std::size_t d = basis.dim();
  if (n.size() + 1 != d) throw DomainError("multi-index length must be d - 1");
  const int N = n.total();
  auto s = MultiSeries<T>::simplex(d, N);
  const auto plus = n.plus();
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<T> c(d);
    for (std::size_t j = 0; j < d; ++j) c[j] = basis.u(i, j);
    for (int rep = 0; rep < plus[i]; ++rep) s.multiply_linear(T(0), c);
  }
  std::map<Composition, T> out;
  for (const auto& x : compositions(N, d)) out.emplace(x, s.coefficient(x.values()));
  return out;
}

/// The same coefficient from the explicit sum over d x d tables r with row
/// sums n+ and column sums x: sum prod n_i! / prod r_ij! prod_{i>=1} (u_j^(i))^{r_ij}.
template <class T>
T dual_gf_explicit(const MultiIndex& n, const Composition& x, const Basis<T>& basis) {
  const std::size_t d = basis.dim();
  const auto plus = n.plus();
  std::vector<int> col_left(x.values().begin(), x.values().end());
  T total(0);
  T row_factor(1);
  for (int v : plus) row_factor *= factorial<T>(v);
  auto rec = [&](auto&& self, std::size_t i, std::size_t j, int left, T term) -> void {
    if (i == d) {
      for (int c : col_left) {
        if (c != 0) return;
      }
      total += term;
      return;
    }
    if (j + 1 == d) {
      if (left > col_left[j]) return;
      col_left[j] -= left;
      const T f = (i == 0 ? T(1) : power(basis.u(i, j), left)) / factorial<T>(left);
      self(self, i + 1, 0, i + 1 < d ? plus[i + 1] : 0, term * f);
      col_left[j] += left;
      return;
    }
    for (int r = 0; r <= left && r <= col_left[j]; ++r) {
      col_left[j] -= r;
      const T f = (i == 0 ? T(1) : power(basis.u(i, j), r)) / factorial<T>(r);
      self(self, i, j + 1, left - r, term * f);
      col_left[j] += r;
    }
  };
  rec(rec, 0, 0, plus[0], row_factor);
  return total;
}

}  // namespace mvk

#endif  // MVK_MULTIVARIATE_HPP
