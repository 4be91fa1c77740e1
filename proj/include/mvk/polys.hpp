#ifndef MVK_POLYS_HPP
#define MVK_POLYS_HPP

// One-dimensional orthogonal polynomial families. Every evaluator extracts a
// coefficient from the family's generating function with truncated series
// arithmetic, so rational parameters give exact rational values.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mvk/combinatorics.hpp"
#include "mvk/error.hpp"
#include "mvk/scalar.hpp"
#include "mvk/series.hpp"

namespace mvk {

template <class T>
struct KrawtchoukParams {
  int N = 1;
  T p = T(1) / T(2);

  KrawtchoukParams() = default;
  KrawtchoukParams(int trials, T prob) : N(trials), p(std::move(prob)) {
    if (N < 0) throw DomainError("Krawtchouk: N must be nonnegative");
    if (!(p > T(0) && p < T(1))) throw DomainError("Krawtchouk: p must lie in (0,1)");
  }
  T q() const { return T(1) - p; }
};

template <class T>
struct MeixnerParams {
  T a;
  T q;
  MeixnerParams(T shape, T ratio) : a(std::move(shape)), q(std::move(ratio)) {
    if (!(a > T(0))) throw DomainError("Meixner: a must be positive");
    if (!(q > T(0) && q < T(1))) throw DomainError("Meixner: q must lie in (0,1)");
  }
};

template <class T>
struct CharlierParams {
  T nu;
  explicit CharlierParams(T rate) : nu(std::move(rate)) {
    if (!(nu > T(0))) throw DomainError("Poisson-Charlier: nu must be positive");
  }
};

template <class T>
struct LaguerreParams {
  T beta;
  explicit LaguerreParams(T shape) : beta(std::move(shape)) {
    if (!(beta > T(0))) throw DomainError("Laguerre: beta must be positive");
  }
};

template <class T>
struct DualHahnParams {
  T a;
  T b;
  int N;
  DualHahnParams(T urn_a, T urn_b, int tagged) : a(std::move(urn_a)), b(std::move(urn_b)), N(tagged) {
    if (N < 1) throw DomainError("dual Hahn: N must be positive");
    if (a < T(N) || b < T(N)) throw DomainError("dual Hahn: a and b must be >= N");
  }
};

template <class T>
using FamilyParams = std::variant<KrawtchoukParams<T>, MeixnerParams<T>, CharlierParams<T>,
                                  LaguerreParams<T>, DualHahnParams<T>>;

namespace detail {

template <class T>
T krawtchouk_unchecked(int n, int x, int N, const T& p) {
  const T q = T(1) - p;
  const auto g = Series<T>::linear_power(n, q, x) * Series<T>::linear_power(n, T(-p), N - x);
  return factorial<T>(n) * g[n];
}

/// Same series, any real argument.
template <class T>
T laguerre_any(int n, const T& x, const T& beta) {
  // x z / (1 - z) = x (z + z^2 + ...)
  Series<T> inner(n);
  for (int k = 1; k <= n; ++k) inner[k] = x;
  const auto g = Series<T>::negative_power_of_one_minus(n, beta) * inner.exp();
  return g[n];
}

inline void require_degree(int n) {
  if (n < 0) throw DomainError("polynomial degree must be nonnegative");
}

}  // namespace detail

/// K_n(x; N, p) = n! [z^n] (1 + q z)^x (1 - p z)^(N - x).
template <class T>
T krawtchouk(int n, int x, const KrawtchoukParams<T>& params) {
  if (n < 0 || n > params.N) throw DomainError("Krawtchouk: degree outside [0, N]");
  if (x < 0 || x > params.N) throw DomainError("Krawtchouk: argument outside [0, N]");
  return detail::krawtchouk_unchecked(n, x, params.N, params.p);
}

/// Squared norm n!^2 C(N, n) (pq)^n under the binomial(N, p) weight.
template <class T>
T krawtchouk_norm(int n, const KrawtchoukParams<T>& params) {
  if (n < 0 || n > params.N) throw DomainError("Krawtchouk: degree outside [0, N]");
  const T f = factorial<T>(n);
  return f * f * binomial<T>(params.N, n) * power(params.p * params.q(), n);
}

/// n! e_n(xi_1 - p, ..., xi_N - p) over a 0/1 trial sequence.
template <class T>
T krawtchouk_symmetric(int n, std::span<const int> trials, const T& p) {
  if (n < 0 || n > static_cast<int>(trials.size())) {
    throw DomainError("symmetric representation: degree outside [0, N]");
  }
  std::vector<T> e(static_cast<std::size_t>(n) + 1, T(0));
  e[0] = T(1);
  for (int xi : trials) {
    if (xi != 0 && xi != 1) throw DomainError("trial outcomes must be 0 or 1");
    const T centred = T(xi) - p;
    for (int k = n; k >= 1; --k) e[k] += centred * e[k - 1];
  }
  return factorial<T>(n) * e[n];
}

/// M_n(x; a, q) with sum_n M_n a_(n)/n! z^n = (1 - z/q)^x (1 - z)^(-x-a).
template <class T>
T meixner(int n, int x, const MeixnerParams<T>& params) {
  detail::require_degree(n);
  if (x < 0) throw DomainError("Meixner: argument must be a nonnegative integer");
  const auto g = Series<T>::linear_power(n, T(-1) / params.q, x) *
                 Series<T>::negative_power_of_one_minus(n, T(x) + params.a);
  return g[n] * factorial<T>(n) / rising(params.a, n);
}

/// C_n(z; nu) with sum_n C_n w^n / n! = e^w (1 - w/nu)^z.
template <class T>
T charlier(int n, int z, const CharlierParams<T>& params) {
  detail::require_degree(n);
  if (z < 0) throw DomainError("Poisson-Charlier: argument must be a nonnegative integer");
  const auto g = Series<T>::exponential(n, T(1)) * Series<T>::linear_power(n, T(-1) / params.nu, z);
  return g[n] * factorial<T>(n);
}

/// L_n^(beta-1)(x) from sum_n L_n z^n = (1 - z)^(-beta) exp{x z / (1 - z)}.
///
/// The exponent carries +x; the more common convention has -x, so this equals
/// the standard Laguerre polynomial evaluated at -x.
template <class T>
T laguerre(int n, const T& x, const LaguerreParams<T>& params) {
  detail::require_degree(n);
  if (x < T(0)) throw DomainError("Laguerre: argument must be nonnegative");
  return detail::laguerre_any(n, x, params.beta);
}

/// R_n(lambda(z); a, b, N) = 3F2(-n, -z, z - a - b - 1; -a, -N; 1).
template <class T>
T dual_hahn(int n, int z, const DualHahnParams<T>& params) {
  if (n < 0 || n > params.N) throw DomainError("dual Hahn: degree outside [0, N]");
  if (z < 0 || z > params.N) throw DomainError("dual Hahn: argument outside [0, N]");
  const T c = T(z) - params.a - params.b - T(1);
  T sum(0);
  T term(1);
  for (int k = 0; k <= std::min(n, z); ++k) {
    sum += term;
    if (k == std::min(n, z)) break;
    term *= T(k - n) * T(k - z) * (c + T(k));
    term /= (T(k) - params.a) * T(k - params.N) * T(k + 1);
  }
  return sum;
}

/// Evaluates any family at degree n and argument x (integer for the discrete families).
template <class T>
T evaluate(const FamilyParams<T>& family, int n, const T& x) {
  return std::visit(
      [&](const auto& prm) -> T {
        using P = std::decay_t<decltype(prm)>;
        if constexpr (std::is_same_v<P, LaguerreParams<T>>) {
          return laguerre(n, x, prm);
        } else {
          const int xi = static_cast<int>(as_integer(x));
          if constexpr (std::is_same_v<P, KrawtchoukParams<T>>) return krawtchouk(n, xi, prm);
          if constexpr (std::is_same_v<P, MeixnerParams<T>>) return meixner(n, xi, prm);
          if constexpr (std::is_same_v<P, CharlierParams<T>>) return charlier(n, xi, prm);
          if constexpr (std::is_same_v<P, DualHahnParams<T>>) return dual_hahn(n, xi, prm);
        }
      },
      family);
}

/// Smallest L with q^(L-n) C(L, n) < tol.
inline int default_geometric_truncation(int n, double q, double tol = 1e-6) {
  for (int L = std::max(n, 1);; ++L) {
    if (std::pow(q, L - n) * binomial<double>(L, n) < tol) return L;
    if (L > 100000) throw TruncationError("geometric truncation did not converge");
  }
}

/// Meixner polynomial on the geometric law expressed through the first L
/// Bernoulli trials:
///
///   M_n(X; 1, q) = sum_{l<=L} sum_{r<=l} K_{r-1}(X_{l-1}; l-1, p)/(r-1)!
///                    (xi_l - p) (-1)^(r-1) q^(l-r-1) M_{n-1}(l-1; 1, q)
///
/// where X_{l-1} counts successes before trial l and X is the number of
/// failures before the first success.
template <class T>
T meixner_geometric_representation(int n, std::span<const int> trials, const T& p,
                                   std::optional<int> truncation = std::nullopt) {
  if (n < 1) throw DomainError("geometric representation requires n >= 1");
  if (!(p > T(0) && p < T(1))) throw DomainError("geometric representation: p must lie in (0,1)");
  const T q = T(1) - p;
  int L = truncation ? *truncation : default_geometric_truncation(n, to_double(q));
  L = std::min<int>(L, static_cast<int>(trials.size()));
  bool success = false;
  for (int l = 0; l < L; ++l) {
    if (trials[l] != 0 && trials[l] != 1) throw DomainError("trial outcomes must be 0 or 1");
    success = success || trials[l] == 1;
  }
  if (!success) throw TruncationError("no success within the first L trials");

  const MeixnerParams<T> geometric(T(1), q);
  T total(0);
  int successes_before = 0;
  for (int l = 1; l <= L; ++l) {
    const T centred = T(trials[l - 1]) - p;
    if (centred != T(0)) {
      const T tail = centred * meixner(n - 1, l - 1, geometric);
      T inner(0);
      for (int r = 1; r <= l; ++r) {
        const T e = detail::krawtchouk_unchecked(r - 1, successes_before, l - 1, p) / factorial<T>(r - 1);
        const T sign = (r - 1) % 2 == 0 ? T(1) : T(-1);
        inner += e * sign * power(q, l - r - 1);
      }
      total += inner * tail;
    }
    successes_before += trials[l - 1];
  }
  return total;
}

}  // namespace mvk

#endif  // MVK_POLYS_HPP
