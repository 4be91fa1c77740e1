#ifndef MVK_BIRTH_DEATH_HPP
#define MVK_BIRTH_DEATH_HPP

#include <functional>
#include <optional>
#include <string>

#include "mvk/error.hpp"
#include "mvk/scalar.hpp"

namespace mvk {

enum class Family { MMInfinity, LinearBDP, TwoUrn, Ehrenfest, Custom };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::MMInfinity: return "mm-infinity";
    case Family::LinearBDP: return "linear";
    case Family::TwoUrn: return "two-urn";
    case Family::Ehrenfest: return "ehrenfest";
    case Family::Custom: return "custom";
  }
  return "?";
}

/// Sign of lambda - mu for the linear process.
enum class LinearRegime { Subcritical, Supercritical, Critical };

/// Birth-death rates on {0, 1, ...} with mu_0 = 0 and a family tag.
///
///   mm-infinity  lambda_n = lambda,            mu_n = n mu
///   linear       lambda_n = (n + beta) lambda, mu_n = n mu
///   two-urn      lambda_n = (N - n)(a - n),    mu_n = n (b - (N - n)),  n <= N
///   ehrenfest    lambda_n = (N - n) p,         mu_n = n q,              n <= N
template <class T>
struct BirthDeathSpec {
  Family family = Family::Custom;
  T lambda{}, mu{}, beta{};
  T a{}, b{};
  T p{};
  int N = 0;
  std::function<T(int)> custom_birth, custom_death;
  std::optional<int> custom_bound;

  static BirthDeathSpec mm_infinity(T lambda, T mu) {
    if (!(lambda > T(0)) || !(mu > T(0))) throw DomainError("M/M/inf: rates must be positive");
    BirthDeathSpec s;
    s.family = Family::MMInfinity;
    s.lambda = std::move(lambda);
    s.mu = std::move(mu);
    return s;
  }

  static BirthDeathSpec linear(T lambda, T mu, T beta) {
    if (!(lambda > T(0)) || !(mu > T(0)) || !(beta > T(0))) {
      throw DomainError("linear process: lambda, mu, beta must be positive");
    }
    BirthDeathSpec s;
    s.family = Family::LinearBDP;
    s.lambda = std::move(lambda);
    s.mu = std::move(mu);
    s.beta = std::move(beta);
    return s;
  }

  static BirthDeathSpec two_urn(T a, T b, int N) {
    if (N < 1) throw DomainError("two-urn: N must be positive");
    if (a < T(N) || b < T(N)) throw DomainError("two-urn: need a, b >= N");
    BirthDeathSpec s;
    s.family = Family::TwoUrn;
    s.a = std::move(a);
    s.b = std::move(b);
    s.N = N;
    return s;
  }

  static BirthDeathSpec ehrenfest(int N, T p) {
    if (N < 1) throw DomainError("Ehrenfest: N must be positive");
    if (!(p > T(0) && p < T(1))) throw DomainError("Ehrenfest: p must lie in (0,1)");
    BirthDeathSpec s;
    s.family = Family::Ehrenfest;
    s.N = N;
    s.p = std::move(p);
    return s;
  }

  static BirthDeathSpec custom(std::function<T(int)> birth, std::function<T(int)> death,
                               std::optional<int> bound = std::nullopt) {
    if (!birth || !death) throw ValidationError("custom process needs both rate functions");
    if (death(0) != T(0)) throw ValidationError("mu_0 must be 0");
    BirthDeathSpec s;
    s.custom_birth = std::move(birth);
    s.custom_death = std::move(death);
    s.custom_bound = bound;
    return s;
  }

  /// Largest state, or nullopt on {0, 1, ...}.
  std::optional<int> bound() const {
    switch (family) {
      case Family::TwoUrn:
      case Family::Ehrenfest: return N;
      case Family::Custom: return custom_bound;
      default: return std::nullopt;
    }
  }

  bool in_range(int n) const { return n >= 0 && (!bound() || n <= *bound()); }

  T birth(int n) const {
    if (!in_range(n)) return T(0);
    switch (family) {
      case Family::MMInfinity: return lambda;
      case Family::LinearBDP: return (T(n) + beta) * lambda;
      case Family::TwoUrn: return T(N - n) * (a - T(n));
      case Family::Ehrenfest: return T(N - n) * p;
      case Family::Custom: return custom_birth(n);
    }
    return T(0);
  }

  T death(int n) const {
    if (!in_range(n) || n == 0) return T(0);
    switch (family) {
      case Family::MMInfinity: return T(n) * mu;
      case Family::LinearBDP: return T(n) * mu;
      case Family::TwoUrn: return T(n) * (b - T(N - n));
      case Family::Ehrenfest: return T(n) * (T(1) - p);
      case Family::Custom: return custom_death(n);
    }
    return T(0);
  }

  LinearRegime regime() const {
    if (family != Family::LinearBDP) throw DomainError("regime is defined for the linear process only");
    if (lambda < mu) return LinearRegime::Subcritical;
    if (lambda > mu) return LinearRegime::Supercritical;
    return LinearRegime::Critical;
  }
};

/// pi_j = lambda_0 ... lambda_{j-1} / (mu_1 ... mu_j).
template <class T>
T pi_weight(const BirthDeathSpec<T>& spec, int j) {
  if (!spec.in_range(j)) throw DomainError("state outside the state space");
  T r(1);
  for (int k = 0; k < j; ++k) {
    const T m = spec.death(k + 1);
    if (m == T(0)) throw DomainError("pi weights need mu_k > 0 for k >= 1");
    r *= spec.birth(k) / m;
  }
  return r;
}

/// Q_n(z) from -z Q_n = -(lambda_n + mu_n) Q_n + lambda_n Q_{n+1} + mu_n Q_{n-1}, Q_0 = 1, Q_{-1} = 0.
template <class T>
T recurrence_eval(const BirthDeathSpec<T>& spec, int n, const T& z) {
  if (n < 0) throw DomainError("degree must be nonnegative");
  T prev(0), cur(1);
  for (int k = 0; k < n; ++k) {
    const T lam = spec.birth(k);
    if (lam == T(0)) throw ValidationError("lambda_" + std::to_string(k) + " = 0 below the requested degree");
    const T next = ((spec.birth(k) + spec.death(k) - z) * cur - spec.death(k) * prev) / lam;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace mvk

#endif  // MVK_BIRTH_DEATH_HPP
