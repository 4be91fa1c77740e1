#ifndef MVK_SPECTRAL_HPP
#define MVK_SPECTRAL_HPP

// Karlin-McGregor spectral data for the named birth-death families:
//
//   p_ij(t) = pi_j int e^{-zt} Q_i(z) Q_j(z) psi(dz).

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "mvk/birth_death.hpp"
#include "mvk/combinatorics.hpp"
#include "mvk/error.hpp"
#include "mvk/linalg.hpp"
#include "mvk/polys.hpp"
#include "mvk/quadrature.hpp"
#include "mvk/scalar.hpp"

namespace mvk {

enum class SpectrumKind { Discrete, Continuous };

/// Support points zeta_l, masses psi({zeta_l}) and Q_n(zeta_l) for a named
/// family, normalized so that Q_n(0) = 1.
///
///   mm-infinity       zeta_l = mu l,                psi Poisson(lambda/mu),   Q_n = C_n(l; lambda/mu)
///   linear, l < m     zeta_l = (mu - lambda) l,     psi NegBin(beta, r),      Q_n = M_n(l; beta, r),  r = lambda/mu
///   linear, l > m     zeta_l = (l + beta)(lambda - mu), psi NegBin(beta, s),  Q_n = s^n M_n(l; beta, s), s = mu/lambda
///   linear, l = m     gamma(beta, scale lambda) density, Q_n = n!/beta_(n) L_n(-z/lambda)
///   two-urn           zeta_l = l (a + b + 1 - l),   dual Hahn weight,         Q_n = R_n(lambda(l))
///   ehrenfest         zeta_l = l,                   psi Binomial(N, p),       Q_n = K_n(l) / K_n(0)
template <class T>
class SpectralData {
 public:
  explicit SpectralData(BirthDeathSpec<T> spec) : spec_(std::move(spec)) {
    if (spec_.family == Family::Custom) {
      throw UnsupportedError("custom rates have no closed-form spectrum; use recurrence_eval");
    }
    if (spec_.family == Family::LinearBDP) regime_ = spec_.regime();
  }

  const BirthDeathSpec<T>& spec() const { return spec_; }

  SpectrumKind kind() const {
    return spec_.family == Family::LinearBDP && regime_ == LinearRegime::Critical ? SpectrumKind::Continuous
                                                                                  : SpectrumKind::Discrete;
  }

  /// Number of atoms when finite.
  std::optional<int> support_size() const {
    if (spec_.family == Family::TwoUrn || spec_.family == Family::Ehrenfest) return spec_.N + 1;
    return std::nullopt;
  }

  /// Whether a stationary distribution exists (equivalently zeta_0 = 0).
  bool stationary() const {
    return !(spec_.family == Family::LinearBDP && regime_ != LinearRegime::Subcritical);
  }

  T point(int l) const {
    require_discrete(l);
    const auto& s = spec_;
    switch (s.family) {
      case Family::MMInfinity: return s.mu * T(l);
      case Family::LinearBDP:
        return regime_ == LinearRegime::Subcritical ? (s.mu - s.lambda) * T(l) : (T(l) + s.beta) * (s.lambda - s.mu);
      case Family::TwoUrn: return T(l) * (s.a + s.b + T(1) - T(l));
      case Family::Ehrenfest: return T(l);
      default: break;
    }
    return T(0);
  }

  T mass(int l) const {
    require_discrete(l);
    const auto& s = spec_;
    switch (s.family) {
      case Family::MMInfinity: {
        const T nu = s.lambda / s.mu;
        if constexpr (!is_exact_v<T>) {
          return std::exp(-nu + l * std::log(nu) - std::lgamma(l + 1.0));
        } else {
          return exp_of(T(-nu)) * power(nu, l) / factorial<T>(l);
        }
      }
      case Family::LinearBDP: {
        const T r = regime_ == LinearRegime::Subcritical ? s.lambda / s.mu : s.mu / s.lambda;
        if constexpr (!is_exact_v<T>) {
          return std::exp(s.beta * std::log1p(-r) + std::lgamma(s.beta + l) - std::lgamma(s.beta) -
                          std::lgamma(l + 1.0) + l * std::log(r));
        } else {
          return pow_of(T(T(1) - r), s.beta) * rising(s.beta, l) / factorial<T>(l) * power(r, l);
        }
      }
      case Family::TwoUrn: {
        // C(N-b-1, N) N! N_[z] a_[z] (2z-a-b-1) / (z! b_[z] (z-a-b-1)_(N+1))
        const T z(l);
        const T num = general_binomial(T(T(s.N) - s.b - T(1)), s.N) * factorial<T>(s.N) * falling(T(s.N), l) *
                      falling(s.a, l) * (T(2) * z - s.a - s.b - T(1));
        const T den = factorial<T>(l) * falling(s.b, l) * rising(T(z - s.a - s.b - T(1)), s.N + 1);
        return num / den;
      }
      case Family::Ehrenfest:
        return binomial<T>(s.N, l) * power(s.p, l) * power(T(T(1) - s.p), s.N - l);
      default: break;
    }
    return T(0);
  }

  /// Q_n(zeta_l).
  T poly(int n, int l) const {
    require_discrete(l);
    const auto& s = spec_;
    switch (s.family) {
      case Family::MMInfinity: return charlier(n, l, CharlierParams<T>(s.lambda / s.mu));
      case Family::LinearBDP:
        if (regime_ == LinearRegime::Subcritical) return meixner(n, l, MeixnerParams<T>(s.beta, s.lambda / s.mu));
        return power(T(s.mu / s.lambda), n) * meixner(n, l, MeixnerParams<T>(s.beta, s.mu / s.lambda));
      case Family::TwoUrn:
        if (n > s.N) throw DomainError("degree beyond the state space");
        return dual_hahn(n, l, DualHahnParams<T>(s.a, s.b, s.N));
      case Family::Ehrenfest: {
        if (n > s.N) throw DomainError("degree beyond the state space");
        const KrawtchoukParams<T> k(s.N, s.p);
        return krawtchouk(n, l, k) / krawtchouk(n, 0, k);
      }
      default: break;
    }
    return T(0);
  }

  /// Sum of the absolute contributions to Q_n(zeta_l): the same coefficient
  /// with every generating-function factor replaced by its absolute series.
  /// Rounding in Q_n(zeta_l) is at most a small multiple of eps times this.
  double poly_magnitude(int n, int l) const {
    require_discrete(l);
    const auto& s = spec_;
    using S = Series<double>;
    switch (s.family) {
      case Family::MMInfinity: {
        const double nu = to_double(T(s.lambda / s.mu));
        return std::tgamma(n + 1.0) * (S::exponential(n, 1.0) * S::linear_power(n, 1.0 / nu, l))[n];
      }
      case Family::LinearBDP: {
        const bool sub = regime_ == LinearRegime::Subcritical;
        const double q = to_double(sub ? T(s.lambda / s.mu) : T(s.mu / s.lambda)), a = to_double(s.beta);
        const double m = (S::linear_power(n, 1.0 / q, l) * S::negative_power_of_one_minus(n, l + a))[n] *
                         std::exp(std::lgamma(n + 1.0) + std::lgamma(a) - std::lgamma(a + n));
        return sub ? m : std::pow(q, n) * m;
      }
      default: break;
    }
    return std::abs(to_double(poly(n, l)));
  }

  /// Continuous case: Q_n(z) at any z >= 0.
  T poly_at(int n, const T& z) const {
    require_continuous();
    return factorial<T>(n) / rising(spec_.beta, n) * detail::laguerre_any(n, T(-z / spec_.lambda), spec_.beta);
  }

  /// Continuous case: gamma shape beta and scale lambda.
  T gamma_shape() const {
    require_continuous();
    return spec_.beta;
  }
  T gamma_scale() const {
    require_continuous();
    return spec_.lambda;
  }

  /// z^{beta-1} e^{-z/lambda} / (lambda^beta Gamma(beta)).
  double density(double z) const {
    require_continuous();
    const double b = to_double(spec_.beta), lam = to_double(spec_.lambda);
    if (z <= 0) return 0.0;
    return std::exp((b - 1) * std::log(z) - z / lam - b * std::log(lam) - std::lgamma(b));
  }

 private:
  void require_discrete(int l) const {
    if (kind() != SpectrumKind::Discrete) throw UnsupportedError("continuous spectrum has no atoms");
    if (l < 0 || (support_size() && l >= *support_size())) throw DomainError("support index out of range");
  }
  void require_continuous() const {
    if (kind() != SpectrumKind::Continuous) throw UnsupportedError("spectrum is discrete");
  }

  BirthDeathSpec<T> spec_;
  LinearRegime regime_ = LinearRegime::Subcritical;
};

template <class T>
SpectralData<T> spectral_data(const BirthDeathSpec<T>& spec) {
  return SpectralData<T>(spec);
}

struct KmControl {
  /// Target bound for the neglected part of an infinite spectral sum.
  double tol = 1e-13;
  /// Absolute rounding bound above which a value is flagged (relative 1e-8 also allowed).
  double rounding_tol = 1e-10;
  int block = 10;
  int max_terms = 20000;
  int quadrature_nodes = 64;
};

template <class T>
struct KmResult {
  T value{};
  /// Estimated neglected mass (0 for finite sums and quadrature).
  double tail_estimate = 0.0;
  int terms = 0;
  /// eps pi_j sum_l |weight_l| |Q_i|~ |Q_j|~, with |Q|~ the absolute-series
  /// magnitude of each polynomial value: a rounding bound for the sum.
  /// Far states of an infinite family can lose every digit to cancellation.
  double rounding_estimate = 0.0;
  /// Set when no geometric decay was observed before max_terms, or when the
  /// rounding estimate exceeds the larger of rounding_tol and 1e-8 |value|.
  bool flagged = false;
};

/// p_ij(t) by the spectral sum, or by quadrature for a continuous spectrum.
///
/// Infinite sums are cut in blocks of `block` terms; once three blocks show
/// geometric decay the remainder is bounded by the fitted ratio.
template <class T>
KmResult<T> km_transition(const SpectralData<T>& data, int i, int j, const T& t, const KmControl& ctl = {}) {
  if (t < T(0)) throw DomainError("time must be nonnegative");
  const auto& spec = data.spec();
  if (!spec.in_range(i) || !spec.in_range(j)) throw DomainError("state outside the state space");
  const T pij = pi_weight(spec, j);
  KmResult<T> out;
  if (data.kind() == SpectrumKind::Continuous) {
    if constexpr (is_exact_v<T>) {
      throw UnsupportedError("quadrature needs floating point");
    } else {
      // z = lambda s, r = s (1 + lambda t): weight r^{beta-1} e^{-r} / Gamma(beta)
      const double lam = data.gamma_scale(), beta = data.gamma_shape();
      const double c = 1.0 + lam * t;
      const auto rule = gauss_laguerre(ctl.quadrature_nodes, beta - 1.0);
      double s = 0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double z = lam * rule.nodes[k] / c;
        s += rule.weights[k] * data.poly_at(i, z) * data.poly_at(j, z);
      }
      out.value = pij * std::pow(c, -beta) * s;
      out.terms = ctl.quadrature_nodes;
      return out;
    }
  }
  // value and rounding magnitude of one spectral term
  auto term = [&](int l, double& mag) -> T {
    const T w = exp_of(T(-data.point(l) * t)) * data.mass(l);
    if constexpr (!is_exact_v<T>) mag = std::abs(w) * data.poly_magnitude(i, l) * data.poly_magnitude(j, l);
    return w * data.poly(i, l) * data.poly(j, l);
  };
  constexpr double eps = is_exact_v<T> ? 0.0 : std::numeric_limits<double>::epsilon();
  double magnitude = 0;
  if (auto size = data.support_size()) {
    T s(0);
    for (int l = 0; l < *size; ++l) {
      double mag = 0;
      s += term(l, mag);
      magnitude += mag;
    }
    out.value = pij * s;
    out.terms = *size;
    out.rounding_estimate = eps * magnitude * std::abs(to_double(pij));
    return out;
  }
  T s(0);
  std::vector<double> blocks;
  int l = 0;
  out.flagged = true;
  while (l < ctl.max_terms) {
    double b = 0;
    for (int k = 0; k < ctl.block; ++k, ++l) {
      double mag = 0;
      const T v = term(l, mag);
      s += v;
      b += std::abs(to_double(v));
      magnitude += mag;
    }
    blocks.push_back(b);
    const std::size_t m = blocks.size();
    if (m < 3) continue;
    if (blocks[m - 1] == 0.0) {
      out.tail_estimate = 0.0;
      out.flagged = false;
      break;
    }
    const double r1 = blocks[m - 2] > 0 ? blocks[m - 1] / blocks[m - 2] : 0.0;
    const double r0 = blocks[m - 3] > 0 ? blocks[m - 2] / blocks[m - 3] : 0.0;
    if (r1 < 1.0 && r0 < 1.0) {
      const double tail = blocks[m - 1] * r1 / (1.0 - r1);
      out.tail_estimate = tail * std::abs(to_double(pij));
      if (tail <= ctl.tol) {
        out.flagged = false;
        break;
      }
    } else {
      out.tail_estimate = std::numeric_limits<double>::infinity();
    }
  }
  out.value = pij * s;
  out.terms = l;
  out.rounding_estimate = eps * magnitude * std::abs(to_double(pij));
  if (out.rounding_estimate > std::max(ctl.rounding_tol, 1e-8 * std::abs(to_double(out.value)))) out.flagged = true;
  return out;
}

/// First `count` stationary probabilities p_j = pi_j psi({0}), or nullopt when
/// sum_k pi_k diverges.
template <class T>
std::optional<std::vector<T>> stationary_distribution(const BirthDeathSpec<T>& spec, int count) {
  const SpectralData<T> data(spec);
  if (!data.stationary()) return std::nullopt;
  const T psi0 = data.mass(0);
  int n = count;
  if (auto b = spec.bound()) n = std::min(n, *b + 1);
  std::vector<T> out;
  out.reserve(n);
  for (int j = 0; j < n; ++j) out.push_back(pi_weight(spec, j) * psi0);
  return out;
}

enum class EigenForm {
  /// u_i^(l) = Q_i(zeta_l) sqrt(psi_l / psi_0); orthonormal on the stationary law.
  Stationary,
  /// u_i^(l) = Q_i(zeta_l) sqrt(psi_l); orthonormal on pi.
  General
};

/// Eigenfunction table kept in factored form: u_i^(l) = q[l][i] sqrt(scale_sq[l]).
template <class T>
struct EigenTable {
  EigenForm form;
  Matrix<T> q;
  std::vector<T> scale_sq;
  /// p_i (stationary form) or pi_i (general form).
  std::vector<T> weights;

  std::size_t functions() const { return q.size(); }
  std::size_t states() const { return weights.size(); }

  /// u[l][i]; exact mode requires every scale to be a perfect square.
  Matrix<T> u() const {
    Matrix<T> out = q;
    for (std::size_t l = 0; l < q.size(); ++l) {
      const T s = sqrt_of(scale_sq[l]);
      for (auto& v : out[l]) v *= s;
    }
    return out;
  }

  /// max_{k,l} |G_kl^2 s_k s_l - delta_kl| with G_kl = sum_i q_k(i) q_l(i) w_i:
  /// zero exactly when the table is orthonormal, without square roots.
  T orthonormality_defect() const {
    T worst(0);
    for (std::size_t k = 0; k < q.size(); ++k) {
      for (std::size_t l = 0; l < q.size(); ++l) {
        T g(0);
        for (std::size_t i = 0; i < weights.size(); ++i) g += q[k][i] * q[l][i] * weights[i];
        const T d = abs_of(T(g * g * scale_sq[k] * scale_sq[l] - (k == l ? T(1) : T(0))));
        if (d > worst) worst = d;
      }
    }
    return worst;
  }
};

/// Eigenfunctions on `functions` spectral points and `states` states (both
/// capped at the support size for finite families).
template <class T>
EigenTable<T> spectral_eigenfunctions(const SpectralData<T>& data, EigenForm form, int functions, int states) {
  if (data.kind() != SpectrumKind::Discrete) throw UnsupportedError("eigenfunction tables need a discrete spectrum");
  if (auto n = data.support_size()) {
    functions = std::min(functions, *n);
    states = std::min(states, *n);
  }
  if (functions < 1 || states < 1) throw DomainError("eigenfunction table needs at least one row and column");
  const T psi0 = data.mass(0);
  if (form == EigenForm::Stationary && (!data.stationary() || psi0 == T(0))) {
    throw DomainError("stationary eigenfunction form needs psi({0}) > 0 at zeta_0 = 0");
  }
  EigenTable<T> out{form, Matrix<T>(functions, std::vector<T>(states)), std::vector<T>(functions),
                    std::vector<T>(states)};
  for (int l = 0; l < functions; ++l) {
    out.scale_sq[l] = form == EigenForm::Stationary ? data.mass(l) / psi0 : data.mass(l);
    for (int i = 0; i < states; ++i) out.q[l][i] = data.poly(i, l);
  }
  for (int i = 0; i < states; ++i) {
    const T pi = pi_weight(data.spec(), i);
    out.weights[i] = form == EigenForm::Stationary ? pi * psi0 : pi;
  }
  return out;
}

}  // namespace mvk

#endif  // MVK_SPECTRAL_HPP
