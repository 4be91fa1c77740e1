#ifndef MVK_COMPOSITION_HPP
#define MVK_COMPOSITION_HPP

// N independent birth-death particles observed through their occupancy
// counts x_0, x_1, ... (levels indexed from 0), and the d-type Ehrenfest urn.

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "mvk/basis.hpp"
#include "mvk/birth_death.hpp"
#include "mvk/combinatorics.hpp"
#include "mvk/error.hpp"
#include "mvk/linalg.hpp"
#include "mvk/multivariate.hpp"
#include "mvk/polys.hpp"
#include "mvk/series.hpp"
#include "mvk/spectral.hpp"

namespace mvk {

template <class T>
struct CompositionProcess {
  BirthDeathSpec<T> base;
  int N = 1;
  /// Occupancy categories 0..levels-1.
  int levels = 0;

  CompositionProcess(BirthDeathSpec<T> b, int particles, std::optional<int> truncation = std::nullopt)
      : base(std::move(b)), N(particles) {
    if (N < 1) throw DomainError("composition process needs N >= 1");
    if (auto bound = base.bound()) {
      levels = *bound + 1;
    } else if (truncation) {
      levels = *truncation;
    } else {
      throw DomainError("infinite state space needs a level truncation");
    }
    if (levels < 1) throw DomainError("level truncation must be positive");
  }

  bool truncated() const { return !base.bound(); }
};

template <class T>
struct Transition {
  /// Empty when the move leaves the level truncation.
  Composition target;
  T rate;
  bool overflow = false;
};

/// x -> x + e_{j+1} - e_j at rate x_j lambda_j and x -> x + e_{j-1} - e_j at rate x_j mu_j.
template <class T>
std::vector<Transition<T>> composition_rates(const Composition& x, const CompositionProcess<T>& proc) {
  if (static_cast<int>(x.size()) != proc.levels) throw DomainError("composition length differs from level count");
  if (x.total() != proc.N) throw DomainError("composition total differs from N");
  std::vector<Transition<T>> out;
  for (int j = 0; j < proc.levels; ++j) {
    if (x[j] == 0) continue;
    const T up = T(x[j]) * proc.base.birth(j);
    if (up != T(0)) {
      if (j + 1 < proc.levels) {
        out.push_back({x.moved(j, j + 1), up, false});
      } else {
        out.push_back({Composition(std::vector<int>{}), up, true});
      }
    }
    const T down = T(x[j]) * proc.base.death(j);
    if (down != T(0)) out.push_back({x.moved(j, j - 1), down, false});
  }
  return out;
}

/// C(N; x) prod_j w_j^{x_j} for any weights (pi, p or psi).
template <class T>
T multinomial_weight(std::span<const int> x, std::span<const T> w) {
  T r = multinomial<T>(x);
  for (std::size_t j = 0; j < x.size(); ++j) r *= power(w[j], x[j]);
  return r;
}

/// m~(x; pi) = C(N; x) prod_j pi_j^{x_j}.
template <class T>
T composition_reversing_weight(const Composition& x, const BirthDeathSpec<T>& spec) {
  std::vector<T> pi(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) pi[j] = pi_weight(spec, static_cast<int>(j));
  return multinomial_weight<T>(x.values(), pi);
}

enum class ExpansionForm { Auto, Stationary, General };

struct CompositionControl {
  ExpansionForm form = ExpansionForm::Auto;
  /// Spectral points kept for an infinite spectrum (default: level count).
  std::optional<int> spectral_points;
  KmControl km;
};

template <class T>
struct CompositionResult {
  T value{};
  /// Whether level or spectral truncation was applied.
  bool truncated = false;
  ExpansionForm form = ExpansionForm::Stationary;
};

namespace detail {

inline int spectral_count(const std::optional<int>& support, int levels, const CompositionControl& ctl) {
  if (support) return *support;
  return ctl.spectral_points.value_or(levels);
}

}  // namespace detail

/// Eigen-expansion of p(x, y; t).
///
/// Stationary form: m(y; p) {1 + sum_{0<|n|<=N} e^{-t sum n_i zeta_i} C(N; n+)^{-1} Q_n(x; u) Q_n(y; u)}
///   with u_i^(l) = Q_i(zeta_l) sqrt(psi_l / psi_0).
/// General form: m~(y; pi) sum_{0<=|n|<=N} e^{-t sum_{i>=0} n_i zeta_i} C(N; n+)^{-1} Q_n(x; u) Q_n(y; u)
///   with u_i^(l) = Q_i(zeta_l) sqrt(psi_l), n_0 = N - |n|.
template <class T>
CompositionResult<T> composition_transition(const Composition& x, const Composition& y, const T& t,
                                            const CompositionProcess<T>& proc, const CompositionControl& ctl = {}) {
  if (t < T(0)) throw DomainError("time must be nonnegative");
  const SpectralData<T> data(proc.base);
  if (data.kind() != SpectrumKind::Discrete) {
    throw UnsupportedError("composition transition needs a discrete spectrum");
  }
  for (const auto* c : {&x, &y}) {
    if (static_cast<int>(c->size()) != proc.levels || c->total() != proc.N) {
      throw DomainError("composition does not match the process");
    }
  }
  ExpansionForm form = ctl.form;
  if (form == ExpansionForm::Auto) form = data.stationary() ? ExpansionForm::Stationary : ExpansionForm::General;
  const int L = detail::spectral_count(data.support_size(), proc.levels, ctl);
  const auto table = spectral_eigenfunctions(
      data, form == ExpansionForm::Stationary ? EigenForm::Stationary : EigenForm::General, L, proc.levels);
  // u_i^(l) = q_l(i) sqrt(s_l), so Q_n(x; u) Q_n(y; u) = prod_l s_l^{n_l} (over n+) times the q coefficients.
  const int Lk = static_cast<int>(table.functions());

  T sum(0);
  for (const auto& n : multi_indices(proc.N, static_cast<std::size_t>(Lk - 1))) {
    T rate(0);
    for (int i = 1; i < Lk; ++i) rate += T(n[i - 1]) * data.point(i);
    T scale = power(table.scale_sq[0], n.n0());
    if (form == ExpansionForm::General) rate += T(n.n0()) * data.point(0);
    for (int i = 1; i < Lk; ++i) scale *= power(table.scale_sq[i], n[i - 1]);
    const T qx = detail::gf_coefficient(n.values(), x.values(), table.q);
    const T qy = detail::gf_coefficient(n.values(), y.values(), table.q);
    sum += exp_of(T(-rate * t)) * scale * qx * qy / multinomial_plus<T>(n);
  }
  CompositionResult<T> out;
  out.form = form;
  out.truncated = proc.truncated() || !data.support_size();
  out.value = multinomial_weight<T>(y.values(), table.weights) * sum;
  return out;
}

/// Single-particle transition matrix p_ij(t) on the kept levels.
template <class T>
Matrix<T> single_particle_matrix(const CompositionProcess<T>& proc, const T& t, const KmControl& km = {}) {
  const SpectralData<T> data(proc.base);
  Matrix<T> P(proc.levels, std::vector<T>(proc.levels));
  for (int i = 0; i < proc.levels; ++i) {
    for (int j = 0; j < proc.levels; ++j) P[i][j] = km_transition(data, i, j, t, km).value;
  }
  return P;
}

/// Coefficients of prod_i (sum_j P_ij s_j)^{x_i}, keyed by the exponent of s.
template <class T>
std::map<Composition, T> product_form_distribution(const Composition& x, const Matrix<T>& P) {
  std::map<std::vector<int>, T> cur{{std::vector<int>(P.front().size(), 0), T(1)}};
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (int rep = 0; rep < x[i]; ++rep) {
      std::map<std::vector<int>, T> next;
      for (const auto& [e, c] : cur) {
        for (std::size_t j = 0; j < P[i].size(); ++j) {
          if (P[i][j] == T(0)) continue;
          auto f = e;
          ++f[j];
          next[f] += c * P[i][j];
        }
      }
      cur = std::move(next);
    }
  }
  std::map<Composition, T> out;
  for (auto& [e, c] : cur) out.emplace(Composition(e), c);
  return out;
}

/// p(x, y; t) as the coefficient of prod s_j^{y_j} in prod_i (sum_j p_ij(t) s_j)^{x_i}.
template <class T>
T product_form_oracle(const Composition& x, const Composition& y, const T& t, const CompositionProcess<T>& proc,
                      const KmControl& km = {}) {
  if (proc.N > 6 || proc.levels > 40) throw ScaleError("product-form oracle limited to N <= 6, 40 levels");
  const auto dist = product_form_distribution(x, single_particle_matrix(proc, t, km));
  const auto it = dist.find(y);
  return it == dist.end() ? T(0) : it->second;
}

/// Dual spectral form
///   m~(y; pi) sum_nu e^{-t sum nu_i zeta_i} QQ_x(nu) QQ_y(nu) m~(nu; psi),
/// where C(N; x) QQ_x(nu) is the coefficient of prod v^x in prod_l (sum_j Q_j(zeta_l) v_j)^{nu_l}.
template <class T>
CompositionResult<T> dual_spectral_form(const Composition& x, const Composition& y, const T& t,
                                        const CompositionProcess<T>& proc, const CompositionControl& ctl = {}) {
  if (t < T(0)) throw DomainError("time must be nonnegative");
  const SpectralData<T> data(proc.base);
  if (data.kind() != SpectrumKind::Discrete) throw UnsupportedError("dual spectral form needs a discrete spectrum");
  const int L = detail::spectral_count(data.support_size(), proc.levels, ctl);
  const int S = proc.levels;
  Matrix<T> q(L, std::vector<T>(S));
  std::vector<T> psi(L);
  for (int l = 0; l < L; ++l) {
    psi[l] = data.mass(l);
    for (int j = 0; j < S; ++j) q[l][j] = data.poly(j, l);
  }
  auto dual = [&](const Composition& z, const Composition& nu) {
    auto s = MultiSeries<T>::box(z.values());
    for (int l = 0; l < L; ++l) {
      for (int rep = 0; rep < nu[l]; ++rep) s.multiply_linear(T(0), q[l]);
    }
    return s.coefficient(z.values()) / multinomial<T>(z.values());
  };
  T sum(0);
  for (const auto& nu : compositions(proc.N, static_cast<std::size_t>(L))) {
    T rate(0);
    for (int l = 0; l < L; ++l) rate += T(nu[l]) * data.point(l);
    sum += exp_of(T(-rate * t)) * dual(x, nu) * dual(y, nu) * multinomial_weight<T>(nu.values(), psi);
  }
  CompositionResult<T> out;
  out.form = ExpansionForm::General;
  out.truncated = proc.truncated() || !data.support_size();
  out.value = composition_reversing_weight(y, proc.base) * sum;
  return out;
}

/// Two-colour Ehrenfest urn: x, y red balls out of N, stationary Binomial(N, p),
/// decay rate lambda = 1 / (N p) per degree.
template <class T>
T ehrenfest_two_color(int x, int y, const T& t, int N, const T& p) {
  if (x < 0 || x > N || y < 0 || y > N) throw DomainError("state outside [0, N]");
  if (t < T(0)) throw DomainError("time must be nonnegative");
  const KrawtchoukParams<T> k(N, p);
  const T q = T(1) - p;
  const T lam = T(1) / (T(N) * p);
  T s(1);
  for (int n = 1; n <= N; ++n) {
    const T f = factorial<T>(n);
    s += exp_of(T(-lam * T(n) * t)) / power(T(p * q), n) / (f * f) / binomial<T>(N, n) * krawtchouk(n, x, k) *
         krawtchouk(n, y, k);
  }
  return binomial<T>(N, y) * power(p, y) * power(q, N - y) * s;
}

/// d-type Ehrenfest urn: colours change j -> l at rate (x_j / N) p_jl with
/// p_jl = p_l (1 + sum_i rho_i u_j^(i) u_l^(i)).
template <class T>
struct UrnSpec {
  Basis<T> basis;
  std::vector<T> rho;
  int N;
  Matrix<T> P;

  UrnSpec(Basis<T> b, std::vector<T> r, int balls, double tol = 1e-12)
      : basis(std::move(b)), rho(std::move(r)), N(balls) {
    const std::size_t d = basis.dim();
    if (N < 1) throw DomainError("urn needs N >= 1");
    if (rho.size() + 1 != d) throw ValidationError("urn needs d - 1 eigenvalues rho");
    basis.require_orthonormal("urn");
    P.assign(d, std::vector<T>(d));
    for (std::size_t j = 0; j < d; ++j) {
      T row(0);
      for (std::size_t l = 0; l < d; ++l) {
        T s(1);
        for (std::size_t i = 1; i < d; ++i) s += rho[i - 1] * basis.u(i, j) * basis.u(i, l);
        P[j][l] = basis.p()[l] * s;
        if (P[j][l] < T(0) && !near_zero(P[j][l], tol)) {
          throw ValidationError("urn transition p_" + std::to_string(j) + std::to_string(l) + " is negative");
        }
        row += P[j][l];
      }
      if (!near_zero(T(row - T(1)), tol)) throw ValidationError("urn transition rows must sum to 1");
    }
  }

  std::size_t colours() const { return basis.dim(); }
};

/// m(y; p) {1 + sum_{0<|n|<=N} e^{-t sum n_i (1 - rho_i)/N} C(N; n+)^{-1} Q_n(x) Q_n(y)}.
template <class T>
T ehrenfest_dtype(const Composition& x, const Composition& y, const T& t, const UrnSpec<T>& urn) {
  if (t < T(0)) throw DomainError("time must be nonnegative");
  const std::size_t d = urn.colours();
  if (x.size() != d || y.size() != d || x.total() != urn.N || y.total() != urn.N) {
    throw DomainError("composition does not match the urn");
  }
  T s(1);
  for (const auto& n : multi_indices(urn.N, d - 1)) {
    if (n.is_zero()) continue;
    T rate(0);
    for (std::size_t i = 0; i + 1 < d; ++i) rate += T(n[i]) * (T(1) - urn.rho[i]);
    s += exp_of(T(-rate * t / T(urn.N))) * mvk_eval(n, x, urn.basis) * mvk_eval(n, y, urn.basis) /
         multinomial_plus<T>(n);
  }
  return multinomial_pmf(y, urn.basis.p()) * s;
}

/// sum_{j,l} (x_j/N) p_jl Q_n(x - e_j + e_l) - Q_n(x) + sum_i n_i (1 - rho_i)/N Q_n(x).
template <class T>
T dtype_eigen_residual(const MultiIndex& n, const Composition& x, const UrnSpec<T>& urn) {
  const std::size_t d = urn.colours();
  const T q = mvk_eval(n, x, urn.basis);
  T lhs = -q;
  for (std::size_t j = 0; j < d; ++j) {
    if (x[j] == 0) continue;
    for (std::size_t l = 0; l < d; ++l) {
      lhs += T(x[j]) / T(urn.N) * urn.P[j][l] * mvk_eval(n, x.moved(j, l), urn.basis);
    }
  }
  T ev(0);
  for (std::size_t i = 0; i + 1 < d; ++i) ev += T(n[i]) * (T(1) - urn.rho[i]);
  return lhs + ev / T(urn.N) * q;
}

/// N spectral draws recorded as support indices l_k (Z_k = zeta_{l_k}).
struct SpectralAssignment {
  std::vector<int> levels;

  std::size_t size() const { return levels.size(); }

  /// n_l(Z) for l < count.
  std::vector<int> counts(int count) const {
    std::vector<int> n(count, 0);
    for (int l : levels) {
      if (l < 0 || l >= count) throw DomainError("assignment level outside the kept support");
      ++n[l];
    }
    return n;
  }
};

/// prod_k (1 + sum_{1<=j<=J} Q_j(Z_k) v_j) at v = (v_1..v_J).
template <class T>
T dual_poly_gf(std::span<const T> v, const SpectralAssignment& z, const SpectralData<T>& data) {
  T r(1);
  for (int l : z.levels) {
    T f(1);
    for (std::size_t j = 0; j < v.size(); ++j) f += data.poly(static_cast<int>(j) + 1, l) * v[j];
    r *= f;
  }
  return r;
}

/// Coefficient of prod v_j^{x_j} in the product above: the dual polynomial
/// indexed by (x_1, x_2, ...), equal to 1 at x = 0.
template <class T>
T dual_poly_coefficient(std::span<const int> xidx, const SpectralAssignment& z, const SpectralData<T>& data) {
  auto s = MultiSeries<T>::box(xidx);
  std::vector<T> c(xidx.size());
  for (int l : z.levels) {
    for (std::size_t j = 0; j < xidx.size(); ++j) c[j] = data.poly(static_cast<int>(j) + 1, l);
    s.multiply_linear(T(1), c);
  }
  return s.coefficient(xidx);
}

/// NN_j = sum_k Q_j(Z_k).
template <class T>
T calN_statistic(int j, const SpectralAssignment& z, const SpectralData<T>& data) {
  if (j < 1) throw DomainError("calN needs j >= 1");
  T s(0);
  for (int l : z.levels) s += data.poly(j, l);
  return s;
}

/// NN_j = sum_l n_l Q_j(zeta_l), the grouped form.
template <class T>
T calN_statistic_grouped(int j, const SpectralAssignment& z, const SpectralData<T>& data) {
  if (j < 1) throw DomainError("calN needs j >= 1");
  const int top = z.levels.empty() ? 0 : *std::max_element(z.levels.begin(), z.levels.end()) + 1;
  const auto n = z.counts(top);
  T s(0);
  for (int l = 0; l < top; ++l) {
    if (n[l] != 0) s += T(n[l]) * data.poly(j, l);
  }
  return s;
}

template <class T>
struct DualStructureReport {
  StructureReport<T> structure;
  /// Highest weighted degree sum_c c e_c among nonzero terms (degree in Z).
  int z_degree = 0;
  int expected_z_degree = 0;
  std::size_t sample_points = 0;
};

/// Expresses the dual polynomial indexed by (x_1..x_J) in monomials of
/// NN_1..NN_W (W = sum j x_j), by exact interpolation over every multiset of
/// N support indices drawn from the first `support` atoms. Degree in NN is
/// sum x_j with the single top monomial prod NN_j^{x_j} (coefficient
/// 1 / prod x_j!); degree in Z is W.
template <class T>
DualStructureReport<T> dual_structure_check(std::span<const int> xidx, int N, const SpectralData<T>& data,
                                              std::optional<int> support = std::nullopt) {
  int W = 0, deg = 0;
  for (std::size_t j = 0; j < xidx.size(); ++j) {
    W += static_cast<int>(j + 1) * xidx[j];
    deg += xidx[j];
  }
  if (deg > N) throw DomainError("index total exceeds N");
  if (W > N) throw DomainError("interpolation is determined only for sum j x_j <= N");
  if (N > 6) throw ScaleError("dual structure check limited to N <= 6");
  int S = support.value_or(W + 2);
  if (auto n = data.support_size()) S = std::min(S, *n);
  // monomials in NN_1..NN_W with weighted degree <= W
  std::vector<std::vector<int>> monos;
  {
    std::vector<int> e(W, 0);
    auto rec = [&](auto&& self, int c, int left) -> void {
      if (c > W) {
        monos.push_back(e);
        return;
      }
      for (int k = 0; k * c <= left; ++k) {
        e[c - 1] = k;
        self(self, c + 1, left - k * c);
      }
      e[c - 1] = 0;
    };
    if (W == 0) {
      monos.push_back({});
    } else {
      rec(rec, 1, W);
    }
  }
  std::vector<std::vector<T>> pts;
  std::vector<T> vals;
  // multisets of size N from 0..S-1 as compositions of N into S parts
  for (const auto& c : compositions(N, static_cast<std::size_t>(S))) {
    SpectralAssignment z;
    for (int l = 0; l < S; ++l) z.levels.insert(z.levels.end(), c[l], l);
    std::vector<T> pt(W);
    for (int j = 1; j <= W; ++j) pt[j - 1] = calN_statistic(j, z, data);
    pts.push_back(std::move(pt));
    vals.push_back(dual_poly_coefficient(xidx, z, data));
  }
  std::vector<int> expected(W, 0);
  T coef(1);
  for (std::size_t j = 0; j < xidx.size(); ++j) {
    if (xidx[j] > 0) expected[j] = xidx[j];
    coef /= factorial<T>(xidx[j]);
  }
  DualStructureReport<T> rep;
  rep.structure = detail::interpolate_structure<T>(pts, vals, monos, expected, coef, deg);
  rep.sample_points = pts.size();
  rep.expected_z_degree = W;
  rep.z_degree = -1;
  for (const auto& [e, c] : rep.structure.terms) {
    int w = 0;
    for (std::size_t k = 0; k < e.size(); ++k) w += static_cast<int>(k + 1) * e[k];
    rep.z_degree = std::max(rep.z_degree, w);
  }
  return rep;
}

/// A Meixner-class family: sum_j P_j(z) v^j / j! = h(v) e^{z u(v)}, where
/// P_j = c_j Q_j rescales the spectral polynomials and z = zeta / unit.
template <class T>
struct MeixnerClass {
  enum class Kind { Charlier, Meixner, Krawtchouk, Laguerre } kind;
  T nu{};     // Charlier
  T beta{};   // Meixner, Laguerre
  T c{};      // Meixner ratio
  int trials = 0;
  T p{};      // Krawtchouk
  T unit{1};  // zeta -> z

  /// log h(v) to the given order.
  Series<T> log_h(int order) const {
    switch (kind) {
      case Kind::Charlier: {
        Series<T> s(order);
        if (order >= 1) s[1] = T(1);
        return s;
      }
      case Kind::Meixner:
      case Kind::Laguerre: return Series<T>::linear_power(order, T(-1), 1).log().scaled(T(-beta));
      case Kind::Krawtchouk: return Series<T>::linear_power(order, T(-p), 1).log().scaled(T(trials));
    }
    return Series<T>(order);
  }

  Series<T> u(int order) const {
    switch (kind) {
      case Kind::Charlier: return Series<T>::linear_power(order, T(T(-1) / nu), 1).log();
      case Kind::Meixner:
        return Series<T>::linear_power(order, T(T(-1) / c), 1).log() +
               Series<T>::linear_power(order, T(-1), 1).log().scaled(T(-1));
      case Kind::Krawtchouk:
        return Series<T>::linear_power(order, T(T(1) - p), 1).log() +
               Series<T>::linear_power(order, T(-p), 1).log().scaled(T(-1));
      case Kind::Laguerre: {
        // -v / (1 - v)
        Series<T> s(order);
        for (int k = 1; k <= order; ++k) s[k] = T(-1);
        return s;
      }
    }
    return Series<T>(order);
  }

  /// c_j with P_j = c_j Q_j.
  T scale(int j) const {
    switch (kind) {
      case Kind::Charlier: return T(1);
      case Kind::Meixner:
      case Kind::Laguerre: return rising(beta, j);
      case Kind::Krawtchouk: return factorial<T>(j) * binomial<T>(trials, j) * power(T(-p), j);
    }
    return T(1);
  }

  T argument(const T& zeta) const { return zeta / unit; }
};

/// The class record of a base process, when it has one.
template <class T>
MeixnerClass<T> meixner_class(const SpectralData<T>& data) {
  using K = typename MeixnerClass<T>::Kind;
  const auto& s = data.spec();
  MeixnerClass<T> m{};
  switch (s.family) {
    case Family::MMInfinity:
      m.kind = K::Charlier;
      m.nu = s.lambda / s.mu;
      m.unit = s.mu;
      return m;
    case Family::LinearBDP:
      if (s.regime() == LinearRegime::Subcritical) {
        m.kind = K::Meixner;
        m.beta = s.beta;
        m.c = s.lambda / s.mu;
        m.unit = s.mu - s.lambda;
        return m;
      }
      if (s.regime() == LinearRegime::Critical) {
        m.kind = K::Laguerre;
        m.beta = s.beta;
        m.unit = s.lambda;
        return m;
      }
      break;
    case Family::Ehrenfest:
      m.kind = K::Krawtchouk;
      m.trials = s.N;
      m.p = s.p;
      m.unit = T(1);
      return m;
    default: break;
  }
  throw UnsupportedError("base family is not in the Meixner class");
}

/// Q_m^N(s) = m! [v^m] h(v)^N e^{s u(v)}.
template <class T>
T meixner_additive_poly(int m, const T& s, const MeixnerClass<T>& mc, int N) {
  if (m < 0) throw DomainError("degree must be nonnegative");
  if (N < 1) throw DomainError("N must be positive");
  const auto g = (mc.log_h(m).scaled(T(N)) + mc.u(m).scaled(s)).exp();
  return factorial<T>(m) * g[m];
}

template <class T>
struct IdentitySides {
  T lhs;
  T rhs;
  T residual() const { return lhs - rhs; }
};

/// Both sides of
///   C(N; n)^{-1} sum_{x: sum j x_j = m} C(N; x) m! / prod j!^{x_j} Q_n(x; u~) = Q_m^N(|Z|),
/// with n = n(Z) and u~_j^(l) = P_j(zeta_l). The left side goes through the
/// multivariate generating function over the distinct atoms of Z, the right
/// side through the class generating function.
template <class T>
IdentitySides<T> additive_identity_check(int m, const SpectralAssignment& z, const SpectralData<T>& data) {
  const int N = static_cast<int>(z.size());
  if (N < 1) throw DomainError("assignment is empty");
  if (N > 6 || m > 8) throw ScaleError("identity check limited to N <= 6, m <= 8");
  const auto mc = meixner_class(data);
  // atoms: zeta_0 first, then the distinct nonzero levels of Z
  std::vector<int> atoms{0};
  for (int l : z.levels) {
    if (l != 0 && std::find(atoms.begin(), atoms.end(), l) == atoms.end()) atoms.push_back(l);
  }
  std::vector<int> n(atoms.size() - 1, 0);
  for (int l : z.levels) {
    if (l != 0) ++n[std::find(atoms.begin(), atoms.end(), l) - atoms.begin() - 1];
  }
  Matrix<T> table(atoms.size(), std::vector<T>(m + 1));
  for (std::size_t r = 0; r < atoms.size(); ++r) {
    for (int j = 0; j <= m; ++j) table[r][j] = mc.scale(j) * data.poly(j, atoms[r]);
  }
  const MultiIndex nn(n, N);
  T lhs(0);
  for (const auto& x : compositions(N, static_cast<std::size_t>(m + 1))) {
    int weight = 0;
    for (int j = 0; j <= m; ++j) weight += j * x[j];
    if (weight != m) continue;
    T f = multinomial<T>(x.values()) * factorial<T>(m);
    for (int j = 0; j <= m; ++j) f /= power(factorial<T>(j), x[j]);
    lhs += f * detail::gf_coefficient(nn.values(), x.values(), table);
  }
  lhs /= multinomial_plus<T>(nn);
  T total(0);
  for (int l : z.levels) total += mc.argument(data.point(l));
  return {lhs, meixner_additive_poly(m, total, mc, N)};
}

}  // namespace mvk

#endif  // MVK_COMPOSITION_HPP
