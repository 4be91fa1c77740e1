#ifndef MVK_VERIFY_HPP
#define MVK_VERIFY_HPP

// Named invariant suites. Each returns one line per property with the largest
// residual seen; exact suites pass only at residual 0.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mvk/basis.hpp"
#include "mvk/composition.hpp"
#include "mvk/multivariate.hpp"
#include "mvk/polys.hpp"
#include "mvk/sim.hpp"
#include "mvk/spectral.hpp"

namespace mvk {

struct CheckResult {
  std::string property;
  bool passed = true;
  double max_residual = 0;
  double tolerance = 0;
  std::size_t cases = 0;
  std::string note;

  CheckResult() = default;
  CheckResult(std::string name) : property(std::move(name)) {}

  /// Folds one residual into the result.
  void add(double residual) {
    ++cases;
    if (!(residual <= max_residual)) max_residual = residual;
    if (!(residual <= tolerance)) passed = false;
  }
  void fail(std::string why) {
    passed = false;
    note = std::move(why);
  }
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

struct SuiteParams {
  int d = 3;
  int N = 4;
  /// Krawtchouk success probability, as a literal.
  std::string p = "1/2";
  double t = 0.5;
  std::uint64_t seed = 1;
  /// Floating-point tolerance; exact suites ignore it.
  double tol = 1e-10;
  /// Use floating point even where an exact basis exists.
  bool floating = false;
};

template <class T>
double residual_of(const T& a, const T& b) {
  return std::abs(to_double(T(a - b)));
}

/// Rational orthonormal bases for d <= 4:
///   d = 2  p = (1/2, 1/2),        u^(1) = (-1, 1)
///   d = 3  p = (1/9, 4/9, 4/9),   u^(1) = (2, 1/2, -1), u^(2) = (2, -1, 1/2)
///   d = 4  p uniform,             Hadamard rows
inline Basis<Rational> exact_orthonormal_basis(int d) {
  const Rational h(1, 2);
  switch (d) {
    case 2: return Basis<Rational>({h, h}, {{1, 1}, {-1, 1}});
    case 3: {
      const Rational a(1, 9), b(4, 9);
      return Basis<Rational>({a, b, b}, {{1, 1, 1}, {2, h, -1}, {2, -1, h}});
    }
    case 4: {
      const Rational q(1, 4);
      return Basis<Rational>({q, q, q, q}, {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}});
    }
    default: break;
  }
  throw UnsupportedError("exact orthonormal bases are built in for d = 2, 3, 4 only; use floating point");
}

/// Orthonormal basis on the uniform distribution (Gram-Schmidt on monomials).
inline Basis<double> float_orthonormal_basis(int d) {
  if (d < 2) throw DomainError("basis dimension must be at least 2");
  return orthonormal_basis_from<double>(std::vector<double>(d, 1.0 / d));
}

/// Rescales each function to 1 on the first category (needs u_0^(l) != 0).
template <class T>
Basis<T> first_category_scaled(const Basis<T>& b) {
  Matrix<T> u = b.table();
  for (auto& row : u) {
    if (row[0] == T(0)) throw DualityUnavailableError("a basis function vanishes on the first category");
    const T s = row[0];
    for (auto& v : row) v /= s;
  }
  return Basis<T>(b.p(), u, is_exact_v<T> ? 0.0 : 1e-10);
}

/// sum_x C(N,x) p^x q^{N-x} K_m K_n = delta_mn n!^2 C(N,n) (pq)^n.
inline CheckResult krawtchouk_orthogonality_check(int N, const Rational& p) {
  CheckResult c{"krawtchouk orthogonality (exact)"};
  const KrawtchoukParams<Rational> k(N, p);
  const Rational q = 1 - p;
  for (int m = 0; m <= N; ++m) {
    for (int n = 0; n <= N; ++n) {
      Rational s(0);
      for (int x = 0; x <= N; ++x) {
        s += binomial<Rational>(N, x) * power(p, x) * power(q, N - x) * krawtchouk(m, x, k) * krawtchouk(n, x, k);
      }
      const Rational f = factorial<Rational>(n);
      const Rational e = m == n ? f * f * binomial<Rational>(N, n) * power(Rational(p * q), n) : Rational(0);
      c.add(residual_of(s, e));
    }
  }
  return c;
}

template <class T>
std::vector<CheckResult> mvk_orthogonality_checks(const Basis<T>& basis, int N, double tol) {
  CheckResult orth{"orthogonality on the multinomial"}, dual{"dual orthogonality"};
  orth.tolerance = dual.tolerance = is_exact_v<T> ? 0.0 : tol;
  const auto ns = multi_indices(N, basis.dim() - 1);
  for (const auto& m : ns) {
    for (const auto& n : ns) {
      orth.add(residual_of(mvk_gram(basis, N, m, n), m == n ? mvk_norm(n, basis) : T(0)));
    }
  }
  const auto xs = compositions(N, basis.dim());
  for (const auto& x : xs) {
    for (const auto& y : xs) {
      const T e = x == y ? T(1) / multinomial_pmf(x, basis.p()) : T(0);
      // relative to the diagonal scale
      dual.add(residual_of(mvk_dual_gram(basis, N, x, y), e) / std::max(1.0, std::abs(to_double(e))));
    }
  }
  return {orth, dual};
}

template <class T>
CheckResult duality_check(const Basis<T>& basis, int maxN, double tol) {
  CheckResult c{"duality between Q_n(x; u) and the dual system"};
  c.tolerance = is_exact_v<T> ? 0.0 : tol;
  try {
    const auto dual = dual_basis(basis);
    for (int N = 0; N <= maxN; ++N) {
      for (const auto& n : multi_indices(N, basis.dim() - 1)) {
        for (const auto& x : compositions(N, basis.dim())) {
          const auto s = duality_sides(n, x, basis, dual);
          c.add(residual_of(s.lhs, s.rhs) / std::max(1.0, std::abs(to_double(s.rhs))));
        }
      }
    }
  } catch (const DualityUnavailableError& e) {
    c.fail(e.what());
  }
  return c;
}

template <class T>
std::vector<CheckResult> recurrence_checks(const Basis<T>& basis, int maxN, double tol) {
  using K = RecurrenceKind;
  std::vector<CheckResult> out{{"x-side recurrence"}, {"u-side recurrence"}, {"dual recurrence"}};
  for (auto& c : out) c.tolerance = is_exact_v<T> ? 0.0 : tol;
  const std::size_t d = basis.dim();
  for (int N = 1; N <= maxN; ++N) {
    for (const auto& n : multi_indices(N, d - 1)) {
      for (const auto& x : compositions(N, d)) {
        for (std::size_t j = 0; j < d; ++j) {
          out[0].add(std::abs(to_double(mvk_recurrence_residual(K::XSide, j, n, x, basis))));
          out[2].add(std::abs(to_double(mvk_recurrence_residual(K::Dual, j, n, x, basis))));
        }
        for (std::size_t i = 1; i < d; ++i) {
          if (n[i - 1] == 0) continue;
          out[1].add(std::abs(to_double(mvk_recurrence_residual(K::USide, i, n, x, basis))));
        }
      }
    }
  }
  return out;
}

template <class T>
std::vector<CheckResult> structure_checks(const Basis<T>& basis, int maxN) {
  CheckResult lead{"leading term of Q_n in the linear statistics"};
  CheckResult dlead{"leading term of the dual polynomials"};
  for (int N = 1; N <= maxN; ++N) {
    for (const auto& n : multi_indices(N, basis.dim() - 1)) {
      const auto r = leading_term_check(n, basis);
      lead.add(r.passed ? 0.0 : 1.0);
    }
  }
  try {
    const auto scaled = first_category_scaled(basis);
    for (int N = 1; N <= maxN; ++N) {
      for (const auto& x : compositions(N, basis.dim())) {
        const auto r = dual_leading_term_check(x, scaled);
        dlead.add(r.passed ? 0.0 : 1.0);
      }
    }
  } catch (const DualityUnavailableError& e) {
    dlead.fail(e.what());
  }
  return {lead, dlead};
}

/// Reproducing kernels agree across random orthonormal remixings of a basis.
inline CheckResult kernel_invariance_check(int d, int N, int remixes, std::uint64_t seed, double tol) {
  CheckResult c{"reproducing kernel basis invariance"};
  c.tolerance = tol;
  const auto base = orthonormal_basis_from<double>(std::vector<double>(d, 1.0 / d));
  std::mt19937_64 rng(seed);
  const auto xs = compositions(N, static_cast<std::size_t>(d));
  for (int r = 0; r < remixes; ++r) {
    const auto other = remix(base, random_orthogonal_matrix(static_cast<std::size_t>(d - 1), rng));
    for (int deg = 0; deg <= N; ++deg) {
      for (const auto& x : xs) {
        for (const auto& y : xs) {
          c.add(std::abs(reproducing_kernel(deg, x, y, base) - reproducing_kernel(deg, x, y, other)));
        }
      }
    }
  }
  return c;
}

/// Spectral sum against the uniformization oracle, Chapman-Kolmogorov and
/// reversibility, for states up to `top` (and up to `reach` inside sums).
inline std::vector<CheckResult> spectral_checks(const BirthDeathSpec<double>& spec, const std::vector<double>& times,
                                                int top, int reach, int oracle_bound, double tol) {
  const SpectralData<double> data(spec);
  const bool continuous = data.kind() == SpectrumKind::Continuous;
  CheckResult km{continuous ? "quadrature vs uniformization" : "spectral sum vs uniformization"};
  km.tolerance = continuous ? std::max(tol, 1e-6) : tol;
  CheckResult ck{"Chapman-Kolmogorov"}, rev{"reversibility"};
  ck.tolerance = 1e-7;
  rev.tolerance = 1e-10;
  if (auto b = spec.bound()) {
    top = std::min(top, *b);
    reach = std::min(reach, *b);
  }
  const auto g = birth_death_generator(spec, spec.bound() ? std::nullopt : std::optional<int>(oracle_bound));
  std::vector<std::size_t> src;
  for (int i = 0; i <= top; ++i) src.push_back(static_cast<std::size_t>(i));
  for (double t : times) {
    const auto P = transition_rows(g, t, src);
    for (int i = 0; i <= top; ++i) {
      for (int j = 0; j <= top; ++j) {
        const auto r = km_transition(data, i, j, t);
        if (r.flagged) km.fail("flagged truncation at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        km.add(std::abs(r.value - P[i][j]));
        rev.add(std::abs(pi_weight(spec, i) * r.value - pi_weight(spec, j) * km_transition(data, j, i, t).value) /
                std::max(1.0, pi_weight(spec, i) * r.value));
      }
    }
  }
  // the continuous case is carried by the quadrature oracle
  if (continuous) return {km, rev};
  // p(2s) = sum_k p_ik(s) p_kj(s) at the largest time s. At short times the
  // spectral sum for far rows loses digits (see rounding_estimate), so k runs
  // up to `reach` and stops once a product's rounding bound passes 1e-10.
  const double s = times.empty() ? 1.0 : *std::max_element(times.begin(), times.end());
  const double u = s;
  std::vector<std::vector<double>> a(top + 1), b;
  int kept = 0;
  for (int k = 0; k <= reach; ++k) {
    std::vector<double> col(top + 1), row(top + 1);
    bool bad = false;
    for (int i = 0; i <= top; ++i) {
      const auto x = km_transition(data, i, k, s), y = km_transition(data, k, i, u);
      const double ex = x.rounding_estimate + x.tail_estimate, ey = y.rounding_estimate + y.tail_estimate;
      bad = bad || ex * (std::abs(y.value) + ey) + std::abs(x.value) * ey > 1e-10;
      col[i] = x.value;
      row[i] = y.value;
    }
    if (bad) break;
    for (int i = 0; i <= top; ++i) a[i].push_back(col[i]);
    b.push_back(std::move(row));
    ++kept;
  }
  for (int i = 0; i <= top; ++i) {
    for (int j = 0; j <= top; ++j) {
      double conv = 0;
      for (int k = 0; k < kept; ++k) conv += a[i][k] * b[k][j];
      ck.add(std::abs(conv - km_transition(data, i, j, s + u).value));
    }
  }
  char note[96];
  std::snprintf(note, sizeof note, "t = %g + %g, intermediate states 0..%d", s, u, kept - 1);
  ck.note = note;
  return {km, ck, rev};
}

/// Spectral form, product-form oracle and dual spectral form agree on every pair.
inline std::vector<CheckResult> composition_checks(const CompositionProcess<double>& proc,
                                                   const std::vector<double>& times, double tol) {
  CheckResult a{"spectral vs product-form oracle"}, b{"spectral vs dual spectral form"};
  CheckResult rows{"row sums"};
  a.tolerance = b.tolerance = rows.tolerance = tol;
  const auto xs = compositions(proc.N, static_cast<std::size_t>(proc.levels));
  for (double t : times) {
    for (const auto& x : xs) {
      double s = 0;
      for (const auto& y : xs) {
        const double v = composition_transition(x, y, t, proc).value;
        s += v;
        a.add(std::abs(v - product_form_oracle(x, y, t, proc)));
        b.add(std::abs(v - dual_spectral_form(x, y, t, proc).value));
      }
      if (!proc.truncated() && SpectralData<double>(proc.base).stationary()) rows.add(std::abs(s - 1));
    }
  }
  if (rows.cases == 0) {
    rows.note = "not applicable: truncated or non-stationary base";
  }
  return {a, b, rows};
}

/// The urn expansion against the exponential of its generator.
inline std::vector<CheckResult> urn_checks(const UrnSpec<double>& urn, const std::vector<double>& times, double tol) {
  CheckResult e{"urn expansion vs generator exponential"}, eig{"eigenfunction identity"};
  e.tolerance = tol;
  eig.tolerance = tol;
  const auto g = urn_generator(urn);
  for (double t : times) {
    const auto P = generator_expm(g, t);
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        e.add(std::abs(ehrenfest_dtype(Composition(g.states[i]), Composition(g.states[j]), t, urn) - P[i][j]));
      }
    }
  }
  for (const auto& n : multi_indices(urn.N, urn.colours() - 1)) {
    for (const auto& x : compositions(urn.N, urn.colours())) eig.add(std::abs(dtype_eigen_residual(n, x, urn)));
  }
  return {e, eig};
}

/// Dual-polynomial degree structure on a Charlier (nu = 1) base, exact.
inline CheckResult dual_structure_suite(int N) {
  CheckResult c{"dual polynomial degree structure"};
  const SpectralData<Rational> data(BirthDeathSpec<Rational>::mm_infinity(1, 1));
  std::vector<std::vector<int>> idx;
  // every index with sum j x_j <= N
  std::vector<int> cur;
  auto rec = [&](auto&& self, int j, int left) -> void {
    if (j > N) {
      auto v = cur;
      while (!v.empty() && v.back() == 0) v.pop_back();
      idx.push_back(v);
      return;
    }
    for (int k = 0; k * j <= left; ++k) {
      cur.push_back(k);
      self(self, j + 1, left - k * j);
      cur.pop_back();
    }
  };
  rec(rec, 1, N);
  for (const auto& x : idx) {
    const auto r = dual_structure_check<Rational>(x, N, data);
    c.add(r.structure.passed && r.z_degree == r.expected_z_degree ? 0.0 : 1.0);
  }
  return c;
}

/// Additive identity residuals over random spectral assignments.
template <class T>
CheckResult additive_identity_suite(const SpectralData<T>& data, int maxN, int maxm, int trials, std::uint64_t seed,
                                    double tol) {
  CheckResult c{"Meixner-class additive identity"};
  c.tolerance = is_exact_v<T> ? 0.0 : tol;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, data.support_size().value_or(8) - 1);
  for (int N = 1; N <= maxN; ++N) {
    for (int trial = 0; trial < trials; ++trial) {
      SpectralAssignment z;
      for (int k = 0; k < N; ++k) z.levels.push_back(pick(rng));
      for (int m = 0; m <= maxm; ++m) {
        const auto s = additive_identity_check(m, z, data);
        c.add(residual_of(s.lhs, s.rhs) / std::max(1.0, std::abs(to_double(s.rhs))));
      }
    }
  }
  return c;
}

/// Runs f on the exact basis for d <= 4 unless floating point is requested.
template <class F>
SuiteReport with_basis(const std::string& name, const SuiteParams& s, F&& f) {
  if (!s.floating && s.d <= 4) return SuiteReport{name, f(exact_orthonormal_basis(s.d))};
  return SuiteReport{name, f(float_orthonormal_basis(s.d))};
}

/// Suites that need only (d, N, p): the algebraic identities and kernel invariance.
inline const std::map<std::string, std::function<SuiteReport(const SuiteParams&)>>& builtin_suites() {
  using Fn = std::function<SuiteReport(const SuiteParams&)>;
  static const std::map<std::string, Fn> suites{
      {"krawtchouk-orthogonality",
       [](const SuiteParams& s) {
         return SuiteReport{"krawtchouk-orthogonality",
                            {krawtchouk_orthogonality_check(s.N, parse_scalar<Rational>(s.p))}};
       }},
      {"mvk-orthogonality",
       [](const SuiteParams& s) {
         return with_basis("mvk-orthogonality", s, [&](const auto& b) { return mvk_orthogonality_checks(b, s.N, s.tol); });
       }},
      {"mvk-duality",
       [](const SuiteParams& s) {
         return with_basis("mvk-duality", s,
                           [&](const auto& b) { return std::vector<CheckResult>{duality_check(b, s.N, s.tol)}; });
       }},
      {"mvk-recurrences",
       [](const SuiteParams& s) {
         return with_basis("mvk-recurrences", s, [&](const auto& b) { return recurrence_checks(b, s.N, s.tol); });
       }},
      {"mvk-structure",
       [](const SuiteParams& s) {
         return with_basis("mvk-structure", s, [&](const auto& b) { return structure_checks(b, s.N); });
       }},
      {"kernel-invariance",
       [](const SuiteParams& s) {
         return SuiteReport{"kernel-invariance", {kernel_invariance_check(s.d, s.N, 5, s.seed, s.tol)}};
       }},
      {"dual-structure",
       [](const SuiteParams& s) { return SuiteReport{"dual-structure", {dual_structure_suite(s.N)}}; }},
  };
  return suites;
}

}  // namespace mvk

#endif  // MVK_VERIFY_HPP
