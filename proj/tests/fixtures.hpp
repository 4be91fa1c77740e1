#ifndef MVK_TESTS_FIXTURES_HPP
#define MVK_TESTS_FIXTURES_HPP

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "mvk/basis.hpp"
#include "mvk/scalar.hpp"

namespace fx {

using mvk::Rational;

inline Rational R(const char* s) { return mvk::parse_scalar<Rational>(s); }

template <class T>
T conv(const Rational& r) {
  if constexpr (mvk::is_exact_v<T>) {
    return r;
  } else {
    return r.convert_to<double>();
  }
}

// orthonormal bases with rational entries
template <class T>
mvk::Basis<T> orthonormal_d2() {
  return mvk::Basis<T>({conv<T>(R("1/2")), conv<T>(R("1/2"))}, {{T(1), T(1)}, {T(-1), T(1)}});
}

template <class T>
mvk::Basis<T> orthonormal_d3() {
  const std::vector<T> p{conv<T>(R("1/9")), conv<T>(R("4/9")), conv<T>(R("4/9"))};
  return mvk::Basis<T>(p, {{T(1), T(1), T(1)},
                           {T(2), conv<T>(R("1/2")), T(-1)},
                           {T(2), T(-1), conv<T>(R("1/2"))}});
}

template <class T>
mvk::Basis<T> orthonormal_d4() {
  const T q = conv<T>(R("1/4"));
  return mvk::Basis<T>({q, q, q, q}, {{T(1), T(1), T(1), T(1)},
                                      {T(1), T(-1), T(1), T(-1)},
                                      {T(1), T(1), T(-1), T(-1)},
                                      {T(1), T(-1), T(-1), T(1)}});
}

// orthogonal but not normalized
template <class T>
mvk::Basis<T> orthogonal_d3() {
  const std::vector<T> p{conv<T>(R("1/2")), conv<T>(R("1/3")), conv<T>(R("1/6"))};
  return mvk::orthogonal_basis_from(p);
}

/// Random orthonormal basis: random positive p, Gram-Schmidt on monomials,
/// then a random rotation of the non-constant rows.
inline mvk::Basis<double> random_orthonormal(std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.2, 1.0);
  std::vector<double> p(d);
  double s = 0;
  for (auto& v : p) s += (v = U(rng));
  for (auto& v : p) v /= s;
  auto base = mvk::orthonormal_basis_from(p);
  return mvk::remix(base, mvk::random_orthogonal_matrix(d - 1, rng));
}

}  // namespace fx

#endif
