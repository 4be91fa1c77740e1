#ifndef MVK_SCALAR_HPP
#define MVK_SCALAR_HPP

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

#include "mvk/error.hpp"

namespace mvk {

/// Exact rational scalar used by the exact evaluation path.
using Rational = boost::multiprecision::cpp_rational;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr double default_tolerance = 1e-12;
  static double to_double(double v) { return v; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr double default_tolerance = 0.0;
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
};

template <class T>
inline constexpr bool is_exact_v = ScalarTraits<T>::exact;

template <class T>
double to_double(const T& v) {
  return ScalarTraits<T>::to_double(v);
}

template <class T>
T abs_of(const T& v) {
  return v < T(0) ? T(-v) : v;
}

/// Zero test: exact for rationals, absolute tolerance for floats.
template <class T>
bool near_zero(const T& v, double tol = ScalarTraits<T>::default_tolerance) {
  if constexpr (is_exact_v<T>) {
    return v == 0;
  } else {
    return std::abs(v) <= tol;
  }
}

template <class T>
T power(const T& base, int exponent) {
  if (exponent < 0) return T(1) / power(base, -exponent);
  T result(1);
  T b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

namespace detail {

inline bool integer_sqrt(const boost::multiprecision::cpp_int& v,
                         boost::multiprecision::cpp_int& root) {
  if (v < 0) return false;
  root = boost::multiprecision::sqrt(v);
  return root * root == v;
}

}  // namespace detail

/// Square root; in exact mode only perfect-square rationals are accepted.
template <class T>
T sqrt_of(const T& v) {
  if constexpr (is_exact_v<T>) {
    boost::multiprecision::cpp_int num, den;
    if (!detail::integer_sqrt(boost::multiprecision::numerator(v), num) ||
        !detail::integer_sqrt(boost::multiprecision::denominator(v), den)) {
      throw UnsupportedError("square root is irrational in exact mode");
    }
    return Rational(num, den);
  } else {
    return std::sqrt(v);
  }
}

template <class T>
T exp_of(const T& v) {
  if constexpr (is_exact_v<T>) {
    if (v == 0) return T(1);
    throw UnsupportedError("exponential is not available in exact mode");
  } else {
    return std::exp(v);
  }
}

/// base^exponent for real exponents; exact mode requires an integer exponent.
template <class T>
T pow_of(const T& base, const T& exponent) {
  if constexpr (is_exact_v<T>) {
    if (boost::multiprecision::denominator(exponent) != 1) {
      throw UnsupportedError("non-integer power in exact mode");
    }
    return power(base, boost::multiprecision::numerator(exponent).template convert_to<int>());
  } else {
    return std::pow(base, exponent);
  }
}

/// Integer value of a scalar known to be integral (throws otherwise).
template <class T>
long long as_integer(const T& v) {
  if constexpr (is_exact_v<T>) {
    if (boost::multiprecision::denominator(v) != 1) throw DomainError("value is not an integer");
    return boost::multiprecision::numerator(v).template convert_to<long long>();
  } else {
    const double r = std::round(v);
    if (std::abs(r - v) > 1e-9 * std::max(1.0, std::abs(v))) {
      throw DomainError("value is not an integer");
    }
    return static_cast<long long>(r);
  }
}

namespace detail {

/// Decimal integer; cpp_int alone would read a leading 0 as octal.
inline boost::multiprecision::cpp_int decimal_int(std::string s) {
  std::string sign;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    if (s[0] == '-') sign = "-";
    s.erase(0, 1);
  }
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ValidationError("malformed integer '" + sign + s + "'");
  }
  const auto nz = s.find_first_not_of('0');
  s = nz == std::string::npos ? "0" : s.substr(nz);
  return boost::multiprecision::cpp_int(sign + s);
}

}  // namespace detail

/// Parses "a/b", an integer, or a decimal literal (exactly, for rationals).
template <class T>
T parse_scalar(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw ValidationError("empty numeric literal");
  const auto slash = s.find('/');
  if constexpr (is_exact_v<T>) {
    try {
      if (slash == std::string::npos) {
        if (s.find_first_of(".eE") != std::string::npos) {
          // decimal literal: exact value of the decimal string
          const auto epos = s.find_first_of("eE");
          std::string mant = s.substr(0, epos);
          int exp10 = epos == std::string::npos ? 0 : std::stoi(s.substr(epos + 1));
          const auto dot = mant.find('.');
          if (dot != std::string::npos) {
            exp10 -= static_cast<int>(mant.size() - dot - 1);
            mant.erase(dot, 1);
          }
          Rational r{detail::decimal_int(mant)};
          const Rational ten(10);
          return r * power(ten, exp10);
        }
        return Rational(detail::decimal_int(s));
      }
      const auto num = detail::decimal_int(s.substr(0, slash));
      const auto den = detail::decimal_int(s.substr(slash + 1));
      if (den == 0) throw ValidationError("zero denominator in '" + s + "'");
      return Rational(num, den);
    } catch (const std::runtime_error&) {
      throw ValidationError("malformed rational literal '" + s + "'");
    }
  } else {
    try {
      std::size_t used = 0;
      if (slash == std::string::npos) {
        double v = std::stod(s, &used);
        if (used != s.size()) throw ValidationError("malformed number '" + s + "'");
        return v;
      }
      std::size_t u1 = 0, u2 = 0;
      const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
      double num = std::stod(a, &u1);
      double den = std::stod(b, &u2);
      if (u1 != a.size() || u2 != b.size() || den == 0.0) {
        throw ValidationError("malformed rational literal '" + s + "'");
      }
      return num / den;
    } catch (const std::logic_error&) {
      throw ValidationError("malformed number '" + s + "'");
    }
  }
}

template <class T>
std::string format_scalar(const T& v) {
  if constexpr (is_exact_v<T>) {
    return v.str();
  } else {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
}

}  // namespace mvk

#endif  // MVK_SCALAR_HPP
