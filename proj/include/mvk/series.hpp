#ifndef MVK_SERIES_HPP
#define MVK_SERIES_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "mvk/combinatorics.hpp"
#include "mvk/error.hpp"

namespace mvk {

/// Univariate power series truncated after z^order.
template <class T>
class Series {
 public:
  explicit Series(int order) : c_(static_cast<std::size_t>(order) + 1, T(0)) {}
  Series(int order, std::vector<T> coeffs) : Series(order) {
    for (std::size_t k = 0; k < coeffs.size() && k < c_.size(); ++k) c_[k] = std::move(coeffs[k]);
  }

  static Series constant(int order, const T& v) {
    Series s(order);
    s.c_[0] = v;
    return s;
  }

  /// (1 + a z)^e for integer e >= 0 (a polynomial).
  static Series linear_power(int order, const T& a, int e) {
    Series s(order);
    T ak(1);
    for (int k = 0; k <= std::min(order, e); ++k) {
      s.c_[k] = binomial<T>(e, k) * ak;
      ak *= a;
    }
    return s;
  }

  /// (1 - z)^(-e) = sum_k e_(k)/k! z^k for any scalar e.
  static Series negative_power_of_one_minus(int order, const T& e) {
    Series s(order);
    T term(1);
    for (int k = 0; k <= order; ++k) {
      s.c_[k] = term;
      term = term * (e + T(k)) / T(k + 1);
    }
    return s;
  }

  /// e^(a z).
  static Series exponential(int order, const T& a) {
    Series s(order);
    T term(1);
    for (int k = 0; k <= order; ++k) {
      s.c_[k] = term;
      term = term * a / T(k + 1);
    }
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const T& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  T& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  std::span<const T> coefficients() const { return c_; }

  Series operator*(const Series& o) const {
    const int n = std::min(order(), o.order());
    Series r(n);
    for (int i = 0; i <= n; ++i) {
      if (c_[i] == T(0)) continue;
      for (int j = 0; i + j <= n; ++j) r.c_[i + j] += c_[i] * o.c_[j];
    }
    return r;
  }

  Series operator+(const Series& o) const {
    const int n = std::min(order(), o.order());
    Series r(n);
    for (int i = 0; i <= n; ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
  }

  Series scaled(const T& a) const {
    Series r = *this;
    for (auto& v : r.c_) v *= a;
    return r;
  }

  Series pow(int e) const {
    if (e < 0) throw DomainError("negative series power");
    Series r = constant(order(), T(1));
    Series b = *this;
    while (e > 0) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  /// exp(f) for f with zero constant term, via f' exp(f) = (exp f)'.
  Series exp() const {
    if (c_[0] != T(0)) throw DomainError("series exp requires zero constant term");
    Series r(order());
    r.c_[0] = T(1);
    for (int n = 1; n <= order(); ++n) {
      T acc(0);
      for (int k = 1; k <= n; ++k) acc += T(k) * c_[k] * r.c_[n - k];
      r.c_[n] = acc / T(n);
    }
    return r;
  }

  /// log(f) for f with constant term 1.
  Series log() const {
    if (c_[0] != T(1)) throw DomainError("series log requires constant term 1");
    Series r(order());
    for (int n = 1; n <= order(); ++n) {
      T acc = T(n) * c_[n];
      for (int k = 1; k < n; ++k) acc -= T(k) * r.c_[k] * c_[n - k];
      r.c_[n] = acc / T(n);
    }
    return r;
  }

  /// 1/f for f with nonzero constant term.
  Series inverse() const {
    if (c_[0] == T(0)) throw DomainError("series inverse requires nonzero constant term");
    Series r(order());
    r.c_[0] = T(1) / c_[0];
    for (int n = 1; n <= order(); ++n) {
      T acc(0);
      for (int k = 1; k <= n; ++k) acc += c_[k] * r.c_[n - k];
      r.c_[n] = -acc / c_[0];
    }
    return r;
  }

 private:
  std::vector<T> c_;
};

/// Dense multivariate polynomial in k variables, truncated to the box
/// e_i <= bound_i and (optionally) total degree <= cap.
template <class T>
class MultiSeries {
 public:
  MultiSeries(std::vector<int> bounds, int total_cap)
      : bounds_(std::move(bounds)), cap_(total_cap), stride_(bounds_.size()) {
    std::size_t size = 1;
    for (std::size_t i = 0; i < bounds_.size(); ++i) {
      if (bounds_[i] < 0) throw DomainError("negative series bound");
      stride_[i] = size;
      size *= static_cast<std::size_t>(bounds_[i]) + 1;
    }
    c_.assign(size, T(0));
    degree_.assign(size, 0);
    std::vector<int> e(bounds_.size(), 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
      degree_[idx] = std::accumulate(e.begin(), e.end(), 0);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (++e[i] <= bounds_[i]) break;
        e[i] = 0;
      }
    }
    c_[0] = T(1);
  }

  /// Box bound n with no extra total-degree cap.
  static MultiSeries box(std::span<const int> n) {
    int cap = 0;
    for (int v : n) cap += v;
    return MultiSeries(std::vector<int>(n.begin(), n.end()), cap);
  }

  /// Uniform bound D in every variable with total degree <= D.
  static MultiSeries simplex(std::size_t k, int D) { return MultiSeries(std::vector<int>(k, D), D); }

  std::size_t variables() const { return bounds_.size(); }

  /// Multiply in place by (c0 + sum_l c_l w_l).
  void multiply_linear(const T& c0, std::span<const T> c) {
    std::vector<T> next(c_.size(), T(0));
    for (std::size_t idx = 0; idx < c_.size(); ++idx) {
      if (c_[idx] == T(0)) continue;
      if (c0 != T(0)) next[idx] += c0 * c_[idx];
      if (degree_[idx] >= cap_) continue;
      for (std::size_t l = 0; l < bounds_.size(); ++l) {
        if (c[l] == T(0)) continue;
        const int el = static_cast<int>((idx / stride_[l]) % (static_cast<std::size_t>(bounds_[l]) + 1));
        if (el >= bounds_[l]) continue;
        next[idx + stride_[l]] += c[l] * c_[idx];
      }
    }
    c_ = std::move(next);
  }

  const T& coefficient(std::span<const int> e) const { return c_[index(e)]; }

  /// Calls f(exponents, coefficient) for every stored term.
  template <class F>
  void for_each(F&& f) const {
    std::vector<int> e(bounds_.size(), 0);
    for (std::size_t idx = 0; idx < c_.size(); ++idx) {
      if (degree_[idx] <= cap_) f(std::span<const int>(e), c_[idx]);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (++e[i] <= bounds_[i]) break;
        e[i] = 0;
      }
    }
  }

 private:
  std::size_t index(std::span<const int> e) const {
    if (e.size() != bounds_.size()) throw DomainError("exponent dimension mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 0 || e[i] > bounds_[i]) throw DomainError("exponent outside truncation box");
      idx += stride_[i] * static_cast<std::size_t>(e[i]);
    }
    return idx;
  }

  std::vector<int> bounds_;
  int cap_;
  std::vector<std::size_t> stride_;
  std::vector<T> c_;
  std::vector<int> degree_;
};

}  // namespace mvk

#endif  // MVK_SERIES_HPP
