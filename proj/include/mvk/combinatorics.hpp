#ifndef MVK_COMBINATORICS_HPP
#define MVK_COMBINATORICS_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mvk/error.hpp"
#include "mvk/scalar.hpp"

namespace mvk {

template <class T>
T factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative integer");
  T r(1);
  for (int k = 2; k <= n; ++k) r *= T(k);
  return r;
}

template <class T>
T binomial(int n, int k) {
  if (k < 0 || k > n) return T(0);
  k = std::min(k, n - k);
  T r(1);
  for (int i = 1; i <= k; ++i) {
    r *= T(n - k + i);
    r /= T(i);
  }
  return r;
}

/// Rising factorial x(x+1)...(x+k-1).
template <class T>
T rising(const T& x, int k) {
  T r(1);
  for (int i = 0; i < k; ++i) r *= x + T(i);
  return r;
}

/// Falling factorial x(x-1)...(x-k+1).
template <class T>
T falling(const T& x, int k) {
  T r(1);
  for (int i = 0; i < k; ++i) r *= x - T(i);
  return r;
}

/// Generalized binomial coefficient C(x, k) for arbitrary x.
template <class T>
T general_binomial(const T& x, int k) {
  if (k < 0) return T(0);
  return falling(x, k) / factorial<T>(k);
}

/// Multinomial coefficient N! / prod k_i! with N = sum k_i.
template <class T>
T multinomial(std::span<const int> parts) {
  T r(1);
  int running = 0;
  for (int k : parts) {
    if (k < 0) return T(0);
    for (int i = 1; i <= k; ++i) {
      ++running;
      r *= T(running);
      r /= T(i);
    }
  }
  return r;
}

/// Occupancy vector x with |x| = N.
class Composition {
 public:
  Composition() = default;
  explicit Composition(std::vector<int> counts) : counts_(std::move(counts)) {
    for (int c : counts_) {
      if (c < 0) throw ValidationError("composition entries must be nonnegative");
    }
  }
  Composition(std::initializer_list<int> counts) : Composition(std::vector<int>(counts)) {}

  std::size_t size() const { return counts_.size(); }
  int total() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }
  int operator[](std::size_t j) const { return counts_[j]; }
  std::span<const int> values() const { return counts_; }
  const std::vector<int>& vector() const { return counts_; }

  /// x - e_from + e_to; caller guarantees x_from > 0.
  Composition moved(std::size_t from, std::size_t to) const {
    Composition r = *this;
    --r.counts_[from];
    ++r.counts_[to];
    return r;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(counts_[i]);
    }
    return s + ")";
  }

  friend bool operator==(const Composition&, const Composition&) = default;
  friend auto operator<=>(const Composition&, const Composition&) = default;

 private:
  std::vector<int> counts_;
};

/// Degree vector n = (n_1..n_{d-1}) with |n| <= N; n_0 = N - |n| is derived.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::vector<int> n, int total) : n_(std::move(n)), total_(total) {
    for (int v : n_) {
      if (v < 0) throw ValidationError("multi-index entries must be nonnegative");
    }
    if (degree() > total_) throw ValidationError("multi-index degree exceeds N");
  }

  std::size_t size() const { return n_.size(); }
  int total() const { return total_; }
  int degree() const { return std::accumulate(n_.begin(), n_.end(), 0); }
  int n0() const { return total_ - degree(); }
  int operator[](std::size_t k) const { return n_[k]; }
  std::span<const int> values() const { return n_; }

  /// n+ = (n_0, n_1, ..., n_{d-1}).
  std::vector<int> plus() const {
    std::vector<int> r;
    r.reserve(n_.size() + 1);
    r.push_back(n0());
    r.insert(r.end(), n_.begin(), n_.end());
    return r;
  }

  bool is_zero() const { return degree() == 0; }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < n_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(n_[i]);
    }
    return s + ")";
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> n_;
  int total_ = 0;
};

/// All compositions of N into d parts, lexicographically increasing.
inline std::vector<Composition> compositions(int N, std::size_t d) {
  std::vector<Composition> out;
  if (d == 0) return out;
  std::vector<int> cur(d, 0);
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos + 1 == d) {
      cur[pos] = left;
      out.emplace_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[pos] = k;
      self(self, pos + 1, left - k);
    }
  };
  rec(rec, 0, N);
  return out;
}

/// All multi-indices of length k with |n| <= N.
inline std::vector<MultiIndex> multi_indices(int N, std::size_t k) {
  std::vector<MultiIndex> out;
  for (const auto& c : compositions(N, k + 1)) {
    out.emplace_back(std::vector<int>(c.vector().begin() + 1, c.vector().end()), N);
  }
  return out;
}

/// All multi-indices of length k with |n| == degree exactly.
inline std::vector<MultiIndex> multi_indices_of_degree(int N, std::size_t k, int degree) {
  std::vector<MultiIndex> out;
  for (const auto& c : compositions(degree, k)) out.emplace_back(c.vector(), N);
  return out;
}

/// Multinomial coefficient C(N; n+).
template <class T>
T multinomial_plus(const MultiIndex& n) {
  const auto plus = n.plus();
  return multinomial<T>(plus);
}

}  // namespace mvk

#endif  // MVK_COMBINATORICS_HPP
