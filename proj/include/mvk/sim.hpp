#ifndef MVK_SIM_HPP
#define MVK_SIM_HPP

// Exact-jump simulation and the uniformization oracle. Both work on a
// Generator: a finite, lexicographically ordered state list with sparse
// off-diagonal rates and a per-state exit rate that may exceed the sum of
// kept rates (mass leaving the truncation).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <thread>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "mvk/birth_death.hpp"
#include "mvk/combinatorics.hpp"
#include "mvk/composition.hpp"
#include "mvk/error.hpp"
#include "mvk/linalg.hpp"
#include "mvk/scalar.hpp"

namespace mvk {

inline constexpr std::size_t kMaxGeneratorStates = 10000;

struct Generator {
  /// State labels in lexicographic order.
  std::vector<std::vector<int>> states;
  /// (target index, rate) per state.
  std::vector<std::vector<std::pair<std::size_t, double>>> moves;
  /// Total leaving rate, including moves out of the truncation.
  std::vector<double> exit;

  std::size_t size() const { return states.size(); }

  std::size_t index(const std::vector<int>& label) const {
    const auto it = std::lower_bound(states.begin(), states.end(), label);
    if (it == states.end() || *it != label) throw DomainError("state not in the generator");
    return static_cast<std::size_t>(it - states.begin());
  }

  /// Total rate of leaving the kept state space from state i.
  double leak(std::size_t i) const {
    double s = exit[i];
    for (const auto& [j, r] : moves[i]) s -= r;
    return s;
  }
};

namespace detail {

template <class F>
Generator build_generator(std::vector<std::vector<int>> states, F&& rates) {
  if (states.size() > kMaxGeneratorStates) throw ScaleError("generator limited to 10^4 states");
  std::sort(states.begin(), states.end());
  Generator g;
  g.states = std::move(states);
  g.moves.resize(g.size());
  g.exit.assign(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    // rates(label, emit) calls emit(target label or empty for overflow, rate)
    rates(g.states[i], [&](const std::vector<int>& target, double r) {
      if (r == 0.0) return;
      if (r < 0.0) throw ValidationError("negative transition rate");
      g.exit[i] += r;
      if (target.empty()) return;
      const auto it = std::lower_bound(g.states.begin(), g.states.end(), target);
      if (it == g.states.end() || *it != target) return;
      g.moves[i].emplace_back(static_cast<std::size_t>(it - g.states.begin()), r);
    });
  }
  return g;
}

}  // namespace detail

/// One birth-death particle on 0..B (B = bound for finite families); births
/// from B leave the truncation.
template <class T>
Generator birth_death_generator(const BirthDeathSpec<T>& spec, std::optional<int> truncation = std::nullopt) {
  int B = 0;
  if (auto b = spec.bound()) {
    B = truncation ? std::min(*truncation, *b) : *b;
  } else if (truncation) {
    B = *truncation;
  } else {
    throw DomainError("infinite state space needs a truncation bound");
  }
  std::vector<std::vector<int>> states;
  for (int n = 0; n <= B; ++n) states.push_back({n});
  return detail::build_generator(std::move(states), [&](const std::vector<int>& s, auto&& emit) {
    const int n = s[0];
    emit(n + 1 <= B ? std::vector<int>{n + 1} : std::vector<int>{}, to_double(spec.birth(n)));
    if (n > 0) emit({n - 1}, to_double(spec.death(n)));
  });
}

template <class T>
Generator composition_generator(const CompositionProcess<T>& proc) {
  std::vector<std::vector<int>> states;
  for (const auto& c : compositions(proc.N, static_cast<std::size_t>(proc.levels))) states.push_back(c.vector());
  return detail::build_generator(std::move(states), [&](const std::vector<int>& s, auto&& emit) {
    for (const auto& tr : composition_rates(Composition(s), proc)) {
      emit(tr.overflow ? std::vector<int>{} : tr.target.vector(), to_double(tr.rate));
    }
  });
}

template <class T>
Generator urn_generator(const UrnSpec<T>& urn) {
  const std::size_t d = urn.colours();
  std::vector<std::vector<int>> states;
  for (const auto& c : compositions(urn.N, d)) states.push_back(c.vector());
  return detail::build_generator(std::move(states), [&](const std::vector<int>& s, auto&& emit) {
    const Composition x(s);
    for (std::size_t j = 0; j < d; ++j) {
      if (x[j] == 0) continue;
      for (std::size_t l = 0; l < d; ++l) {
        if (l == j) continue;
        emit(x.moved(j, l).vector(), to_double(T(T(x[j]) / T(urn.N) * urn.P[j][l])));
      }
    }
  });
}

struct UniformizationInfo {
  double rate = 0;
  int terms = 0;
  /// Bound on the neglected Poisson mass.
  double tail_bound = 0;
};

/// Rows of exp(tQ) for the given source states, by uniformization:
/// sum_k w_k v P^k with P = I + Q / Lambda and Poisson(Lambda t) weights w_k.
/// Stops once k > Lambda t and w_k / (1 - Lambda t / (k + 1)) < tol, which
/// bounds the remaining Poisson mass.
inline Matrix<double> transition_rows(const Generator& g, double t, const std::vector<std::size_t>& sources,
                                      UniformizationInfo* info = nullptr, double tol = 1e-13) {
  if (t < 0) throw DomainError("time must be nonnegative");
  const std::size_t n = g.size();
  Matrix<double> out(sources.size(), std::vector<double>(n, 0.0));
  const double lam = n ? *std::max_element(g.exit.begin(), g.exit.end()) : 0.0;
  const double a = lam * t;
  if (a == 0.0) {
    for (std::size_t r = 0; r < sources.size(); ++r) out[r][sources[r]] = 1.0;
    if (info) *info = {lam, 0, 0.0};
    return out;
  }
  Matrix<double> v(sources.size(), std::vector<double>(n, 0.0));
  for (std::size_t r = 0; r < sources.size(); ++r) v[r][sources[r]] = 1.0;
  std::vector<double> next(n);
  int k = 0;
  double tail = 0;
  for (;; ++k) {
    const double logw = -a + k * std::log(a) - std::lgamma(k + 1.0);
    const double w = std::exp(logw);
    if (w > 0) {
      for (std::size_t r = 0; r < sources.size(); ++r) {
        for (std::size_t j = 0; j < n; ++j) out[r][j] += w * v[r][j];
      }
    }
    if (k + 1 > a) {
      const double wn = std::exp(logw + std::log(a) - std::log(k + 1.0));
      tail = wn / (1.0 - a / (k + 2.0));
      if (tail < tol) break;
    }
    if (k > 10000000) throw TruncationError("uniformization did not converge");
    for (std::size_t r = 0; r < sources.size(); ++r) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double vi = v[r][i];
        if (vi == 0.0) continue;
        next[i] += vi * (1.0 - g.exit[i] / lam);
        for (const auto& [j, rate] : g.moves[i]) next[j] += vi * rate / lam;
      }
      v[r].swap(next);
    }
  }
  if (info) *info = {lam, k + 1, tail};
  return out;
}

/// Full exp(tQ) over the enumerated states.
inline Matrix<double> generator_expm(const Generator& g, double t, UniformizationInfo* info = nullptr) {
  std::vector<std::size_t> all(g.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return transition_rows(g, t, all, info);
}

struct SimConfig {
  std::uint64_t seed = 1;
  std::size_t replicates = 1;
  double t = 0;
  std::vector<int> x0;
  /// 0 picks hardware concurrency.
  unsigned threads = 0;
};

/// Terminal state index per replicate; -1 marks a path that left the truncation.
using Paths = std::vector<std::int64_t>;

namespace detail {

inline std::mt19937_64 replicate_engine(std::uint64_t seed, std::uint64_t replicate) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate), static_cast<std::uint32_t>(replicate >> 32)};
  return std::mt19937_64(seq);
}

inline std::int64_t run_path(const Generator& g, std::size_t start, double t, std::mt19937_64& rng) {
  std::size_t s = start;
  double now = 0;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (;;) {
    const double q = g.exit[s];
    if (q <= 0) return static_cast<std::int64_t>(s);
    now += std::exponential_distribution<double>(q)(rng);
    if (now > t) return static_cast<std::int64_t>(s);
    double u = unif(rng) * q;
    bool moved = false;
    for (const auto& [j, r] : g.moves[s]) {
      if (u < r) {
        s = j;
        moved = true;
        break;
      }
      u -= r;
    }
    if (!moved) {
      // the remainder of the exit rate leaves the truncation; rounding at the
      // last kept move is attributed to that move
      if (g.leak(s) <= 0 && !g.moves[s].empty()) {
        s = g.moves[s].back().first;
      } else {
        return -1;
      }
    }
  }
}

}  // namespace detail

/// Exact-jump (Gillespie) simulation of `replicates` independent paths to time
/// t. Replicate r draws from its own engine seeded by (seed, r), so results do
/// not depend on the thread count.
inline Paths simulate_path(const Generator& g, const SimConfig& cfg) {
  if (cfg.replicates < 1) throw DomainError("need at least one replicate");
  if (cfg.t < 0) throw DomainError("time must be nonnegative");
  const std::size_t start = g.index(cfg.x0);
  Paths out(cfg.replicates);
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.replicates));
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      auto rng = detail::replicate_engine(cfg.seed, r);
      out[r] = detail::run_path(g, start, cfg.t, rng);
    }
  };
  if (threads <= 1) {
    work(0, cfg.replicates);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (cfg.replicates + threads - 1) / threads;
  for (unsigned k = 0; k < threads; ++k) {
    const std::size_t lo = k * chunk, hi = std::min(cfg.replicates, lo + chunk);
    if (lo < hi) pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();
  return out;
}

struct EmpiricalDistribution {
  std::map<std::vector<int>, std::size_t> counts;
  std::size_t overflow = 0;
  std::size_t replicates = 0;

  double frequency(const std::vector<int>& s) const {
    const auto it = counts.find(s);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(replicates);
  }

  /// sqrt(f (1 - f) / R).
  double standard_error(const std::vector<int>& s) const {
    const double f = frequency(s);
    return std::sqrt(f * (1 - f) / static_cast<double>(replicates));
  }

  double overflow_fraction() const { return static_cast<double>(overflow) / static_cast<double>(replicates); }
};

inline EmpiricalDistribution empirical_transition(const Generator& g, const Paths& paths) {
  if (paths.empty()) throw DomainError("need at least one replicate");
  EmpiricalDistribution e;
  e.replicates = paths.size();
  for (auto s : paths) {
    if (s < 0) {
      ++e.overflow;
    } else {
      ++e.counts[g.states[static_cast<std::size_t>(s)]];
    }
  }
  return e;
}

struct ChiSquare {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
};

/// Pearson test of the counts against `expected` probabilities (indexed like
/// g.states). Cells with expected count below `min_expected` are pooled.
inline ChiSquare chi_square_test(const Generator& g, const EmpiricalDistribution& e, const std::vector<double>& expected,
                                 double min_expected = 5.0) {
  if (expected.size() != g.size()) throw DomainError("expected probabilities do not match the state list");
  const double R = static_cast<double>(e.replicates);
  ChiSquare out;
  int cells = 0;
  double pool_obs = static_cast<double>(e.overflow), pool_exp = 0;
  double kept = 0;
  for (double p : expected) kept += p;
  pool_exp += std::max(0.0, 1.0 - kept) * R;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto it = e.counts.find(g.states[i]);
    const double obs = it == e.counts.end() ? 0.0 : static_cast<double>(it->second);
    const double ex = expected[i] * R;
    if (ex < min_expected) {
      pool_obs += obs;
      pool_exp += ex;
      continue;
    }
    out.statistic += (obs - ex) * (obs - ex) / ex;
    ++cells;
  }
  if (pool_exp >= min_expected) {
    out.statistic += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
    ++cells;
  }
  out.dof = cells - 1;
  if (out.dof >= 1) {
    out.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(out.dof), out.statistic));
  }
  return out;
}

}  // namespace mvk

#endif  // MVK_SIM_HPP
