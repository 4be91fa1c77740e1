#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "mvk/linalg.hpp"
#include "mvk/polys.hpp"

using mvk::Rational;
using fx::R;

namespace {

template <class T>
T binomial_pmf(int N, int x, const T& p) {
  return mvk::binomial<T>(N, x) * mvk::power(p, x) * mvk::power(T(1) - p, N - x);
}

}  // namespace

TEST(Krawtchouk, Examples) {
  const mvk::KrawtchoukParams<Rational> k4(4, R("1/2"));
  const mvk::KrawtchoukParams<Rational> k2(2, R("1/2"));
  EXPECT_EQ(mvk::krawtchouk(0, 3, k4), 1);
  EXPECT_EQ(mvk::krawtchouk(1, 2, k4), 0);
  EXPECT_EQ(mvk::krawtchouk(2, 1, k2), R("-1/2"));
  EXPECT_THROW(mvk::krawtchouk(5, 1, k4), mvk::DomainError);
  EXPECT_THROW(mvk::krawtchouk(1, 5, k4), mvk::DomainError);
  EXPECT_THROW(mvk::KrawtchoukParams<Rational>(3, R("1")), mvk::DomainError);
}

TEST(Krawtchouk, NormExamples) {
  EXPECT_EQ(mvk::krawtchouk_norm(0, mvk::KrawtchoukParams<Rational>(4, R("1/2"))), 1);
  EXPECT_EQ(mvk::krawtchouk_norm(2, mvk::KrawtchoukParams<Rational>(4, R("1/2"))), R("3/2"));
  EXPECT_EQ(mvk::krawtchouk_norm(3, mvk::KrawtchoukParams<Rational>(3, R("1/3"))), R("32/81"));
}

TEST(Krawtchouk, ExactOrthogonality) {
  for (const char* ps : {"1/4", "1/3", "1/2"}) {
    const Rational p = R(ps);
    for (int N = 0; N <= 8; ++N) {
      const mvk::KrawtchoukParams<Rational> prm(N, p);
      for (int m = 0; m <= N; ++m) {
        for (int n = 0; n <= N; ++n) {
          Rational s = 0;
          for (int x = 0; x <= N; ++x) {
            s += binomial_pmf(N, x, p) * mvk::krawtchouk(m, x, prm) * mvk::krawtchouk(n, x, prm);
          }
          EXPECT_EQ(s, m == n ? mvk::krawtchouk_norm(n, prm) : Rational(0)) << "N=" << N << " m=" << m << " n=" << n;
        }
      }
    }
  }
}

TEST(Krawtchouk, SymmetricFunctionForm) {
  EXPECT_EQ(mvk::krawtchouk_symmetric<Rational>(1, std::vector<int>{1, 0}, R("1/2")), 0);
  EXPECT_EQ(mvk::krawtchouk_symmetric<Rational>(2, std::vector<int>{1, 0}, R("1/2")), R("-1/2"));
  const Rational p = R("1/3");
  for (int N = 0; N <= 6; ++N) {
    const mvk::KrawtchoukParams<Rational> prm(N, p);
    for (int mask = 0; mask < (1 << N); ++mask) {
      std::vector<int> xi(N);
      int x = 0;
      for (int i = 0; i < N; ++i) x += xi[i] = (mask >> i) & 1;
      for (int n = 0; n <= N; ++n) {
        EXPECT_EQ(mvk::krawtchouk_symmetric<Rational>(n, xi, p), mvk::krawtchouk(n, x, prm));
      }
    }
  }
  EXPECT_THROW(mvk::krawtchouk_symmetric<Rational>(1, std::vector<int>{2}, p), mvk::DomainError);
}

// K_n is monic in x: fit its coefficients exactly and read the top one.
TEST(Krawtchouk, LeadingCoefficientIsOne) {
  for (int N = 1; N <= 6; ++N) {
    const mvk::KrawtchoukParams<Rational> prm(N, R("1/3"));
    for (int n = 0; n <= N; ++n) {
      mvk::Matrix<Rational> A;
      std::vector<Rational> b;
      for (int x = 0; x <= N; ++x) {
        std::vector<Rational> row;
        for (int e = 0; e <= N; ++e) row.push_back(mvk::power(Rational(x), e));
        A.push_back(row);
        b.push_back(mvk::krawtchouk(n, x, prm));
      }
      const auto c = mvk::solve_consistent(A, b);
      EXPECT_EQ(c[n], 1);
      for (int e = n + 1; e <= N; ++e) EXPECT_EQ(c[e], 0);
    }
  }
}

TEST(Meixner, Examples) {
  const mvk::MeixnerParams<Rational> m(R("3/2"), R("1/3"));
  EXPECT_EQ(mvk::meixner(0, 4, m), 1);
  EXPECT_EQ(mvk::meixner(1, 0, m), 1);
  EXPECT_EQ(mvk::meixner(1, 1, mvk::MeixnerParams<Rational>(R("1"), R("1/2"))), 0);
  // M_1 = 1 + x (q - 1) / (a q)
  for (int x = 0; x < 5; ++x) {
    EXPECT_EQ(mvk::meixner(1, x, m), 1 + Rational(x) * (m.q - 1) / (m.a * m.q));
  }
  EXPECT_THROW(mvk::MeixnerParams<Rational>(R("0"), R("1/2")), mvk::DomainError);
  EXPECT_THROW(mvk::MeixnerParams<Rational>(R("1"), R("1")), mvk::DomainError);
}

TEST(Meixner, TruncatedOrthogonality) {
  const mvk::MeixnerParams<double> m(1.7, 0.4);
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; b < a; ++b) {
      double s = 0, w = std::pow(1 - m.q, m.a);
      for (int x = 0; x < 200; ++x) {
        s += w * mvk::meixner(a, x, m) * mvk::meixner(b, x, m);
        w *= (m.a + x) / (x + 1) * m.q;
      }
      EXPECT_LT(std::abs(s), 1e-8);
    }
  }
}

TEST(Charlier, Examples) {
  const mvk::CharlierParams<Rational> c(R("3"));
  EXPECT_EQ(mvk::charlier(0, 7, c), 1);
  EXPECT_EQ(mvk::charlier(1, 3, c), 0);
  EXPECT_EQ(mvk::charlier(2, 0, c), 1);
  EXPECT_THROW(mvk::CharlierParams<Rational>(R("0")), mvk::DomainError);
}

TEST(Charlier, TruncatedOrthogonality) {
  const mvk::CharlierParams<double> c(2.5);
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; b < a; ++b) {
      double s = 0, w = std::exp(-c.nu);
      for (int x = 0; x < 80; ++x) {
        s += w * mvk::charlier(a, x, c) * mvk::charlier(b, x, c);
        w *= c.nu / (x + 1);
      }
      EXPECT_LT(std::abs(s), 1e-8);
    }
  }
}

TEST(Laguerre, SpectralSignConvention) {
  EXPECT_EQ(mvk::laguerre(0, R("5"), mvk::LaguerreParams<Rational>(R("2"))), 1);
  EXPECT_EQ(mvk::laguerre(1, R("1"), mvk::LaguerreParams<Rational>(R("2"))), 3);
  EXPECT_EQ(mvk::laguerre(1, R("0"), mvk::LaguerreParams<Rational>(R("1"))), 1);
  // degree 2 of (1-z)^-b exp(xz/(1-z)): b(b+1)/2 + (b+1) x + x^2/2
  const Rational b = R("3/2"), x = R("2/3");
  EXPECT_EQ(mvk::laguerre(2, x, mvk::LaguerreParams<Rational>(b)), b * (b + 1) / 2 + (b + 1) * x + x * x / 2);
}

TEST(DualHahn, Examples) {
  const mvk::DualHahnParams<Rational> h(R("2"), R("2"), 2);
  EXPECT_EQ(mvk::dual_hahn(0, 1, h), 1);
  for (int n = 0; n <= 2; ++n) EXPECT_EQ(mvk::dual_hahn(n, 0, h), 1);
  EXPECT_EQ(mvk::dual_hahn(1, 1, h), 0);
  EXPECT_THROW(mvk::DualHahnParams<Rational>(R("1"), R("3"), 2), mvk::DomainError);
}

TEST(Families, DispatchMatchesDirect) {
  const mvk::FamilyParams<Rational> k = mvk::KrawtchoukParams<Rational>(4, R("1/3"));
  EXPECT_EQ(mvk::evaluate(k, 2, Rational(1)), mvk::krawtchouk(2, 1, mvk::KrawtchoukParams<Rational>(4, R("1/3"))));
  const mvk::FamilyParams<Rational> l = mvk::LaguerreParams<Rational>(R("2"));
  EXPECT_EQ(mvk::evaluate(l, 1, Rational(1)), 3);
}

// Re-derive each family from a differently factored series and compare.
TEST(Families, SeriesConsistency) {
  using S = mvk::Series<double>;
  const int n = 6;
  // Charlier: exp(w + z log(1 - w/nu))
  {
    const double nu = 1.3;
    for (int z = 0; z < 5; ++z) {
      S lg = S::linear_power(n, -1.0 / nu, 1).log();
      S arg = lg.scaled(z);
      arg[1] += 1.0;
      const S g = arg.exp();
      for (int k = 0; k <= n; ++k) {
        EXPECT_NEAR(g[k] * mvk::factorial<double>(k), mvk::charlier(k, z, mvk::CharlierParams<double>(nu)), 1e-12);
      }
    }
  }
  // Meixner: ((1-z/q)/(1-z))^x / (1-z)^a via log/exp
  {
    const double a = 0.7, q = 0.6;
    for (int x = 0; x < 4; ++x) {
      S num = S::linear_power(n, -1.0 / q, 1).log().scaled(x);
      S den = S::linear_power(n, -1.0, 1).log().scaled(-(x + a));
      const S g = (num + den).exp();
      for (int k = 0; k <= n; ++k) {
        EXPECT_NEAR(g[k] * mvk::factorial<double>(k) / mvk::rising(a, k),
                    mvk::meixner(k, x, mvk::MeixnerParams<double>(a, q)), 1e-12);
      }
    }
  }
  // Krawtchouk through the inverse of (1 - p z)^-(N-x)
  {
    const int N = 6;
    const double p = 0.3;
    for (int x = 0; x <= N; ++x) {
      const S g = S::linear_power(n, 1 - p, x) * S::linear_power(n, -p, N - x).inverse().inverse();
      for (int k = 0; k <= N; ++k) {
        EXPECT_NEAR(g[k] * mvk::factorial<double>(k), mvk::krawtchouk(k, x, mvk::KrawtchoukParams<double>(N, p)),
                    1e-12);
      }
    }
  }
}

TEST(Meixner, GeometricRepresentation) {
  // trials with X failures then a success, padded with alternating outcomes
  auto trials = [](int X, int L) {
    std::vector<int> t(L, 0);
    t[X] = 1;
    for (int i = X + 1; i < L; ++i) t[i] = (i % 3 == 0);
    return t;
  };
  const mvk::MeixnerParams<double> g(1.0, 0.5);
  EXPECT_NEAR(mvk::meixner_geometric_representation<double>(1, trials(0, 30), 0.5, 30), 1.0, 1e-6);
  EXPECT_NEAR(mvk::meixner_geometric_representation<double>(1, trials(1, 40), 0.5, 40), mvk::meixner(1, 1, g), 1e-6);
  EXPECT_NEAR(mvk::meixner_geometric_representation<double>(2, trials(0, 40), 0.5, 40), 1.0, 1e-6);
  for (int n = 1; n <= 3; ++n) {
    for (int X = 0; X <= 3; ++X) {
      EXPECT_NEAR(mvk::meixner_geometric_representation<double>(n, trials(X, 40), 0.5, 40), mvk::meixner(n, X, g),
                  1e-6);
      // exact in rationals: only trials up to the first success contribute
      const mvk::MeixnerParams<Rational> gr(Rational(1), R("1/3"));
      EXPECT_EQ(mvk::meixner_geometric_representation<Rational>(n, trials(X, 12), R("2/3"), 12),
                mvk::meixner(n, X, gr));
    }
  }
  EXPECT_THROW(mvk::meixner_geometric_representation<double>(1, std::vector<int>(10, 0), 0.5, 10),
               mvk::TruncationError);
  EXPECT_GT(mvk::default_geometric_truncation(2, 0.5), 20);
}
