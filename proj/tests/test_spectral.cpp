#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "mvk/sim.hpp"
#include "mvk/spectral.hpp"

using mvk::BirthDeathSpec;
using mvk::Rational;
using fx::R;

namespace {

struct Case {
  const char* name;
  BirthDeathSpec<double> spec;
  int truncation;
  /// Intermediate states kept in sums over the state space: far enough that
  /// the neglected mass is negligible, near enough that the spectral sum has
  /// not lost its digits to cancellation.
  int reach;
};

std::vector<Case> discrete_cases() {
  return {
      {"mm-infinity", BirthDeathSpec<double>::mm_infinity(1.0, 1.0), 60, 40},
      {"linear-sub", BirthDeathSpec<double>::linear(1.0, 2.0, 1.5), 150, 40},
      {"linear-super", BirthDeathSpec<double>::linear(2.0, 1.0, 1.0), 250, 22},
      {"two-urn", BirthDeathSpec<double>::two_urn(6.0, 7.0, 5), 5, 5},
      {"ehrenfest", BirthDeathSpec<double>::ehrenfest(5, 1.0 / 3.0), 5, 5},
  };
}

double max_rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(BirthDeath, RatesAndPiWeights) {
  const auto mm = BirthDeathSpec<Rational>::mm_infinity(R("2"), R("1"));
  EXPECT_EQ(mm.birth(3), 2);
  EXPECT_EQ(mm.death(3), 3);
  EXPECT_EQ(mm.death(0), 0);
  EXPECT_EQ(mvk::pi_weight(mm, 3), R("8/6"));
  const auto e = BirthDeathSpec<Rational>::ehrenfest(4, R("1/4"));
  // pi_j = C(N, j) (p/q)^j
  EXPECT_EQ(mvk::pi_weight(e, 2), R("6/9"));
  EXPECT_EQ(e.birth(4), 0);
  EXPECT_THROW(mvk::pi_weight(e, 5), mvk::DomainError);
  const auto u = BirthDeathSpec<Rational>::two_urn(R("5"), R("6"), 3);
  EXPECT_EQ(u.birth(1), 2 * 4);
  EXPECT_EQ(u.death(1), 1 * (6 - 2));
  EXPECT_THROW(BirthDeathSpec<Rational>::two_urn(R("2"), R("6"), 3), mvk::DomainError);
  EXPECT_THROW(BirthDeathSpec<double>::ehrenfest(3, 1.0), mvk::DomainError);
}

TEST(BirthDeath, RecurrenceFirstStep) {
  // Q_1(z) = 1 - z / lambda for M/M/inf
  const auto mm = BirthDeathSpec<Rational>::mm_infinity(R("1"), R("1"));
  EXPECT_EQ(mvk::recurrence_eval(mm, 1, Rational(1)), 0);
  EXPECT_EQ(mvk::recurrence_eval(mm, 1, R("1/3")), R("2/3"));
  const auto custom = BirthDeathSpec<double>::custom([](int) { return 0.0; }, [](int n) { return double(n); });
  EXPECT_THROW(mvk::recurrence_eval(custom, 2, 0.5), mvk::ValidationError);
  EXPECT_THROW(mvk::SpectralData<double>{custom}, mvk::UnsupportedError);
}

TEST(Spectral, SupportExamples) {
  const mvk::SpectralData<Rational> e(BirthDeathSpec<Rational>::ehrenfest(2, R("1/2")));
  EXPECT_EQ(*e.support_size(), 3);
  EXPECT_EQ(e.point(2), 2);
  EXPECT_EQ(e.mass(1), R("1/2"));
  const mvk::SpectralData<Rational> u(BirthDeathSpec<Rational>::two_urn(R("4"), R("5"), 3));
  EXPECT_EQ(u.point(1), 1 * (4 + 5 + 1 - 1));
  Rational total(0);
  for (int l = 0; l < 4; ++l) total += u.mass(l);
  EXPECT_EQ(total, 1);
  const mvk::SpectralData<double> sub(BirthDeathSpec<double>::linear(1.0, 2.0, 2.0));
  EXPECT_TRUE(sub.stationary());
  EXPECT_DOUBLE_EQ(sub.point(3), 3.0);
  const mvk::SpectralData<double> sup(BirthDeathSpec<double>::linear(2.0, 1.0, 2.0));
  EXPECT_FALSE(sup.stationary());
  EXPECT_DOUBLE_EQ(sup.point(0), 2.0);
  const mvk::SpectralData<double> crit(BirthDeathSpec<double>::linear(1.0, 1.0, 2.0));
  EXPECT_EQ(crit.kind(), mvk::SpectrumKind::Continuous);
  EXPECT_THROW(crit.point(0), mvk::UnsupportedError);
}

TEST(Spectral, RecurrenceMatchesClosedFormExact) {
  const std::vector<BirthDeathSpec<Rational>> specs{
      BirthDeathSpec<Rational>::mm_infinity(R("3/2"), R("1/2")),
      BirthDeathSpec<Rational>::linear(R("1"), R("3"), R("2")),
      BirthDeathSpec<Rational>::linear(R("3"), R("1"), R("1/2")),
      BirthDeathSpec<Rational>::two_urn(R("9"), R("11"), 8),
      BirthDeathSpec<Rational>::ehrenfest(8, R("1/3")),
  };
  for (const auto& s : specs) {
    const mvk::SpectralData<Rational> d(s);
    const int top = d.support_size().value_or(10);
    for (int n = 0; n <= 8; ++n) {
      for (int l = 0; l < top; ++l) {
        EXPECT_EQ(d.poly(n, l), mvk::recurrence_eval(s, n, d.point(l))) << mvk::family_name(s.family) << " n=" << n
                                                                         << " l=" << l;
      }
    }
  }
}

TEST(Spectral, RecurrenceMatchesClosedFormFloat) {
  for (const auto& c : discrete_cases()) {
    const mvk::SpectralData<double> d(c.spec);
    const int top = d.support_size().value_or(12);
    for (int n = 0; n <= std::min(8, top - 1); ++n) {
      for (int l = 0; l < top; ++l) {
        const double a = d.poly(n, l), b = mvk::recurrence_eval(c.spec, n, d.point(l));
        EXPECT_LT(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(b))) << c.name;
      }
    }
  }
  const auto crit = BirthDeathSpec<double>::linear(0.8, 0.8, 1.7);
  const mvk::SpectralData<double> d(crit);
  for (int n = 0; n <= 8; ++n) {
    for (double z : {0.0, 0.3, 1.1, 2.5, 7.0}) {
      const double a = d.poly_at(n, z), b = mvk::recurrence_eval(crit, n, z);
      EXPECT_LT(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(b))) << "n=" << n << " z=" << z;
    }
  }
}

TEST(Spectral, MassesSumToOne) {
  for (const auto& c : discrete_cases()) {
    const mvk::SpectralData<double> d(c.spec);
    double s = 0;
    for (int l = 0; l < d.support_size().value_or(400); ++l) s += d.mass(l);
    EXPECT_NEAR(s, 1.0, 1e-12) << c.name;
  }
}

TEST(Spectral, KarlinMcGregorMatchesUniformization) {
  for (const auto& c : discrete_cases()) {
    const mvk::SpectralData<double> d(c.spec);
    const auto g = mvk::birth_death_generator(c.spec, c.truncation);
    const int top = std::min(5, c.spec.bound().value_or(5));
    std::vector<std::size_t> src;
    for (int i = 0; i <= top; ++i) src.push_back(static_cast<std::size_t>(i));
    for (double t : {0.1, 1.0}) {
      const auto P = mvk::transition_rows(g, t, src);
      for (int i = 0; i <= top; ++i) {
        for (int j = 0; j <= top; ++j) {
          const auto r = mvk::km_transition(d, i, j, t);
          EXPECT_FALSE(r.flagged) << c.name;
          EXPECT_LT(std::abs(r.value - P[i][j]), 1e-8) << c.name << " i=" << i << " j=" << j << " t=" << t;
        }
      }
    }
  }
}

TEST(Spectral, ContinuousQuadratureMatchesUniformization) {
  const auto spec = BirthDeathSpec<double>::linear(1.0, 1.0, 1.5);
  const mvk::SpectralData<double> d(spec);
  const auto g = mvk::birth_death_generator(spec, 400);
  const std::vector<std::size_t> src{0, 1, 2, 3, 4, 5};
  for (double t : {0.1, 1.0}) {
    const auto P = mvk::transition_rows(g, t, src);
    for (int i = 0; i <= 5; ++i) {
      for (int j = 0; j <= 5; ++j) {
        EXPECT_LT(std::abs(mvk::km_transition(d, i, j, t).value - P[i][j]), 1e-6) << i << "," << j << " t=" << t;
      }
    }
  }
  EXPECT_THROW(mvk::km_transition(mvk::SpectralData<Rational>(BirthDeathSpec<Rational>::linear(1, 1, 1)), 0, 0,
                                  Rational(1)),
               mvk::UnsupportedError);
}

TEST(Spectral, MMInfinityClosedForm) {
  const mvk::SpectralData<double> d(BirthDeathSpec<double>::mm_infinity(1.0, 1.0));
  const double expect = std::exp(-(1.0 - std::exp(-1.0)));
  EXPECT_NEAR(mvk::km_transition(d, 0, 0, 1.0).value, expect, 1e-12);
  EXPECT_NEAR(expect, 0.531464, 1e-6);
  const auto g = mvk::birth_death_generator(BirthDeathSpec<double>::mm_infinity(1.0, 1.0), 40);
  EXPECT_NEAR(mvk::transition_rows(g, 1.0, {0})[0][0], expect, 1e-8);
}

TEST(Spectral, ChapmanKolmogorovAndReversibility) {
  for (const auto& c : discrete_cases()) {
    const mvk::SpectralData<double> d(c.spec);
    const int K = c.reach;
    const int top = std::min(4, K);
    const double s = 0.4, t = 0.6;
    for (int i = 0; i <= top; ++i) {
      for (int j = 0; j <= top; ++j) {
        double conv = 0;
        for (int k = 0; k <= K; ++k) {
          conv += mvk::km_transition(d, i, k, s).value * mvk::km_transition(d, k, j, t).value;
        }
        EXPECT_LT(std::abs(conv - mvk::km_transition(d, i, j, s + t).value), 1e-7) << c.name;
        const double lhs = mvk::pi_weight(c.spec, i) * mvk::km_transition(d, i, j, t).value;
        const double rhs = mvk::pi_weight(c.spec, j) * mvk::km_transition(d, j, i, t).value;
        EXPECT_LT(max_rel(lhs, rhs), 1e-10) << c.name;
      }
    }
  }
}

TEST(Spectral, RowSums) {
  for (const auto& c : discrete_cases()) {
    const mvk::SpectralData<double> d(c.spec);
    const int K = c.reach;
    for (int i = 0; i <= std::min(3, K); ++i) {
      double s = 0;
      for (int j = 0; j <= K; ++j) {
        const auto r = mvk::km_transition(d, i, j, 0.5);
        // the rounding bound is conservative; far tiny values may be flagged
        if (j <= 10) {
          EXPECT_FALSE(r.flagged) << c.name << " j=" << j;
        }
        s += r.value;
      }
      EXPECT_GT(s, 0.0);
      EXPECT_LT(s, 1.0 + 1e-8);
      if (d.stationary()) {
        EXPECT_NEAR(s, 1.0, 1e-8) << c.name;
      }
    }
  }
  const mvk::SpectralData<Rational> e(BirthDeathSpec<Rational>::ehrenfest(3, R("1/4")));
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; j <= 3; ++j) EXPECT_EQ(mvk::km_transition(e, i, j, Rational(0)).value, i == j ? 1 : 0);
  }
}

TEST(Spectral, StationaryDistribution) {
  const auto e = mvk::stationary_distribution(BirthDeathSpec<Rational>::ehrenfest(3, R("1/4")), 10);
  ASSERT_TRUE(e);
  ASSERT_EQ(e->size(), 4u);
  EXPECT_EQ((*e)[0], R("27/64"));
  EXPECT_EQ((*e)[3], R("1/64"));
  const auto mm = mvk::stationary_distribution(BirthDeathSpec<double>::mm_infinity(2.0, 1.0), 5);
  ASSERT_TRUE(mm);
  EXPECT_NEAR((*mm)[2], std::exp(-2.0) * 2.0, 1e-14);
  EXPECT_FALSE(mvk::stationary_distribution(BirthDeathSpec<double>::linear(2.0, 1.0, 1.0), 5));
  const auto sub = mvk::stationary_distribution(BirthDeathSpec<double>::linear(1.0, 2.0, 1.0), 4);
  ASSERT_TRUE(sub);
  // Geometric(1/2) for beta = 1
  EXPECT_NEAR((*sub)[3], 1.0 / 16.0, 1e-14);
}

TEST(Spectral, EigenfunctionOrthonormality) {
  const mvk::SpectralData<Rational> e(BirthDeathSpec<Rational>::ehrenfest(2, R("1/2")));
  const auto st = mvk::spectral_eigenfunctions(e, mvk::EigenForm::Stationary, 3, 3);
  EXPECT_EQ(st.orthonormality_defect(), 0);
  // psi_l / psi_0 = C(2, l): the table itself needs sqrt(2)
  EXPECT_THROW(st.u(), mvk::UnsupportedError);
  EXPECT_EQ(st.q[1][0], 1);
  const auto gen = mvk::spectral_eigenfunctions(e, mvk::EigenForm::General, 3, 3);
  EXPECT_EQ(gen.orthonormality_defect(), 0);
  const mvk::SpectralData<Rational> urn(BirthDeathSpec<Rational>::two_urn(R("5"), R("7"), 4));
  EXPECT_EQ(mvk::spectral_eigenfunctions(urn, mvk::EigenForm::Stationary, 5, 5).orthonormality_defect(), 0);
  const mvk::SpectralData<double> sup(BirthDeathSpec<double>::linear(2.0, 1.0, 1.0));
  EXPECT_THROW(mvk::spectral_eigenfunctions(sup, mvk::EigenForm::Stationary, 3, 3), mvk::DomainError);
  // the general form on an infinite spectrum is orthonormal once enough states are kept
  const auto g = mvk::spectral_eigenfunctions(sup, mvk::EigenForm::General, 3, 120);
  EXPECT_LT(g.orthonormality_defect(), 1e-10);
}

TEST(Quadrature, GaussLaguerreMoments) {
  const auto rule = mvk::gauss_laguerre(20, 0.5);
  // E[r^k] = (alpha+1)_(k) for the normalized gamma(alpha+1) weight
  double m0 = 0, m1 = 0, m3 = 0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    m0 += rule.weights[k];
    m1 += rule.weights[k] * rule.nodes[k];
    m3 += rule.weights[k] * std::pow(rule.nodes[k], 3);
  }
  EXPECT_NEAR(m0, 1.0, 1e-13);
  EXPECT_NEAR(m1, 1.5, 1e-12);
  EXPECT_NEAR(m3, 1.5 * 2.5 * 3.5, 1e-10);
  EXPECT_THROW(mvk::gauss_laguerre(0, 0.0), mvk::DomainError);
}
