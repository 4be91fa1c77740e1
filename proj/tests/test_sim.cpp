#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "mvk/sim.hpp"

using mvk::BirthDeathSpec;
using mvk::Composition;
using mvk::CompositionProcess;

namespace {

CompositionProcess<double> ehrenfest2() { return {BirthDeathSpec<double>::ehrenfest(2, 1.0 / 3.0), 2}; }

}  // namespace

TEST(Generator, Enumeration) {
  const auto g = mvk::composition_generator(ehrenfest2());
  ASSERT_EQ(g.size(), 6u);
  EXPECT_TRUE(std::is_sorted(g.states.begin(), g.states.end()));
  EXPECT_EQ(g.states.front(), (std::vector<int>{0, 0, 2}));
  EXPECT_EQ(g.index({2, 0, 0}), 5u);
  EXPECT_THROW(g.index({1, 1}), mvk::DomainError);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g.leak(i), 0.0, 1e-15);
  const CompositionProcess<double> big(BirthDeathSpec<double>::mm_infinity(1.0, 1.0), 6, 12);
  EXPECT_THROW(mvk::composition_generator(big), mvk::ScaleError);
}

TEST(Uniformization, IdentityAndRowSums) {
  const auto g = mvk::composition_generator(CompositionProcess<double>(BirthDeathSpec<double>::two_urn(4, 5, 3), 3));
  const auto I = mvk::generator_expm(g, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(I[i][j], i == j ? 1.0 : 0.0);
  }
  mvk::UniformizationInfo info;
  const auto P = mvk::generator_expm(g, 1.3, &info);
  EXPECT_LT(info.tail_bound, 1e-13);
  for (const auto& row : P) {
    double s = 0;
    for (double v : row) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  // semigroup
  const auto A = mvk::generator_expm(g, 0.5), B = mvk::generator_expm(g, 0.8);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      double s = 0;
      for (std::size_t k = 0; k < g.size(); ++k) s += A[i][k] * B[k][j];
      EXPECT_NEAR(s, P[i][j], 1e-12);
    }
  }
}

TEST(Uniformization, TruncatedChainLosesMass) {
  const auto g = mvk::birth_death_generator(BirthDeathSpec<double>::mm_infinity(3.0, 1.0), 4);
  EXPECT_GT(g.leak(4), 0.0);
  const auto P = mvk::transition_rows(g, 2.0, {0});
  double s = 0;
  for (double v : P[0]) s += v;
  EXPECT_LT(s, 1.0);
  EXPECT_GT(s, 0.0);
}

TEST(Simulation, ZeroTimeAndAbsorbing) {
  const auto g = mvk::composition_generator(ehrenfest2());
  mvk::SimConfig cfg;
  cfg.replicates = 50;
  cfg.x0 = {1, 1, 0};
  const auto paths = mvk::simulate_path(g, cfg);
  for (auto s : paths) EXPECT_EQ(g.states[static_cast<std::size_t>(s)], cfg.x0);

  const auto still = mvk::birth_death_generator(
      BirthDeathSpec<double>::custom([](int) { return 0.0; }, [](int) { return 0.0; }, 3));
  cfg.t = 10;
  cfg.x0 = {2};
  for (auto s : mvk::simulate_path(still, cfg)) EXPECT_EQ(s, 2);
}

TEST(Simulation, DeterministicAcrossThreads) {
  const auto g = mvk::composition_generator(ehrenfest2());
  mvk::SimConfig cfg;
  cfg.seed = 99;
  cfg.replicates = 2000;
  cfg.t = 0.7;
  cfg.x0 = {2, 0, 0};
  cfg.threads = 1;
  const auto a = mvk::simulate_path(g, cfg);
  cfg.threads = 3;
  const auto b = mvk::simulate_path(g, cfg);
  EXPECT_EQ(a, b);
  cfg.seed = 100;
  EXPECT_NE(a, mvk::simulate_path(g, cfg));
}

TEST(Simulation, EmpiricalBookkeeping) {
  const auto g = mvk::composition_generator(ehrenfest2());
  const mvk::Paths one{3};
  const auto e = mvk::empirical_transition(g, one);
  EXPECT_EQ(e.frequency(g.states[3]), 1.0);
  EXPECT_EQ(e.standard_error(g.states[3]), 0.0);
  EXPECT_THROW(mvk::empirical_transition(g, mvk::Paths{}), mvk::DomainError);

  const CompositionProcess<double> mm(BirthDeathSpec<double>::mm_infinity(4.0, 1.0), 2, 3);
  const auto gm = mvk::composition_generator(mm);
  mvk::SimConfig cfg;
  cfg.replicates = 5000;
  cfg.t = 1.0;
  cfg.x0 = {2, 0, 0};
  const auto em = mvk::empirical_transition(gm, mvk::simulate_path(gm, cfg));
  EXPECT_GT(em.overflow, 0u);
  double f = 0;
  for (const auto& [s, c] : em.counts) f += em.frequency(s);
  EXPECT_NEAR(f, 1.0 - em.overflow_fraction(), 1e-12);
}

TEST(Simulation, MatchesSpectralPrediction) {
  const auto proc = ehrenfest2();
  const auto g = mvk::composition_generator(proc);
  mvk::SimConfig cfg;
  cfg.seed = 20240611;
  cfg.replicates = 100000;
  cfg.t = 1.0;
  cfg.x0 = {2, 0, 0};
  const auto e = mvk::empirical_transition(g, mvk::simulate_path(g, cfg));
  EXPECT_EQ(e.overflow, 0u);
  std::vector<double> expected;
  for (const auto& s : g.states) {
    const double p = mvk::composition_transition(Composition(cfg.x0), Composition(s), cfg.t, proc).value;
    expected.push_back(p);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(cfg.replicates));
    EXPECT_LT(std::abs(e.frequency(s) - p), 4 * sigma) << Composition(s).str();
  }
  const auto chi = mvk::chi_square_test(g, e, expected);
  EXPECT_EQ(chi.dof, 5);
  EXPECT_GT(chi.p_value, 0.001);
}

TEST(ChiSquare, DetectsWrongModel) {
  const auto g = mvk::composition_generator(ehrenfest2());
  mvk::SimConfig cfg;
  cfg.replicates = 20000;
  cfg.t = 1.0;
  cfg.x0 = {2, 0, 0};
  const auto e = mvk::empirical_transition(g, mvk::simulate_path(g, cfg));
  const std::vector<double> uniform(g.size(), 1.0 / 6.0);
  EXPECT_LT(mvk::chi_square_test(g, e, uniform).p_value, 1e-10);
}
