#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sea/errors.hpp"
#include "sea/plant.hpp"
#include "sea/synth.hpp"
#include "sea/xfer.hpp"

using sea::Complex;
using sea::Polynomial;
using sea::TransferFunction;

namespace {

TransferFunction tf(std::initializer_list<double> n, std::initializer_list<double> d) {
  return {Polynomial(n), Polynomial(d)};
}

double rel(Complex got, Complex want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

}  // namespace

TEST(TransferFunction, DenominatorIsMonic) {
  const TransferFunction g = tf({2, 4}, {2, 6});
  EXPECT_EQ(g.den(), (Polynomial{1, 3}));
  EXPECT_EQ(g.num(), (Polynomial{1, 2}));
  EXPECT_THROW(TransferFunction(Polynomial{1}, Polynomial{}), sea::ValidationError);
}

TEST(TransferFunction, EvaluateExamples) {
  const TransferFunction g = tf({1}, {1, 1});
  EXPECT_LT(std::abs(g.evaluate(0.0) - Complex(1, 0)), 1e-15);
  EXPECT_LT(std::abs(g.evaluate(1.0) - Complex(0.5, -0.5)), 1e-15);
  EXPECT_THROW(tf({1}, {1, 0}).evaluate(0.0), sea::NumericalError);
}

TEST(TransferFunction, EvaluatePlantAgainstPhysics) {
  const sea::SeaParams p = sea::default_params();
  const sea::SeaModel m = sea::build_plant(p);
  const Complex s(0.0, 2.0 * std::numbers::pi * 2.0);
  const Complex want = (p.K_s * p.K_pv * s + p.K_s * p.K_iv) /
                       (p.J_A * s * s * s + (p.b_f + p.K_pv) * s * s + (p.K_s + p.K_iv) * s);
  EXPECT_LT(rel(m.P.evaluate(4.0 * std::numbers::pi), want), 1e-12);
}

TEST(Interconnect, FeedbackExamples) {
  const TransferFunction cl = sea::feedback(tf({1}, {1, 0}), TransferFunction::gain(1.0));
  EXPECT_EQ(cl.num(), (Polynomial{1}));
  EXPECT_EQ(cl.den(), (Polynomial{1, 1}));
  const TransferFunction open = sea::feedback(TransferFunction::gain(3.0), TransferFunction::gain(0.0));
  EXPECT_DOUBLE_EQ(open.dc_gain(), 3.0);
  EXPECT_THROW(sea::feedback(TransferFunction::gain(1.0), TransferFunction::gain(-1.0)), sea::NumericalError);
}

TEST(Interconnect, FeedbackOfPaperLoopHasClosedLoopPoles) {
  const sea::SeaModel m = sea::build_plant(sea::default_params());
  const sea::TwoDofController c = sea::h2_synthesize(m, {});
  const TransferFunction cl = sea::feedback(m.P, c.C2);
  const Polynomial chi = c.characteristic();
  ASSERT_EQ(cl.den().degree(), chi.degree());
  for (int k = 0; k <= chi.degree(); ++k) {
    const double want = chi.coefficient(k) / chi.leading();
    EXPECT_NEAR(cl.den().coefficient(k), want, 1e-9 * std::abs(want));
  }
}

TEST(Interconnect, SeriesAndParallelExamples) {
  const TransferFunction sp = sea::series(tf({1}, {1, 0}), tf({1, 0}, {1}));
  EXPECT_EQ(sp.num().degree(), 1);
  EXPECT_EQ(sp.den().degree(), 1);
  const TransferFunction red = sea::minimal_form(sp);
  EXPECT_EQ(red.num(), (Polynomial{1}));
  EXPECT_EQ(red.den(), (Polynomial{1}));

  const TransferFunction par = sea::minimal_form(sea::parallel(tf({1}, {1, 1}), tf({1}, {1, 1})));
  EXPECT_EQ(par.num(), (Polynomial{2}));
  EXPECT_EQ(par.den(), (Polynomial{1, 1}));

  const sea::SeaModel m = sea::build_plant(sea::default_params());
  const sea::TwoDofController c = sea::h2_synthesize(m, {});
  const TransferFunction loop = sea::series(m.P, c.C2);
  EXPECT_EQ(loop.num().degree(), 3);
  EXPECT_EQ(loop.den().degree(), 6);
}

TEST(Interconnect, RandomFrequencyIdentities) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lw(-2, 3);
  const TransferFunction g = tf({2, 3, 1}, {1, 4, 6, 4});
  const TransferFunction h = tf({0.5, 7}, {1, 2, 9});
  for (int i = 0; i < 20; ++i) {
    const double w = std::pow(10.0, lw(rng));
    const Complex gv = g.evaluate(w);
    const Complex hv = h.evaluate(w);
    EXPECT_LT(rel(sea::series(g, h).evaluate(w), gv * hv), 1e-10);
    EXPECT_LT(rel(sea::feedback(g, h).evaluate(w), gv / (1.0 + gv * hv)), 1e-10);
    EXPECT_LT(rel(sea::parallel(g, h).evaluate(w), gv + hv), 1e-10);
  }
}

TEST(MinimalForm, Examples) {
  const TransferFunction g = sea::minimal_form(tf({1, 3, 2}, {1, 4, 3}));
  EXPECT_LT(std::abs(g.num().coefficient(0) - 2.0), 1e-9);
  EXPECT_EQ(g.num().degree(), 1);
  EXPECT_EQ(g.den().degree(), 1);
  EXPECT_LT(std::abs(g.den().coefficient(0) - 3.0), 1e-9);

  const TransferFunction already = tf({1, 2}, {1, 3, 5});
  const TransferFunction same = sea::minimal_form(already);
  EXPECT_EQ(same.num(), already.num());
  EXPECT_EQ(same.den(), already.den());
}

TEST(MinimalForm, CancelsComplexPairsTogether) {
  const Polynomial pair{1, 2, 5};
  const TransferFunction g(pair * Polynomial{1, 7}, pair * Polynomial{1, 1, 3});
  const TransferFunction r = sea::minimal_form(g);
  EXPECT_EQ(r.num().degree(), 1);
  EXPECT_EQ(r.den().degree(), 2);
  for (double w : {0.1, 1.0, 10.0}) EXPECT_LT(rel(r.evaluate(w), g.evaluate(w)), 1e-6);
}

TEST(MinimalForm, PaperG2ReducesByMatchedPairs) {
  const sea::SeaModel m = sea::build_plant(sea::default_params());
  const sea::TwoDofController c = sea::h2_synthesize(m, {});
  const TransferFunction raw =
      sea::series(m.G, sea::feedback(TransferFunction::gain(1.0), sea::series(m.P, c.C2)));
  const TransferFunction red = sea::minimal_form(raw);
  EXPECT_LE(red.order(), raw.order());
  for (double w : {0.3, 3.0, 30.0, 300.0}) EXPECT_LT(rel(red.evaluate(w), raw.evaluate(w)), 1e-6);
}

TEST(Predicates, Examples) {
  const TransferFunction g = tf({1}, {1, 1});
  EXPECT_TRUE(sea::is_proper(g));
  EXPECT_TRUE(sea::is_strictly_proper(g));
  EXPECT_TRUE(sea::is_stable(g));
  const TransferFunction h = tf({1, 0}, {1, 1});
  EXPECT_TRUE(sea::is_proper(h));
  EXPECT_FALSE(sea::is_strictly_proper(h));
  const sea::SeaModel m = sea::build_plant(sea::default_params());
  EXPECT_TRUE(sea::is_proper(m.P));
  EXPECT_TRUE(sea::is_strictly_proper(m.P));
  EXPECT_FALSE(sea::is_stable(m.P));
  EXPECT_FALSE(sea::is_proper(tf({1, 0, 0}, {1, 1})));
}

TEST(StateSpace, FirstOrderRealization) {
  const sea::StateSpace ss = sea::to_state_space(tf({1}, {1, 1}));
  ASSERT_EQ(ss.states(), 1);
  EXPECT_DOUBLE_EQ(ss.A(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(ss.B(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(ss.C(0), 1.0);
  EXPECT_DOUBLE_EQ(ss.D(0), 0.0);
}

TEST(StateSpace, BiproperCancelledIsPureGain) {
  const sea::StateSpace ss = sea::to_state_space(sea::minimal_form(tf({1, 2}, {1, 2})));
  EXPECT_EQ(ss.states(), 0);
  EXPECT_DOUBLE_EQ(ss.D(0), 1.0);
}

TEST(StateSpace, PaperC2HasThreeStatesNoFeedthrough) {
  const sea::SeaModel m = sea::build_plant(sea::default_params());
  const sea::TwoDofController c = sea::h2_synthesize(m, {});
  const sea::StateSpace ss = sea::to_state_space(c.C2);
  EXPECT_EQ(ss.states(), 3);
  EXPECT_DOUBLE_EQ(ss.D(0), 0.0);
}

TEST(StateSpace, ImproperThrows) { EXPECT_THROW(sea::to_state_space(tf({1, 0, 0}, {1, 1})), sea::ValidationError); }

TEST(StateSpace, RealizationMatchesTransferFunction) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3, 3);
  std::uniform_real_distribution<double> lw(-1, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 5;
    std::vector<double> d(n + 1), nn(n + 1 - trial % 2);
    for (double& x : d) x = u(rng);
    for (double& x : nn) x = u(rng);
    d[0] = 1.0 + std::abs(d[0]);
    const TransferFunction g{Polynomial(nn), Polynomial(d)};
    const sea::StateSpace ss = sea::to_state_space(g);
    for (int i = 0; i < 10; ++i) {
      const Complex s(0.0, std::pow(10.0, lw(rng)));
      EXPECT_LT(rel(ss.transfer(s), g.at(s)), 1e-8);
    }
  }
}

TEST(StateSpace, CommonDenominatorRealization) {
  const Polynomial den{1, 3, 5, 2};
  const std::vector<Polynomial> nums = {Polynomial{2, 1, 4, 1}, Polynomial{-1, 3}};
  const sea::StateSpace ss = sea::realize_common_denominator(den, nums);
  EXPECT_EQ(ss.states(), 3);
  EXPECT_EQ(ss.inputs(), 2);
  for (double w : {0.1, 1.0, 10.0}) {
    const Complex s(0, w);
    EXPECT_LT(rel(ss.transfer(s, 0), nums[0](s) / den(s)), 1e-10);
    EXPECT_LT(rel(ss.transfer(s, 1), nums[1](s) / den(s)), 1e-10);
  }
}

TEST(FrequencyResponse, Examples) {
  const std::vector<double> corner = {1.0 / (2.0 * std::numbers::pi)};
  const auto fr = sea::frequency_response(tf({1}, {1, 1}), corner);
  EXPECT_NEAR(fr.magnitude_db[0], -3.0103, 1e-4);
  EXPECT_NEAR(fr.phase_deg[0], -45.0, 1e-9);

  const auto grid = sea::logspace_hz(0.1, 100, 7);
  const auto g2 = sea::frequency_response(TransferFunction::gain(2.0), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(g2.magnitude_db[i], 6.0206, 1e-4);
    EXPECT_NEAR(g2.phase_deg[i], 0.0, 1e-12);
  }
}

TEST(FrequencyResponse, PhaseIsUnwrappedOnCoarseGrid) {
  // Fourth-order lag passes -180 deg; a 3-point grid must still unwrap.
  const TransferFunction g = tf({1}, {1, 4, 6, 4, 1});
  const std::vector<double> grid = {0.01, 1.0, 100.0};
  const auto fr = sea::frequency_response(g, grid);
  EXPECT_NEAR(fr.phase_deg.back(), -360.0, 1.0);
  EXPECT_LT(fr.phase_deg[1], -180.0);
}

TEST(FrequencyResponse, RejectsBadGrid) {
  const std::vector<double> bad = {1.0, 0.5};
  EXPECT_THROW(sea::frequency_response(tf({1}, {1, 1}), bad), sea::ValidationError);
}
