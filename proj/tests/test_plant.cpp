#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sea/errors.hpp"
#include "sea/plant.hpp"

using sea::Complex;

TEST(Params, Defaults) {
  const sea::SeaParams p = sea::default_params();
  EXPECT_DOUBLE_EQ(p.J_A, 6.90e-4);
  EXPECT_DOUBLE_EQ(p.b_f, 0.0059);
  EXPECT_DOUBLE_EQ(p.K_s, 0.0484);
  EXPECT_DOUBLE_EQ(p.K_s, 2 * 0.0242);
  EXPECT_DOUBLE_EQ(p.r_winch, 7.25e-3);
  EXPECT_DOUBLE_EQ(p.K_g, 14.0);
  EXPECT_DOUBLE_EQ(p.K_pv, 0.0457);
  EXPECT_DOUBLE_EQ(p.K_iv, 1.3455);
  EXPECT_NO_THROW(p.validate());
}

TEST(Params, ValidationRejectsEachBound) {
  const auto broken = [](auto mutate) {
    sea::SeaParams p = sea::default_params();
    mutate(p);
    return p;
  };
  EXPECT_THROW(broken([](auto& p) { p.J_A = 0.0; }).validate(), sea::ValidationError);
  EXPECT_THROW(broken([](auto& p) { p.K_s = 0.0; }).validate(), sea::ValidationError);
  EXPECT_THROW(broken([](auto& p) { p.r_winch = -1.0; }).validate(), sea::ValidationError);
  EXPECT_THROW(broken([](auto& p) { p.K_pv = 0.0; }).validate(), sea::ValidationError);
  EXPECT_THROW(broken([](auto& p) { p.K_iv = 0.0; }).validate(), sea::ValidationError);
  EXPECT_THROW(broken([](auto& p) { p.b_f = -0.1; }).validate(), sea::ValidationError);
  EXPECT_THROW(broken([](auto& p) { p.K_g = 0.5; }).validate(), sea::ValidationError);
  EXPECT_NO_THROW(broken([](auto& p) { p.b_f = 0.0; }).validate());
  EXPECT_THROW(sea::build_plant(broken([](auto& p) { p.K_s = 0.0; })), sea::ValidationError);
}

TEST(Plant, MatchesPrintedCoefficients) {
  const sea::SeaModel m = sea::build_plant(sea::default_params());
  ASSERT_EQ(m.P.num().degree(), 1);
  ASSERT_EQ(m.P.den().degree(), 3);
  EXPECT_NEAR(m.P.num().coefficient(1) / 3.204, 1.0, 0.005);
  EXPECT_NEAR(m.P.num().coefficient(0) / 94.34, 1.0, 0.005);
  EXPECT_NEAR(m.P.den().coefficient(2) / 74.88, 1.0, 0.005);
  EXPECT_NEAR(m.P.den().coefficient(1) / 2021.0, 1.0, 0.005);
  EXPECT_EQ(m.P.den().coefficient(0), 0.0);
}

TEST(Plant, RawPolynomialsFollowPhysics) {
  const sea::SeaParams p = sea::default_params();
  const sea::SeaModel m = sea::build_plant(p);
  EXPECT_DOUBLE_EQ(m.a.coefficient(3), p.J_A);
  EXPECT_DOUBLE_EQ(m.a.coefficient(2), p.b_f + p.K_pv);
  EXPECT_DOUBLE_EQ(m.a.coefficient(1), p.K_s + p.K_iv);
  EXPECT_DOUBLE_EQ(m.b.coefficient(1), p.K_s * p.K_pv);
  EXPECT_DOUBLE_EQ(m.b.coefficient(0), p.K_s * p.K_iv);
}

TEST(Plant, OnePoleAtOriginRestStable) {
  const sea::SeaModel m = sea::build_plant(sea::default_params());
  int at_origin = 0;
  for (const Complex& r : sea::roots(m.P.den()).roots) {
    if (r == Complex(0.0, 0.0)) {
      ++at_origin;
    } else {
      EXPECT_LT(r.real(), 0.0);
    }
  }
  EXPECT_EQ(at_origin, 1);
}

TEST(Plant, IntegratorResidue) {
  const sea::SeaParams p = sea::default_params();
  const sea::SeaModel m = sea::build_plant(p);
  const Complex s(1e-9, 0.0);
  const double residue = (s * m.P.at(s)).real();
  const double want = p.K_s * p.K_iv / (p.K_s + p.K_iv);
  EXPECT_NEAR(residue / want, 1.0, 1e-8);
}

TEST(Plant, IdealVelocityLoopLimit) {
  sea::SeaParams p = sea::default_params();
  p.K_pv = 1e6;
  const sea::SeaModel m = sea::build_plant(p);
  const double w = 2.0 * std::numbers::pi * 2.0;
  EXPECT_NEAR(std::abs(m.P.evaluate(w)) / (p.K_s / w), 1.0, 1e-3);
}

TEST(Plant, LoadCouplingTerm) {
  const sea::SeaParams p = sea::default_params();
  const sea::SeaModel m = sea::build_plant(p);
  EXPECT_EQ(m.G.num().degree(), 2);
  EXPECT_EQ(m.G.den().degree(), 2);
  EXPECT_NEAR(m.G.dc_gain() / (-p.K_s * p.K_iv / (p.K_s + p.K_iv)), 1.0, 1e-12);
  EXPECT_NEAR(m.G.num().leading() / -p.K_s, 1.0, 1e-9);
}

TEST(Plant, PhysicalRealizationMatchesTransferFunctions) {
  const sea::SeaParams p = sea::default_params();
  const sea::SeaModel m = sea::build_plant(p);
  const sea::StateSpace ss = sea::physical_realization(p);
  EXPECT_EQ(ss.states(), 3);
  EXPECT_EQ(ss.inputs(), 2);
  for (double w : {0.05, 1.0, 12.0, 80.0, 900.0}) {
    const Complex s(0.0, w);
    EXPECT_LT(std::abs(ss.transfer(s, 0) - m.P.at(s)) / std::abs(m.P.at(s)), 1e-9);
    EXPECT_LT(std::abs(ss.transfer(s, 1) - m.G.at(s)) / std::abs(m.G.at(s)), 1e-9);
  }
}

TEST(Reflection, Examples) {
  EXPECT_DOUBLE_EQ(sea::reflect_linear_stiffness(1000.0, 0.1), 10.0);
  const double k_lin = 0.0484 / (0.00725 * 0.00725);
  EXPECT_NEAR(k_lin, 920.8, 0.1);
  EXPECT_NEAR(sea::reflect_linear_stiffness(k_lin, 7.25e-3), 0.0484, 1e-15);
  EXPECT_DOUBLE_EQ(sea::reflect_linear_stiffness(123.0, 1.0), 123.0);
  EXPECT_THROW(sea::reflect_linear_stiffness(-1.0, 1.0), sea::ValidationError);
}

TEST(RigidModel, Examples) {
  sea::SeaParams p = sea::default_params();
  const sea::TransferFunction g = sea::rigid_sea_tf(p);
  EXPECT_NEAR(g.dc_gain(), 1.0, 1e-15);
  EXPECT_NEAR(std::sqrt(g.den().coefficient(0)), 8.376, 1e-3);
  p.K_s = 1e-12;
  EXPECT_LT(std::abs(sea::rigid_sea_tf(p).evaluate(10.0)), 1e-6);
}
