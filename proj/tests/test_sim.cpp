#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sea/errors.hpp"
#include "sea/sim.hpp"
#include "sea/synth.hpp"

namespace {

const sea::SeaModel& model() {
  static const sea::SeaModel m = sea::build_plant(sea::default_params());
  return m;
}

const sea::TwoDofController& ctrl() {
  static const sea::TwoDofController c = sea::h2_synthesize(model(), sea::SynthesisWeights{});
  return c;
}

sea::TorqueLoopScenario base(double duration = 1.0) {
  sea::TorqueLoopScenario sc;
  sc.model = model();
  sc.controller = ctrl();
  sc.duration_s = duration;
  return sc;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(Signals, Examples) {
  EXPECT_NEAR(sea::signal_value(sea::SignalSpec::sine(0.033, 2.0), 0.125), 0.033, 1e-15);
  const auto z = sea::generate(sea::SignalSpec::zero(), 1e-3, 0.5);
  EXPECT_EQ(z.size(), 501u);
  EXPECT_EQ(max_abs(z), 0.0);
  EXPECT_EQ(sea::signal_value(sea::SignalSpec::step(2.0, 1.0), 0.5), 0.0);
  EXPECT_EQ(sea::signal_value(sea::SignalSpec::step(2.0, 1.0), 1.5), 2.0);
  const auto pwl = sea::SignalSpec::piecewise_linear({{0.0, 0.0}, {1.0, 2.0}});
  EXPECT_DOUBLE_EQ(sea::signal_value(pwl, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(sea::signal_value(pwl, 3.0), 2.0);
  EXPECT_THROW(sea::signal_value(sea::SignalSpec::white_noise(1.0, 1), 0.0), sea::ValidationError);
}

TEST(Signals, ChirpInstantaneousFrequency) {
  // Phase of a linear chirp is 2 pi (f0 t + (f1 - f0) t^2 / (2 T)).
  const auto spec = sea::SignalSpec::chirp(1.0, 1.0, 5.0, 4.0);
  for (double t : {0.1, 1.3, 3.7}) {
    const double ph = 2.0 * std::numbers::pi * (1.0 * t + 4.0 * t * t / 8.0);
    EXPECT_NEAR(sea::signal_value(spec, t), std::sin(ph), 1e-12);
  }
}

TEST(Signals, Validation) {
  EXPECT_THROW(sea::SignalSpec::chirp(1.0, 5.0, 1.0, 1.0).validate(), sea::ValidationError);
  EXPECT_THROW(sea::SignalSpec::white_noise(-1.0, 1).validate(), sea::ValidationError);
}

TEST(Signals, WhiteNoiseStatistics) {
  const auto x = sea::generate(sea::SignalSpec::white_noise(0.01, 42), 1e-4, 100.0);
  ASSERT_EQ(x.size(), 1000001u);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= (x.size() - 1);
  EXPECT_NEAR(var / 0.01, 1.0, 0.01);
  EXPECT_LT(std::abs(mean), 5.0 * 0.1 / 1000.0);
  EXPECT_EQ(x, sea::generate(sea::SignalSpec::white_noise(0.01, 42), 1e-4, 100.0));
  EXPECT_NE(x, sea::generate(sea::SignalSpec::white_noise(0.01, 43), 1e-4, 100.0));
}

TEST(Scenario, Validation) {
  auto sc = base();
  sc.dt_s = 0.0;
  EXPECT_THROW(sea::simulate_torque_loop(sc), sea::ValidationError);
  sc = base();
  sc.duration_s = 5 * sc.dt_s;
  EXPECT_THROW(sea::simulate_torque_loop(sc), sea::ValidationError);
  sc = base();
  sc.saturation_rad_s = 0.0;
  EXPECT_THROW(sea::simulate_torque_loop(sc), sea::ValidationError);
  sc = base();
  sc.controller = sea::PiController{-1.0, 1.0};
  EXPECT_THROW(sea::simulate_torque_loop(sc), sea::ValidationError);
}

TEST(TorqueLoop, ZeroInputsGiveZeroTrace) {
  const auto tr = sea::simulate_torque_loop(base(0.5));
  ASSERT_EQ(tr.size(), 5001u);
  for (auto name : sea::SimTrace::kChannels) {
    if (name != "t") {
      EXPECT_EQ(max_abs(tr.channel(name)), 0.0) << name;
    }
  }
  EXPECT_DOUBLE_EQ(tr.t[100], 100 * 1e-4);
}

TEST(TorqueLoop, SaturationPinsVelocity) {
  auto sc = base(0.2);
  sc.reference = sea::SignalSpec::step(10.0);
  const auto tr = sea::simulate_torque_loop(sc);
  EXPECT_LE(max_abs(tr.omega_d), 50.0);
  int pinned = 0;
  for (std::size_t i = 0; i < 200; ++i) pinned += tr.omega_d[i] == 50.0;
  EXPECT_GT(pinned, 100);
  EXPECT_GT(max_abs(tr.u_presat), 50.0);
}

TEST(TorqueLoop, Linearity) {
  auto sc = base(1.0);
  sc.reference = sea::SignalSpec::sine(0.033, 2.0);
  const auto a = sea::simulate_torque_loop(sc);
  sc.reference = sea::SignalSpec::sine(0.033 * 3.0, 2.0);
  const auto b = sea::simulate_torque_loop(sc);
  ASSERT_LT(max_abs(b.omega_d), 50.0);
  const double scale = max_abs(a.tau_L);
  for (std::size_t i = 0; i < a.size(); i += 7) EXPECT_NEAR(b.tau_L[i], 3.0 * a.tau_L[i], 1e-6 * 3.0 * scale);
}

TEST(TorqueLoop, TracksSineLikeG1) {
  auto sc = base(4.0);
  sc.reference = sea::SignalSpec::sine(0.033, 2.0);
  const auto tr = sea::simulate_torque_loop(sc);
  const auto G1 = sea::torque_loop_maps(model(), ctrl(), false).G1;
  const std::complex<double> g = G1.evaluate(4.0 * std::numbers::pi);
  const auto fit = sea::fit_sine(tr.t, tr.tau_L, 2.0, 2.0);
  EXPECT_NEAR(fit.amplitude / (0.033 * std::abs(g)), 1.0, 0.02);
  EXPECT_NEAR(fit.phase_deg, std::arg(g) * 180.0 / std::numbers::pi, 2.0);
  // RMS of the steady error against |1 - G1| A / sqrt 2.
  const double want = std::abs(1.0 - g) * 0.033 / std::sqrt(2.0);
  EXPECT_NEAR(sea::rms_error(tr, 2.0) / want, 1.0, 0.05);
}

TEST(TorqueLoop, StepSizeConvergence) {
  auto sc = base(3.0);
  sc.reference = sea::SignalSpec::sine(0.033, 2.0);
  const double coarse = sea::rms_error(sea::simulate_torque_loop(sc), 2.0);
  sc.dt_s = 5e-5;
  const double fine = sea::rms_error(sea::simulate_torque_loop(sc), 2.0);
  EXPECT_LT(std::abs(coarse - fine) / fine, 1e-3);
}

TEST(TorqueLoop, Deterministic) {
  auto sc = base(0.5);
  sc.reference = sea::SignalSpec::sine(0.033, 2.0);
  sc.noise = sea::SignalSpec::white_noise(0.01, 9);
  const auto a = sea::simulate_torque_loop(sc);
  const auto b = sea::simulate_torque_loop(sc);
  EXPECT_EQ(a.tau_L, b.tau_L);
  EXPECT_EQ(a.omega_d, b.omega_d);
  EXPECT_EQ(a.n, b.n);
}

TEST(TorqueLoop, NoisePathIndependentOfC1) {
  auto sc = base(0.5);
  sc.noise = sea::SignalSpec::white_noise(0.01, 5);
  sc.disturbance = sea::SignalSpec::sine(0.3, 3.0);
  const auto a = sea::simulate_torque_loop(sc);
  sea::TwoDofController other = ctrl();
  other.C1 = sea::TransferFunction({1.0, 2.0}, {1.0, 30.0});
  other.c1_num = other.p * 0.5;
  sc.controller = other;
  const auto b = sea::simulate_torque_loop(sc);
  EXPECT_EQ(a.tau_L, b.tau_L);
  EXPECT_EQ(a.omega_d, b.omega_d);
}

TEST(TorqueLoop, PiControllerRuns) {
  auto sc = base(6.0);
  sc.controller = sea::PiController{204.0, 111.0};
  sc.reference = sea::SignalSpec::constant(0.01);
  const auto tr = sea::simulate_torque_loop(sc);
  EXPECT_NEAR(tr.tau_L.back(), 0.01, 1e-4);
}

TEST(Impedance, MatchingReferenceGivesZeroTorque) {
  sea::ImpedanceScenario sc;
  sc.torque = base(1.0);
  sc.I_d = model().params.K_s;
  sc.torque.handle_motion = sea::SignalSpec::sine(0.5, 2.0);
  sc.phi_ref = sea::SignalSpec::sine(0.5, 2.0);
  const auto tr = sea::simulate_impedance(sc);
  EXPECT_LT(max_abs(tr.r), 1e-15);
  // The uncompensated coupling through G still moves tau_L.
  sc.torque.compensator_on = true;
  const auto comp = sea::simulate_impedance(sc);
  EXPECT_LT(max_abs(comp.r), 1e-15);
}

TEST(Impedance, ErrorRatioRoughlyConstantAcrossStiffness) {
  std::vector<double> ratios;
  for (double k : {0.2, 1.0, 1.4}) {
    sea::ImpedanceScenario sc;
    sc.torque = base(4.0);
    sc.torque.compensator_on = true;
    sc.torque.handle_motion = sea::SignalSpec::sine(0.5, 2.0);
    sc.I_d = k * model().params.K_s;
    const auto tr = sea::simulate_impedance(sc);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 20000; i < tr.size(); ++i) {
      num += tr.e[i] * tr.e[i];
      den += tr.r[i] * tr.r[i];
    }
    ratios.push_back(std::sqrt(num / den));
  }
  for (double r : ratios) EXPECT_LT(r, 1.0);
}

TEST(FreeResponse, NoStiffnessHoldsPosition) {
  sea::ImpedanceScenario sc;
  sc.torque = base(2.0);
  sc.torque.compensator_on = true;
  sc.I_d = 0.0;
  const auto tr = sea::simulate_free_response(sc, sea::LoadModel{}, 0.7);
  for (std::size_t i = 0; i < tr.size(); i += 97) EXPECT_NEAR(tr.phi_L[i], 0.7, 1e-9);
}

TEST(FreeResponse, DecaysAndMoreDampingSettlesNoLater) {
  sea::ImpedanceScenario sc;
  sc.torque = base(20.0);
  sc.torque.compensator_on = true;
  sc.I_d = model().params.K_s;
  const sea::LoadModel load;
  const auto tr = sea::simulate_free_response(sc, load, 1.0);
  const auto peaks = sea::peak_envelope(tr, "phi_L");
  std::vector<sea::Peak> big;
  for (const auto& p : peaks) {
    if (p.value > 1e-3) big.push_back(p);
  }
  ASSERT_GE(big.size(), 2u);
  for (std::size_t i = 1; i < big.size(); ++i) EXPECT_LT(big[i].value, big[i - 1].value);

  sea::LoadModel damped = load;
  damped.b_L *= 2.0;
  const auto tr2 = sea::simulate_free_response(sc, damped, 1.0);
  EXPECT_LE(sea::settling_time(tr2, "phi_L", 0.0, 0.02), sea::settling_time(tr, "phi_L", 0.0, 0.02));

  sea::LoadModel off = load;
  off.enabled = false;
  EXPECT_THROW(sea::simulate_free_response(sc, off, 1.0), sea::ValidationError);
}

TEST(Metrics, Examples) {
  sea::SimTrace tr;
  tr.dt_s = 0.1;
  for (int i = 0; i < 100; ++i) {
    tr.t.push_back(0.1 * i);
    tr.r.push_back(1.0);
    tr.tau_L.push_back(0.0);
    tr.e.push_back(1.0);
  }
  EXPECT_DOUBLE_EQ(sea::rms_error(tr, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(sea::steady_state_error(tr), 1.0);
  EXPECT_THROW(sea::rms_error(tr, 100.0), sea::ValidationError);
  std::fill(tr.e.begin(), tr.e.end(), 0.0);
  EXPECT_DOUBLE_EQ(sea::rms_error(tr, 3.0), 0.0);
}

TEST(Metrics, PeaksAndSineFit) {
  sea::SimTrace tr;
  tr.dt_s = 1e-3;
  for (int i = 0; i <= 4000; ++i) {
    const double t = i * 1e-3;
    tr.t.push_back(t);
    tr.phi_L.push_back(std::exp(-t) * std::cos(2.0 * std::numbers::pi * t));
  }
  const auto peaks = sea::peak_envelope(tr, "phi_L");
  // Maxima sit where tan(2 pi t) = -1 / (2 pi), just before each integer.
  ASSERT_EQ(peaks.size(), 4u);
  const double t1 = 1.0 - std::atan(1.0 / (2.0 * std::numbers::pi)) / (2.0 * std::numbers::pi);
  EXPECT_NEAR(peaks[0].t, t1, 1e-3);
  for (std::size_t i = 1; i < peaks.size(); ++i) EXPECT_NEAR(peaks[i].value / peaks[i - 1].value, std::exp(-1.0), 1e-4);
  const auto fit = sea::fit_sine(tr.t, tr.phi_L, 1.0, 0.0);
  EXPECT_GT(fit.amplitude, 0.0);

  std::vector<double> y;
  for (double t : tr.t) y.push_back(0.3 * std::sin(2.0 * std::numbers::pi * 2.0 * t + 0.5) + 0.1 + 0.02 * t);
  const auto sf = sea::fit_sine(tr.t, y, 2.0, 0.0);
  EXPECT_NEAR(sf.amplitude, 0.3, 1e-9);
  EXPECT_NEAR(sf.phase_deg, 0.5 * 180.0 / std::numbers::pi, 1e-7);
}
