#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "sea/plant.hpp"
#include "sea/signals.hpp"
#include "sea/synth.hpp"

namespace sea {

// C_tau = kp + ki / s, run as a degenerate 2-DOF controller with C1 = C2 = C_tau.
struct PiController {
  double kp = 0.0;
  double ki = 0.0;

  friend bool operator==(const PiController&, const PiController&) = default;
};

using TorqueController = std::variant<TwoDofController, PiController>;

struct TorqueLoopScenario {
  SeaModel model;
  TorqueController controller;
  bool compensator_on = false;
  SignalSpec reference;      // tau_d [Nm]
  SignalSpec disturbance;    // d, added to omega_d before saturation [rad/s]
  SignalSpec noise;          // n, added to the measured torque [Nm]
  SignalSpec handle_motion;  // exogenous phi_L [rad]
  double saturation_rad_s = 50.0;
  double dt_s = 1e-4;
  double duration_s = 10.0;

  void validate() const;
};

struct ImpedanceScenario {
  TorqueLoopScenario torque;  // its reference is ignored; tau_d = I_d (phi_ref - phi_L)
  double I_d = 0.0;           // virtual stiffness [Nm/rad]
  SignalSpec phi_ref;         // phi_L,d [rad]

  void validate() const;
};

// Slider dynamics J_L phi_L'' + b_L phi_L' = tau_L for the free-response test.
// Desk-scale defaults; the prototype's load is not characterized.
struct LoadModel {
  double J_L = 0.01;
  double b_L = 0.005;
  bool enabled = true;

  void validate() const;
  friend bool operator==(const LoadModel&, const LoadModel&) = default;
};

// Uniformly sampled channels. In impedance runs r holds tau_d; e = r - tau_L.
struct SimTrace {
  static constexpr std::array<std::string_view, 10> kChannels = {
      "t", "r", "u_presat", "omega_d", "d", "n", "tau_L", "y_meas", "phi_L", "e"};

  double dt_s = 0.0;
  std::vector<double> t;
  std::vector<double> r;
  std::vector<double> u_presat;
  std::vector<double> omega_d;
  std::vector<double> d;
  std::vector<double> n;
  std::vector<double> tau_L;
  std::vector<double> y_meas;
  std::vector<double> phi_L;
  std::vector<double> e;

  std::size_t size() const { return t.size(); }
  const std::vector<double>& channel(std::string_view name) const;
};

// Fixed-step RK4 over the plant (physical realization), the controller
// realized over its shared denominator, and the compensator C_L. Saturation
// clamps omega_d = u + d at every stage. Throws NumericalError on divergence.
SimTrace simulate_torque_loop(const TorqueLoopScenario& sc);
SimTrace simulate_impedance(const ImpedanceScenario& sc);
// phi_L becomes a state driven by tau_L, starting at phi0 at rest with the
// actuator and compensator at equilibrium.
SimTrace simulate_free_response(const ImpedanceScenario& sc, const LoadModel& load, double phi0);

// RMS of e over [from_t, end].
double rms_error(const SimTrace& trace, double from_t);
// Mean of e over the last 10% of the trace.
double steady_state_error(const SimTrace& trace);
struct Peak {
  double t = 0.0;
  double value = 0.0;
};
// Strict local maxima of a channel.
std::vector<Peak> peak_envelope(const SimTrace& trace, std::string_view channel);
// Last time |x - final_value| exceeds band * max|x - final_value|.
double settling_time(const SimTrace& trace, std::string_view channel, double final_value, double band);

// Least-squares fit of A sin(2 pi f t + phi) + c0 + c1 t over t >= from_t.
struct SineFit {
  double amplitude = 0.0;
  double phase_deg = 0.0;
};
SineFit fit_sine(const std::vector<double>& t, const std::vector<double>& y, double f_hz, double from_t);

}  // namespace sea
