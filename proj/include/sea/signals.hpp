#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace sea {

enum class SignalKind { kZero, kConstant, kSine, kChirp, kStep, kWhiteNoise, kPiecewiseLinear };

// Exogenous excitation. Deterministic kinds are analytic in t; white noise is
// a seeded zero-mean Gaussian sequence with one independent sample per step,
// held over the step.
struct SignalSpec {
  SignalKind kind = SignalKind::kZero;
  double amplitude = 0.0;
  double frequency_hz = 0.0;
  double phase_deg = 0.0;
  double f0_hz = 0.0;
  double f1_hz = 0.0;
  double sweep_s = 0.0;
  double step_time_s = 0.0;
  double offset = 0.0;
  double variance = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::pair<double, double>> points;  // (t, value), piecewise linear

  static SignalSpec zero();
  static SignalSpec constant(double value);
  static SignalSpec sine(double amplitude, double frequency_hz, double phase_deg = 0.0);
  // Linear-in-time instantaneous frequency f0 -> f1 over sweep_s, then held at f1.
  static SignalSpec chirp(double amplitude, double f0_hz, double f1_hz, double sweep_s);
  static SignalSpec step(double amplitude, double step_time_s = 0.0);
  static SignalSpec white_noise(double variance, std::uint64_t seed);
  static SignalSpec piecewise_linear(std::vector<std::pair<double, double>> points);

  bool is_noise() const { return kind == SignalKind::kWhiteNoise; }
  void validate() const;

  friend bool operator==(const SignalSpec&, const SignalSpec&) = default;
};

const char* to_string(SignalKind kind);
SignalKind signal_kind_from_string(const char* name);

// Value of a deterministic signal at time t. Throws for white noise.
double signal_value(const SignalSpec& spec, double t);

// Samples at t_k = k dt for k = 0..round(duration/dt).
std::vector<double> generate(const SignalSpec& spec, double dt_s, double duration_s);

std::size_t sample_count(double dt_s, double duration_s);

}  // namespace sea
