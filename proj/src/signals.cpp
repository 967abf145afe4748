#include "sea/signals.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <string>

#include "sea/errors.hpp"

namespace sea {

SignalSpec SignalSpec::zero() { return {}; }

SignalSpec SignalSpec::constant(double value) {
  SignalSpec s;
  s.kind = SignalKind::kConstant;
  s.amplitude = value;
  return s;
}

SignalSpec SignalSpec::sine(double amplitude, double frequency_hz, double phase_deg) {
  SignalSpec s;
  s.kind = SignalKind::kSine;
  s.amplitude = amplitude;
  s.frequency_hz = frequency_hz;
  s.phase_deg = phase_deg;
  return s;
}

SignalSpec SignalSpec::chirp(double amplitude, double f0_hz, double f1_hz, double sweep_s) {
  SignalSpec s;
  s.kind = SignalKind::kChirp;
  s.amplitude = amplitude;
  s.f0_hz = f0_hz;
  s.f1_hz = f1_hz;
  s.sweep_s = sweep_s;
  return s;
}

SignalSpec SignalSpec::step(double amplitude, double step_time_s) {
  SignalSpec s;
  s.kind = SignalKind::kStep;
  s.amplitude = amplitude;
  s.step_time_s = step_time_s;
  return s;
}

SignalSpec SignalSpec::white_noise(double variance, std::uint64_t seed) {
  SignalSpec s;
  s.kind = SignalKind::kWhiteNoise;
  s.variance = variance;
  s.seed = seed;
  return s;
}

SignalSpec SignalSpec::piecewise_linear(std::vector<std::pair<double, double>> points) {
  SignalSpec s;
  s.kind = SignalKind::kPiecewiseLinear;
  s.points = std::move(points);
  return s;
}

void SignalSpec::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(amplitude) || !finite(offset)) throw ValidationError("signal: amplitude and offset must be finite");
  switch (kind) {
    case SignalKind::kSine:
      if (!finite(frequency_hz) || frequency_hz < 0.0) throw ValidationError("sine: frequency must be >= 0");
      break;
    case SignalKind::kChirp:
      if (!(f0_hz >= 0.0 && f1_hz >= f0_hz)) throw ValidationError("chirp: requires f1 >= f0 >= 0");
      if (!(sweep_s > 0.0)) throw ValidationError("chirp: sweep_s must be positive");
      break;
    case SignalKind::kWhiteNoise:
      if (!(variance >= 0.0) || !finite(variance)) throw ValidationError("white_noise: variance must be >= 0");
      break;
    case SignalKind::kPiecewiseLinear:
      if (points.empty()) throw ValidationError("piecewise_linear: needs at least one point");
      for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i].first > points[i - 1].first)) {
          throw ValidationError("piecewise_linear: times must be strictly increasing");
        }
      }
      break;
    default:
      break;
  }
}

const char* to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::kZero: return "zero";
    case SignalKind::kConstant: return "constant";
    case SignalKind::kSine: return "sine";
    case SignalKind::kChirp: return "chirp";
    case SignalKind::kStep: return "step";
    case SignalKind::kWhiteNoise: return "white_noise";
    case SignalKind::kPiecewiseLinear: return "piecewise_linear";
  }
  return "zero";
}

SignalKind signal_kind_from_string(const char* name) {
  for (SignalKind k : {SignalKind::kZero, SignalKind::kConstant, SignalKind::kSine, SignalKind::kChirp,
                       SignalKind::kStep, SignalKind::kWhiteNoise, SignalKind::kPiecewiseLinear}) {
    if (std::strcmp(name, to_string(k)) == 0) return k;
  }
  throw ValidationError(std::string("unknown signal kind '") + name + "'");
}

double signal_value(const SignalSpec& spec, double t) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  switch (spec.kind) {
    case SignalKind::kZero:
      return 0.0;
    case SignalKind::kConstant:
      return spec.amplitude + spec.offset;
    case SignalKind::kSine:
      return spec.amplitude * std::sin(kTwoPi * spec.frequency_hz * t + spec.phase_deg * std::numbers::pi / 180.0) +
             spec.offset;
    case SignalKind::kChirp: {
      const double T = spec.sweep_s;
      double phase;
      if (t <= T) {
        phase = spec.f0_hz * t + 0.5 * (spec.f1_hz - spec.f0_hz) / T * t * t;
      } else {
        phase = spec.f0_hz * T + 0.5 * (spec.f1_hz - spec.f0_hz) * T + spec.f1_hz * (t - T);
      }
      return spec.amplitude * std::sin(kTwoPi * phase) + spec.offset;
    }
    case SignalKind::kStep:
      return (t >= spec.step_time_s ? spec.amplitude : 0.0) + spec.offset;
    case SignalKind::kPiecewiseLinear: {
      const auto& pts = spec.points;
      if (t <= pts.front().first) return pts.front().second + spec.offset;
      if (t >= pts.back().first) return pts.back().second + spec.offset;
      const auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                                       [](double x, const auto& p) { return x < p.first; });
      const auto lo = hi - 1;
      const double w = (t - lo->first) / (hi->first - lo->first);
      return lo->second + w * (hi->second - lo->second) + spec.offset;
    }
    case SignalKind::kWhiteNoise:
      break;
  }
  throw ValidationError("signal_value: white noise has no analytic value");
}

std::size_t sample_count(double dt_s, double duration_s) {
  if (!(dt_s > 0.0) || !(duration_s >= 0.0)) throw ValidationError("sample grid: dt must be > 0");
  return static_cast<std::size_t>(std::llround(duration_s / dt_s)) + 1;
}

std::vector<double> generate(const SignalSpec& spec, double dt_s, double duration_s) {
  spec.validate();
  const std::size_t n = sample_count(dt_s, duration_s);
  std::vector<double> out(n);
  if (spec.is_noise()) {
    if (spec.variance == 0.0) {
      std::fill(out.begin(), out.end(), spec.offset);
      return out;
    }
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> dist(0.0, std::sqrt(spec.variance));
    for (double& v : out) v = dist(rng) + spec.offset;
    return out;
  }
  for (std::size_t k = 0; k < n; ++k) out[k] = signal_value(spec, static_cast<double>(k) * dt_s);
  return out;
}

}  // namespace sea
