#include "sea/presets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sea/errors.hpp"

namespace sea {

namespace {

ScenarioDef torque_sine() {
  ScenarioDef d;
  d.reference = SignalSpec::sine(kTrackingAmplitudeNm, kTrackingFrequencyHz);
  d.duration_s = 10.0;
  return d;
}

ScenarioDef impedance(double ratio) {
  ScenarioDef d;
  d.type = ScenarioType::kImpedance;
  d.compensator_on = true;
  d.handle_motion = SignalSpec::sine(kHandleAmplitudeRad, kTrackingFrequencyHz);
  d.I_d_ratio = ratio;
  d.duration_s = 6.0;
  return d;
}

ScenarioDef noisy(ControllerKind kind, std::uint64_t seed) {
  ScenarioDef d = torque_sine();
  d.controller = kind;
  d.noise = SignalSpec::white_noise(kNoiseVariance, seed);
  return d;
}

ScenarioDef chirp(double amplitude, double f0, double f1, double sweep) {
  ScenarioDef d;
  d.reference = SignalSpec::chirp(amplitude, f0, f1, sweep);
  d.duration_s = sweep;
  return d;
}

ScenarioDef handle_only(bool compensated) {
  ScenarioDef d;
  d.compensator_on = compensated;
  d.handle_motion = SignalSpec::sine(kHandleAmplitudeRad, kTrackingFrequencyHz);
  d.duration_s = 6.0;
  return d;
}

ScenarioDef free_response() {
  ScenarioDef d;
  d.type = ScenarioType::kFreeResponse;
  d.compensator_on = true;
  d.I_d_ratio = 1.0;
  d.phi0 = 1.0;
  d.duration_s = 20.0;
  return d;
}

}  // namespace

Band chirp_band(const SignalSpec& chirp) {
  if (chirp.kind != SignalKind::kChirp) throw ValidationError("chirp_band: signal is not a chirp");
  const double rate = (chirp.f1_hz - chirp.f0_hz) / chirp.sweep_s;
  Band b{std::max(chirp.f0_hz, std::sqrt(2.0 * rate)), 0.85 * chirp.f1_hz};
  if (!(b.hi_hz > b.lo_hz)) throw ValidationError("chirp_band: sweep too fast to excite any band");
  return b;
}

std::vector<std::string> preset_names() {
  return {"torque_sine", "fig6", "fig9", "fig10", "fig10_paper", "fig11", "compensator"};
}

Preset preset(const std::string& name, std::uint64_t seed) {
  Preset p;
  p.name = name;
  if (name == "torque_sine") {
    p.description = "2-DOF tracking of a 0.033 Nm, 2 Hz sine with the load fixed";
    p.runs = {{"torque_sine", torque_sine()}};
  } else if (name == "fig6") {
    p.description = "impedance control for I_d = 0.2, 0.6, 1.0, 1.4 K_s under 2 Hz handle motion";
    for (double ratio : {0.2, 0.6, 1.0, 1.4}) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "Id_%.1fKs", ratio);
      p.runs.push_back({buf, impedance(ratio)});
    }
  } else if (name == "fig9") {
    p.description = "2-DOF against PI tracking with white feedback noise of variance 0.01";
    p.runs = {{"two_dof", noisy(ControllerKind::kTwoDof, seed)}, {"pi", noisy(ControllerKind::kPi, seed)}};
  } else if (name == "fig10") {
    p.description = "0.1 to 30 Hz torque chirp for closed-loop frequency-response estimation";
    p.runs = {{"chirp", chirp(0.01, 0.1, 30.0, 60.0)}};
  } else if (name == "fig10_paper") {
    p.description = "0 to 5 Hz torque chirp with the experiment's 0.033 Nm amplitude";
    p.runs = {{"chirp", chirp(kTrackingAmplitudeNm, 0.0, 5.0, 30.0)}};
  } else if (name == "fig11") {
    p.description = "free response of the slider released from 1 rad with I_d = K_s";
    p.runs = {{"free_response", free_response()}};
  } else if (name == "compensator") {
    p.description = "torque disturbance from 2 Hz handle motion at zero reference, compensator on and off";
    p.runs = {{"compensated", handle_only(true)}, {"uncompensated", handle_only(false)}};
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("unknown scenario '" + name + "'; known: " + known);
  }
  return p;
}

}  // namespace sea
