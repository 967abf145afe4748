#pragma once

#include <string>
#include <vector>

#include "sea/config.hpp"

namespace sea {

struct PresetRun {
  std::string name;
  ScenarioDef def;
};

// A named experiment: one or more runs sharing the plant and controller.
struct Preset {
  std::string name;
  std::string description;
  std::vector<PresetRun> runs;
};

inline constexpr double kTrackingAmplitudeNm = 0.033;
inline constexpr double kTrackingFrequencyHz = 2.0;
inline constexpr double kHandleAmplitudeRad = 0.5;
inline constexpr double kNoiseVariance = 0.01;
inline constexpr std::uint64_t kDefaultSeed = 42;

// Frequency band a linear chirp excites well enough for Welch estimation:
// from where the sweep spends at least two periods per octave up to 85% of
// the final frequency, leaving room for the window at the end of the record.
struct Band {
  double lo_hz = 0.0;
  double hi_hz = 0.0;
};
Band chirp_band(const SignalSpec& chirp);

std::vector<std::string> preset_names();
// Throws ValidationError naming the known presets. The seed is applied to
// every white-noise signal of the preset.
Preset preset(const std::string& name, std::uint64_t seed = kDefaultSeed);

}  // namespace sea
