#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sea/config.hpp"
#include "sea/presets.hpp"

namespace sea {

struct LabeledTrace {
  std::string label;
  const SimTrace* trace = nullptr;
};

// Torque panel (tau_d and tau_L per trace) over a motor-velocity panel.
std::string traces_svg(const std::vector<LabeledTrace>& traces, const std::string& title);
// Magnitude and phase panels; markers_hz are drawn on both.
std::string bode_svg(const std::vector<std::pair<std::string, FrequencyResponse>>& curves,
                     const std::vector<double>& markers_hz, const std::string& title);

struct CheckResult {
  std::string preset;
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
  std::string detail;
};

struct ReproduceReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> presets;  // in run order

  bool all_passed() const;
  // Fixed-width text table, one row per check.
  std::string table() const;
  // preset, check, value, limit, passed
  std::string csv() const;
};

// Runs every preset against the configured plant and writes one subdirectory
// per preset under out_dir, plus a "model" directory with the plant and
// controller. Presets run concurrently when parallel is set; output bytes do
// not depend on it.
ReproduceReport reproduce_all(const ProjectConfig& cfg, const std::filesystem::path& out_dir,
                              std::uint64_t seed = kDefaultSeed, bool parallel = true);

// Runs one preset into dir and returns its checks.
std::vector<CheckResult> run_preset(const Preset& preset, const SeaModel& model, const TwoDofController& ctrl,
                                    const std::filesystem::path& dir);

}  // namespace sea
