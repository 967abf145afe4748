#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sea/plant.hpp"
#include "sea/signals.hpp"
#include "sea/sim.hpp"
#include "sea/synth.hpp"

namespace sea {

inline constexpr int kFormatVersion = 1;

// Optional overrides of the default plant constants.
struct PlantOverrides {
  std::optional<double> J_A;
  std::optional<double> b_f;
  std::optional<double> K_s;
  std::optional<double> r_winch;
  std::optional<double> K_g;
  std::optional<double> K_pv;
  std::optional<double> K_iv;

  SeaParams apply(SeaParams base) const;
  friend bool operator==(const PlantOverrides&, const PlantOverrides&) = default;
};

enum class ScenarioType { kTorque, kImpedance, kFreeResponse };
enum class ControllerKind { kTwoDof, kPi };

// Declarative scenario. The plant and the 2-DOF controller are supplied when
// the scenario is run; virtual stiffness is either absolute (I_d) or a
// multiple of K_s (I_d_ratio).
struct ScenarioDef {
  ScenarioType type = ScenarioType::kTorque;
  ControllerKind controller = ControllerKind::kTwoDof;
  PiController pi{204.0, 111.0};
  bool compensator_on = false;
  SignalSpec reference;
  SignalSpec disturbance;
  SignalSpec noise;
  SignalSpec handle_motion;
  SignalSpec phi_ref;
  double saturation_rad_s = 50.0;
  double dt_s = 1e-4;
  double duration_s = 10.0;
  std::optional<double> I_d;
  std::optional<double> I_d_ratio;
  LoadModel load;
  double phi0 = 1.0;

  friend bool operator==(const ScenarioDef&, const ScenarioDef&) = default;
};

struct BodeGrid {
  double f_lo_hz = 0.1;
  double f_hi_hz = 100.0;
  int points = 200;
  friend bool operator==(const BodeGrid&, const BodeGrid&) = default;
};

struct ProjectConfig {
  int format_version = kFormatVersion;
  PlantOverrides plant;
  SynthesisWeights weights;
  std::map<std::string, ScenarioDef> scenarios;
  BodeGrid bode;
  std::string output_dir = "out";

  SeaParams params() const { return plant.apply(default_params()); }
  friend bool operator==(const ProjectConfig&, const ProjectConfig&) = default;
};

// Strict JSON parsing: unknown keys, wrong types and unsupported
// format_version raise ValidationError.
ProjectConfig parse_config(std::string_view json_text);
std::string serialize_config(const ProjectConfig& cfg);
ProjectConfig load_config(const std::filesystem::path& path);

ScenarioDef parse_scenario(std::string_view json_text);
std::string serialize_scenario(const ScenarioDef& def);

// Instantiates a scenario against a plant and 2-DOF controller and runs it.
SimTrace run_scenario(const ScenarioDef& def, const SeaModel& model, const TwoDofController& ctrl);
double virtual_stiffness(const ScenarioDef& def, const SeaParams& params);

// Controller file: coefficient arrays highest degree first. C1 and C2 share
// one denominator.
struct ControllerBundle {
  int format_version = kFormatVersion;
  SynthesisWeights weights;
  std::vector<double> c1_num, c1_den, c2_num, c2_den, cl_num, cl_den;
  std::string plant_fingerprint;

  friend bool operator==(const ControllerBundle&, const ControllerBundle&) = default;
};

// FNV-1a 64 over the parameters printed with 17 significant digits, as hex.
std::string plant_fingerprint(const SeaParams& params);

ControllerBundle make_bundle(const SeaModel& model, const TwoDofController& ctrl, const TransferFunction& cl);
std::string serialize_bundle(const ControllerBundle& bundle);
ControllerBundle parse_bundle(std::string_view json_text);
// Rebuilds C1, C2, p, q and the C1 numerator; the spectral factors are not
// stored and are left empty.
TwoDofController controller_from_bundle(const ControllerBundle& bundle);

}  // namespace sea
