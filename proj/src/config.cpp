#include "sea/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

#include "sea/errors.hpp"
#include "sea/io.hpp"

namespace sea {

namespace {

using json = nlohmann::json;

// Reads an object and rejects keys that were never asked for.
class StrictObject {
 public:
  StrictObject(const json& j, std::string ctx) : j_(j), ctx_(std::move(ctx)) {
    if (!j_.is_object()) throw ValidationError(ctx_ + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    if (!has(key)) throw ValidationError(ctx_ + ": missing required key '" + key + "'");
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ValidationError(ctx_ + "." + key + ": expected a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key, 0.0);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ValidationError(ctx_ + "." + key + ": expected a boolean");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ValidationError(ctx_ + "." + key + ": expected a string");
    return v.get<std::string>();
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ValidationError(ctx_ + "." + key + ": expected an integer");
    return v.get<std::int64_t>();
  }

  std::vector<double> numbers(const std::string& key) {
    if (!has(key)) throw ValidationError(ctx_ + "." + key + ": missing");
    const json& v = j_.at(key);
    if (!v.is_array()) throw ValidationError(ctx_ + "." + key + ": expected an array");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) throw ValidationError(ctx_ + "." + key + ": expected numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  const std::string& context() const { return ctx_; }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) throw ValidationError(ctx_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string ctx_;
  std::set<std::string> seen_;
};

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

SignalSpec signal_from_json(const json& j, const std::string& ctx) {
  StrictObject o(j, ctx);
  SignalSpec s;
  s.kind = signal_kind_from_string(o.string("kind", "zero").c_str());
  s.amplitude = o.number("amplitude", 0.0);
  s.frequency_hz = o.number("frequency_hz", 0.0);
  s.phase_deg = o.number("phase_deg", 0.0);
  s.f0_hz = o.number("f0_hz", 0.0);
  s.f1_hz = o.number("f1_hz", 0.0);
  s.sweep_s = o.number("sweep_s", 0.0);
  s.step_time_s = o.number("step_time_s", 0.0);
  s.offset = o.number("offset", 0.0);
  s.variance = o.number("variance", 0.0);
  const std::int64_t seed = o.integer("seed", 0);
  if (seed < 0) throw ValidationError(ctx + ".seed: must be non-negative");
  s.seed = static_cast<std::uint64_t>(seed);
  if (o.has("points")) {
    const json& pts = o.at("points");
    if (!pts.is_array()) throw ValidationError(ctx + ".points: expected an array of [t, value]");
    for (const json& p : pts) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ValidationError(ctx + ".points: expected [t, value] pairs");
      }
      s.points.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
  }
  o.finish();
  s.validate();
  return s;
}

json signal_to_json(const SignalSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  const auto put = [&j](const char* key, double v) {
    if (v != 0.0) j[key] = v;
  };
  put("amplitude", s.amplitude);
  put("frequency_hz", s.frequency_hz);
  put("phase_deg", s.phase_deg);
  put("f0_hz", s.f0_hz);
  put("f1_hz", s.f1_hz);
  put("sweep_s", s.sweep_s);
  put("step_time_s", s.step_time_s);
  put("offset", s.offset);
  put("variance", s.variance);
  if (s.seed != 0) j["seed"] = s.seed;
  if (!s.points.empty()) {
    json pts = json::array();
    for (const auto& [t, v] : s.points) pts.push_back({t, v});
    j["points"] = pts;
  }
  return j;
}

const char* type_name(ScenarioType t) {
  switch (t) {
    case ScenarioType::kTorque: return "torque";
    case ScenarioType::kImpedance: return "impedance";
    case ScenarioType::kFreeResponse: return "free_response";
  }
  return "torque";
}

ScenarioDef scenario_from_json(const json& j, const std::string& ctx) {
  StrictObject o(j, ctx);
  ScenarioDef d;
  const std::string type = o.string("type", "torque");
  if (type == "torque") {
    d.type = ScenarioType::kTorque;
  } else if (type == "impedance") {
    d.type = ScenarioType::kImpedance;
  } else if (type == "free_response") {
    d.type = ScenarioType::kFreeResponse;
  } else {
    throw ValidationError(ctx + ".type: expected torque, impedance or free_response");
  }
  const std::string ctrl = o.string("controller", "2dof");
  if (ctrl == "2dof") {
    d.controller = ControllerKind::kTwoDof;
  } else if (ctrl == "pi") {
    d.controller = ControllerKind::kPi;
  } else {
    throw ValidationError(ctx + ".controller: expected 2dof or pi");
  }
  if (o.has("pi")) {
    StrictObject pi(o.at("pi"), ctx + ".pi");
    d.pi.kp = pi.number("kp", d.pi.kp);
    d.pi.ki = pi.number("ki", d.pi.ki);
    pi.finish();
  }
  d.compensator_on = o.boolean("compensator_on", false);
  for (auto [key, dst] : {std::pair{"reference", &d.reference}, std::pair{"disturbance", &d.disturbance},
                          std::pair{"noise", &d.noise}, std::pair{"handle_motion", &d.handle_motion},
                          std::pair{"phi_ref", &d.phi_ref}}) {
    if (o.has(key)) *dst = signal_from_json(o.at(key), ctx + "." + key);
  }
  d.saturation_rad_s = o.number("saturation_rad_s", d.saturation_rad_s);
  d.dt_s = o.number("dt_s", d.dt_s);
  d.duration_s = o.number("duration_s", d.duration_s);
  d.I_d = o.optional_number("I_d");
  d.I_d_ratio = o.optional_number("I_d_ratio");
  if (d.I_d && d.I_d_ratio) throw ValidationError(ctx + ": give either I_d or I_d_ratio, not both");
  if (o.has("load")) {
    StrictObject l(o.at("load"), ctx + ".load");
    d.load.J_L = l.number("J_L", d.load.J_L);
    d.load.b_L = l.number("b_L", d.load.b_L);
    d.load.enabled = l.boolean("enabled", d.load.enabled);
    l.finish();
  }
  d.phi0 = o.number("phi0", d.phi0);
  o.finish();
  if (!(d.dt_s > 0.0) || !(d.duration_s >= 10.0 * d.dt_s) || !(d.saturation_rad_s > 0.0)) {
    throw ValidationError(ctx + ": need dt_s > 0, duration_s >= 10 dt_s and saturation_rad_s > 0");
  }
  if (d.type != ScenarioType::kTorque && !d.I_d && !d.I_d_ratio) {
    throw ValidationError(ctx + ": impedance scenarios need I_d or I_d_ratio");
  }
  return d;
}

json scenario_to_json(const ScenarioDef& d) {
  json j;
  j["type"] = type_name(d.type);
  j["controller"] = d.controller == ControllerKind::kPi ? "pi" : "2dof";
  j["pi"] = {{"kp", d.pi.kp}, {"ki", d.pi.ki}};
  j["compensator_on"] = d.compensator_on;
  j["reference"] = signal_to_json(d.reference);
  j["disturbance"] = signal_to_json(d.disturbance);
  j["noise"] = signal_to_json(d.noise);
  j["handle_motion"] = signal_to_json(d.handle_motion);
  j["phi_ref"] = signal_to_json(d.phi_ref);
  j["saturation_rad_s"] = d.saturation_rad_s;
  j["dt_s"] = d.dt_s;
  j["duration_s"] = d.duration_s;
  if (d.I_d) j["I_d"] = *d.I_d;
  if (d.I_d_ratio) j["I_d_ratio"] = *d.I_d_ratio;
  j["load"] = {{"J_L", d.load.J_L}, {"b_L", d.load.b_L}, {"enabled", d.load.enabled}};
  j["phi0"] = d.phi0;
  return j;
}

std::vector<double> coeffs_of(const Polynomial& p) {
  return p.is_zero() ? std::vector<double>{0.0} : p.coeffs();
}

}  // namespace

SeaParams PlantOverrides::apply(SeaParams base) const {
  if (J_A) base.J_A = *J_A;
  if (b_f) base.b_f = *b_f;
  if (K_s) base.K_s = *K_s;
  if (r_winch) base.r_winch = *r_winch;
  if (K_g) base.K_g = *K_g;
  if (K_pv) base.K_pv = *K_pv;
  if (K_iv) base.K_iv = *K_iv;
  return base;
}

ProjectConfig parse_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  StrictObject o(j, "config");
  ProjectConfig cfg;
  cfg.format_version = static_cast<int>(o.integer("format_version", kFormatVersion));
  if (cfg.format_version != kFormatVersion) {
    throw ValidationError("config: unsupported format_version " + std::to_string(cfg.format_version));
  }
  if (o.has("plant")) {
    StrictObject p(o.at("plant"), "config.plant");
    cfg.plant.J_A = p.optional_number("J_A");
    cfg.plant.b_f = p.optional_number("b_f");
    cfg.plant.K_s = p.optional_number("K_s");
    cfg.plant.r_winch = p.optional_number("r_winch");
    cfg.plant.K_g = p.optional_number("K_g");
    cfg.plant.K_pv = p.optional_number("K_pv");
    cfg.plant.K_iv = p.optional_number("K_iv");
    p.finish();
  }
  if (o.has("weights")) {
    StrictObject w(o.at("weights"), "config.weights");
    cfg.weights.rho = w.number("rho", cfg.weights.rho);
    cfg.weights.lambda = w.number("lambda", cfg.weights.lambda);
    cfg.weights.k = w.number("k", cfg.weights.k);
    w.finish();
  }
  if (o.has("scenarios")) {
    const json& sc = o.at("scenarios");
    if (!sc.is_object()) throw ValidationError("config.scenarios: expected an object");
    for (const auto& [name, def] : sc.items()) {
      cfg.scenarios.emplace(name, scenario_from_json(def, "config.scenarios." + name));
    }
  }
  if (o.has("bode")) {
    StrictObject b(o.at("bode"), "config.bode");
    cfg.bode.f_lo_hz = b.number("f_lo_hz", cfg.bode.f_lo_hz);
    cfg.bode.f_hi_hz = b.number("f_hi_hz", cfg.bode.f_hi_hz);
    cfg.bode.points = static_cast<int>(b.integer("points", cfg.bode.points));
    b.finish();
  }
  cfg.output_dir = o.string("output_dir", cfg.output_dir);
  o.finish();

  cfg.params().validate();
  cfg.weights.validate();
  if (cfg.bode.points < 2 || !(cfg.bode.f_lo_hz > 0.0) || !(cfg.bode.f_hi_hz > cfg.bode.f_lo_hz)) {
    throw ValidationError("config.bode: need points >= 2 and 0 < f_lo_hz < f_hi_hz");
  }
  return cfg;
}

std::string serialize_config(const ProjectConfig& cfg) {
  json j;
  j["format_version"] = cfg.format_version;
  json plant = json::object();
  const auto put = [&plant](const char* key, const std::optional<double>& v) {
    if (v) plant[key] = *v;
  };
  put("J_A", cfg.plant.J_A);
  put("b_f", cfg.plant.b_f);
  put("K_s", cfg.plant.K_s);
  put("r_winch", cfg.plant.r_winch);
  put("K_g", cfg.plant.K_g);
  put("K_pv", cfg.plant.K_pv);
  put("K_iv", cfg.plant.K_iv);
  j["plant"] = plant;
  j["weights"] = {{"rho", cfg.weights.rho}, {"lambda", cfg.weights.lambda}, {"k", cfg.weights.k}};
  json scenarios = json::object();
  for (const auto& [name, def] : cfg.scenarios) scenarios[name] = scenario_to_json(def);
  j["scenarios"] = scenarios;
  j["bode"] = {{"f_lo_hz", cfg.bode.f_lo_hz}, {"f_hi_hz", cfg.bode.f_hi_hz}, {"points", cfg.bode.points}};
  j["output_dir"] = cfg.output_dir;
  return j.dump(2) + "\n";
}

ProjectConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

ScenarioDef parse_scenario(std::string_view json_text) { return scenario_from_json(parse_json(json_text), "scenario"); }

std::string serialize_scenario(const ScenarioDef& def) { return scenario_to_json(def).dump(2) + "\n"; }

double virtual_stiffness(const ScenarioDef& def, const SeaParams& params) {
  if (def.I_d) return *def.I_d;
  if (def.I_d_ratio) return *def.I_d_ratio * params.K_s;
  throw ValidationError("scenario: impedance scenarios need I_d or I_d_ratio");
}

SimTrace run_scenario(const ScenarioDef& def, const SeaModel& model, const TwoDofController& ctrl) {
  TorqueLoopScenario sc;
  sc.model = model;
  if (def.controller == ControllerKind::kPi) {
    sc.controller = def.pi;
  } else {
    sc.controller = ctrl;
  }
  sc.compensator_on = def.compensator_on;
  sc.reference = def.reference;
  sc.disturbance = def.disturbance;
  sc.noise = def.noise;
  sc.handle_motion = def.handle_motion;
  sc.saturation_rad_s = def.saturation_rad_s;
  sc.dt_s = def.dt_s;
  sc.duration_s = def.duration_s;
  if (def.type == ScenarioType::kTorque) return simulate_torque_loop(sc);
  ImpedanceScenario imp;
  imp.torque = sc;
  imp.I_d = virtual_stiffness(def, model.params);
  imp.phi_ref = def.phi_ref;
  if (def.type == ScenarioType::kImpedance) return simulate_impedance(imp);
  return simulate_free_response(imp, def.load, def.phi0);
}

std::string plant_fingerprint(const SeaParams& p) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "J_A=%.17g;b_f=%.17g;K_s=%.17g;r_winch=%.17g;K_g=%.17g;K_pv=%.17g;K_iv=%.17g",
                p.J_A, p.b_f, p.K_s, p.r_winch, p.K_g, p.K_pv, p.K_iv);
  std::uint64_t h = 14695981039346656037ull;
  for (const char* c = buf; *c; ++c) {
    h ^= static_cast<unsigned char>(*c);
    h *= 1099511628211ull;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016" PRIx64, h);
  return hex;
}

ControllerBundle make_bundle(const SeaModel& model, const TwoDofController& ctrl, const TransferFunction& cl) {
  ControllerBundle b;
  b.weights = ctrl.weights;
  b.c1_num = coeffs_of(ctrl.c1_num);
  b.c1_den = coeffs_of(ctrl.p);
  b.c2_num = coeffs_of(ctrl.q);
  b.c2_den = coeffs_of(ctrl.p);
  b.cl_num = coeffs_of(cl.num());
  b.cl_den = coeffs_of(cl.den());
  b.plant_fingerprint = plant_fingerprint(model.params);
  return b;
}

std::string serialize_bundle(const ControllerBundle& b) {
  json j;
  j["format_version"] = b.format_version;
  j["weights"] = {{"rho", b.weights.rho}, {"lambda", b.weights.lambda}, {"k", b.weights.k}};
  j["c1_num"] = b.c1_num;
  j["c1_den"] = b.c1_den;
  j["c2_num"] = b.c2_num;
  j["c2_den"] = b.c2_den;
  j["cl_num"] = b.cl_num;
  j["cl_den"] = b.cl_den;
  j["plant_fingerprint"] = b.plant_fingerprint;
  return j.dump(2) + "\n";
}

ControllerBundle parse_bundle(std::string_view json_text) {
  const json j = parse_json(json_text);
  StrictObject o(j, "bundle");
  ControllerBundle b;
  b.format_version = static_cast<int>(o.integer("format_version", -1));
  if (b.format_version != kFormatVersion) throw ValidationError("bundle: unsupported format_version");
  {
    StrictObject w(o.at("weights"), "bundle.weights");
    b.weights.rho = w.number("rho", 0.0);
    b.weights.lambda = w.number("lambda", 0.0);
    b.weights.k = w.number("k", 0.0);
    w.finish();
  }
  b.c1_num = o.numbers("c1_num");
  b.c1_den = o.numbers("c1_den");
  b.c2_num = o.numbers("c2_num");
  b.c2_den = o.numbers("c2_den");
  b.cl_num = o.numbers("cl_num");
  b.cl_den = o.numbers("cl_den");
  b.plant_fingerprint = o.string("plant_fingerprint", "");
  o.finish();
  b.weights.validate();
  for (const auto* den : {&b.c1_den, &b.c2_den, &b.cl_den}) {
    if (den->empty() || den->front() == 0.0) throw ValidationError("bundle: denominator leading coefficient is zero");
  }
  if (b.c1_den != b.c2_den) throw ValidationError("bundle: C1 and C2 must share one denominator");
  return b;
}

TwoDofController controller_from_bundle(const ControllerBundle& b) {
  TwoDofController c;
  c.weights = b.weights;
  c.p = Polynomial(b.c1_den);
  c.q = Polynomial(b.c2_num);
  c.c1_num = Polynomial(b.c1_num);
  c.C1 = TransferFunction(c.c1_num, c.p);
  c.C2 = TransferFunction(c.q, c.p);
  return c;
}

}  // namespace sea
