// seactl: plant, synthesis, simulation and reproduction front end.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sea/config.hpp"
#include "sea/errors.hpp"
#include "sea/ident.hpp"
#include "sea/io.hpp"
#include "sea/presets.hpp"
#include "sea/reproduce.hpp"

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAcceptance = 4;

struct Options {
  std::string config;
  std::string out;
  std::uint64_t seed = sea::kDefaultSeed;
  bool json = false;
  std::string scenario;
};

struct Context {
  sea::ProjectConfig cfg;
  fs::path out;
  std::uint64_t seed;
  bool json;
};

Context load(const Options& o) {
  Context c{o.config.empty() ? sea::ProjectConfig{} : sea::load_config(o.config), {}, o.seed, o.json};
  c.out = o.out.empty() ? fs::path(c.cfg.output_dir) : fs::path(o.out);
  return c;
}

std::string poly_text(const sea::Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    const double c = p.coefficient(k);
    if (c == 0.0) continue;
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    out += sea::format_number(std::abs(c));
    if (k > 0) out += k == 1 ? " s" : " s^" + std::to_string(k);
  }
  return out;
}

std::string complex_text(const sea::Complex& z) {
  if (z.imag() == 0.0) return sea::format_number(z.real());
  return sea::format_number(z.real()) + (z.imag() < 0 ? " - " : " + ") + sea::format_number(std::abs(z.imag())) + "j";
}

json complex_list(const std::vector<sea::Complex>& zs) {
  json arr = json::array();
  for (const auto& z : zs) arr.push_back({z.real(), z.imag()});
  return arr;
}

std::vector<sea::Complex> roots_of(const sea::Polynomial& p) {
  return p.degree() > 0 ? sea::roots(p).roots : std::vector<sea::Complex>{};
}

json tf_json(const sea::TransferFunction& tf) {
  return {{"num", tf.num().coeffs()}, {"den", tf.den().coeffs()}, {"zeros", complex_list(roots_of(tf.num()))},
          {"poles", complex_list(roots_of(tf.den()))}};
}

void print_tf(const char* name, const sea::TransferFunction& tf) {
  std::printf("%s(s) = (%s) / (%s)\n", name, poly_text(tf.num()).c_str(), poly_text(tf.den()).c_str());
  std::printf("  zeros:");
  for (const auto& z : roots_of(tf.num())) std::printf("  %s", complex_text(z).c_str());
  std::printf("\n  poles:");
  for (const auto& z : roots_of(tf.den())) std::printf("  %s", complex_text(z).c_str());
  std::printf("\n");
}

int cmd_plant(const Context& c) {
  const sea::SeaModel model = sea::build_plant(c.cfg.params());
  sea::write_text(c.out / "plant.csv", sea::plant_csv(model));
  if (c.json) {
    std::cout << json{{"P", tf_json(model.P)}, {"G", tf_json(model.G)}}.dump(2) << "\n";
  } else {
    print_tf("P", model.P);
    print_tf("G", model.G);
  }
  return kExitOk;
}

int cmd_synth(const Context& c) {
  const sea::SeaModel model = sea::build_plant(c.cfg.params());
  const sea::TwoDofController ctrl = sea::h2_synthesize(model, c.cfg.weights);
  const sea::TransferFunction cl = sea::build_compensator(model, ctrl);
  const sea::ControllerBundle bundle = sea::make_bundle(model, ctrl, cl);
  sea::write_text(c.out / "controller.json", sea::serialize_bundle(bundle));

  const auto poles = roots_of(ctrl.characteristic());
  const sea::StabilityMargins m = sea::margins(sea::series(model.P, ctrl.C2));
  const sea::TransferFunction G1 = sea::torque_loop_maps(model, ctrl, false).G1;
  const double bw = sea::bandwidth_3db(G1);

  std::string report;
  report += "C1(s) = (" + poly_text(ctrl.c1_num) + ") / (" + poly_text(ctrl.p) + ")\n";
  report += "C2(s) = (" + poly_text(ctrl.q) + ") / (" + poly_text(ctrl.p) + ")\n";
  report += "C_L(s) = (" + poly_text(cl.num()) + ") / (" + poly_text(cl.den()) + ")\n";
  report += "closed-loop poles:\n";
  for (const auto& p : poles) report += "  " + complex_text(p) + (p.real() < 0 ? "" : "  (UNSTABLE)") + "\n";
  report += "gain margin [dB]: " + sea::format_number(m.gain_margin_db) + " at " +
            sea::format_number(m.phase_crossover_hz) + " Hz\n";
  report += "phase margin [deg]: " + sea::format_number(m.phase_margin_deg) + " at " +
            sea::format_number(m.gain_crossover_hz) + " Hz\n";
  report += "tracking bandwidth [Hz]: " + sea::format_number(bw) + "\n";
  report += "Sylvester condition number: " + sea::format_number(ctrl.diophantine_condition) +
            (ctrl.ill_conditioned ? "  (ill-conditioned)" : "") + "\n";
  sea::write_text(c.out / "synth_report.txt", report);

  if (c.json) {
    json j = json::parse(sea::serialize_bundle(bundle));
    j["closed_loop_poles"] = complex_list(poles);
    j["gain_margin_db"] = m.gain_margin_db;
    j["phase_margin_deg"] = m.phase_margin_deg;
    j["bandwidth_hz"] = bw;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << report;
  }
  return kExitOk;
}

int cmd_sim(const Context& c, const std::string& name) {
  const sea::SeaModel model = sea::build_plant(c.cfg.params());
  const sea::TwoDofController ctrl = sea::h2_synthesize(model, c.cfg.weights);
  const fs::path dir = c.out / name;

  if (const auto it = c.cfg.scenarios.find(name); it != c.cfg.scenarios.end()) {
    const sea::SimTrace tr = sea::run_scenario(it->second, model, ctrl);
    sea::write_text(dir / (name + ".csv"), sea::trace_csv(tr));
    sea::write_text(dir / "traces.svg", sea::traces_svg({{name, &tr}}, name));
    const double rms = sea::rms_error(tr, 0.2 * it->second.duration_s);
    if (c.json) {
      std::cout << json{{"scenario", name}, {"samples", tr.size()}, {"rms_error", rms}}.dump(2) << "\n";
    } else {
      std::printf("%s: %zu samples, RMS error after 20%% of the run %s Nm\n", name.c_str(), tr.size(),
                  sea::format_number(rms).c_str());
    }
    return kExitOk;
  }

  std::optional<sea::Preset> preset;
  try {
    preset = sea::preset(name, c.seed);
  } catch (const sea::ValidationError&) {
    std::string known;
    for (const auto& [n, _] : c.cfg.scenarios) known += n + ", ";
    for (const auto& n : sea::preset_names()) known += n + ", ";
    known.resize(known.size() - 2);
    throw sea::ValidationError("unknown scenario '" + name + "'; known: " + known);
  }
  sea::ReproduceReport r;
  r.presets = {name};
  r.checks = sea::run_preset(*preset, model, ctrl, dir);
  if (c.json) {
    json checks = json::array();
    for (const auto& ch : r.checks) {
      checks.push_back({{"check", ch.name}, {"value", ch.value}, {"limit", ch.limit}, {"passed", ch.passed}});
    }
    std::cout << json{{"scenario", name}, {"runs", preset->runs.size()}, {"checks", checks}}.dump(2) << "\n";
  } else {
    std::printf("%s: %s\n", name.c_str(), preset->description.c_str());
    std::cout << r.table();
  }
  return kExitOk;
}

int cmd_bode(const Context& c) {
  const sea::SeaModel model = sea::build_plant(c.cfg.params());
  const sea::TwoDofController ctrl = sea::h2_synthesize(model, c.cfg.weights);
  const sea::TransferFunction G1 = sea::torque_loop_maps(model, ctrl, false).G1;
  const auto& g = c.cfg.bode;
  const sea::FrequencyResponse theory = sea::frequency_response(G1, sea::logspace_hz(g.f_lo_hz, g.f_hi_hz, g.points));
  sea::write_text(c.out / "bode_theory.csv", sea::frequency_response_csv(theory));

  const sea::Preset chirp = sea::preset("fig10", c.seed);
  const sea::ScenarioDef& def = chirp.runs[0].def;
  const sea::SimTrace tr = sea::run_scenario(def, model, ctrl);
  const sea::Band band = sea::chirp_band(def.reference);
  const double f_hi = std::min(g.f_hi_hz, band.hi_hz);
  const double f_lo = std::max(g.f_lo_hz, band.lo_hz);
  if (!(f_hi > f_lo)) throw sea::ValidationError("bode grid does not overlap the chirp band");
  const auto est_grid = sea::logspace_hz(f_lo, f_hi, std::max(2, g.points / 3));
  const sea::FrfEstimate est = sea::estimate_frf(tr.r, tr.tau_L, tr.dt_s, est_grid);
  sea::write_text(c.out / "bode_estimate.csv", sea::frf_csv(est));

  const double bw = sea::bandwidth_3db(G1);
  sea::write_text(c.out / "bode.svg",
                  sea::bode_svg({{"theory", theory}, {"estimate", est.response()}}, {bw}, "tau_L / tau_d"));

  const sea::FrequencyResponse at_est = sea::frequency_response(G1, est_grid);
  double dev = 0.0;
  std::size_t coherent = 0;
  for (std::size_t i = 0; i < est_grid.size(); ++i) {
    if (est.coherence[i] <= 0.99) continue;
    ++coherent;
    dev = std::max(dev, std::abs(est.magnitude_db[i] - at_est.magnitude_db[i]));
  }
  if (c.json) {
    std::cout << json{{"bandwidth_hz", bw}, {"coherent_points", coherent}, {"max_mag_dev_db", dev}}.dump(2) << "\n";
  } else {
    std::printf("theoretical -3 dB bandwidth: %s Hz\n", sea::format_number(bw).c_str());
    std::printf("max |estimate - theory| over %zu coherent points: %s dB\n", coherent,
                sea::format_number(dev).c_str());
  }
  return kExitOk;
}

int cmd_reproduce(const Context& c) {
  const sea::ReproduceReport r = sea::reproduce_all(c.cfg, c.out, c.seed);
  if (c.json) {
    json checks = json::array();
    for (const auto& ch : r.checks) {
      checks.push_back({{"preset", ch.preset}, {"check", ch.name}, {"value", ch.value}, {"limit", ch.limit},
                        {"passed", ch.passed}});
    }
    std::cout << json{{"passed", r.all_passed()}, {"checks", checks}}.dump(2) << "\n";
  } else {
    std::cout << r.table();
    std::printf("%s\n", r.all_passed() ? "all checks passed" : "some checks FAILED");
  }
  return r.all_passed() ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Series elastic actuator torque and impedance control toolkit"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "JSON project configuration")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory (default: the config's output_dir)");
  app.add_option("--seed", o.seed, "seed for noise signals");
  app.add_flag("--json", o.json, "machine-readable output on stdout");

  auto* plant = app.add_subcommand("plant", "print P and G, write plant.csv")->fallthrough();
  auto* synth = app.add_subcommand("synth", "design the 2-DOF controller, write controller.json")->fallthrough();
  auto* sim = app.add_subcommand("sim", "run a named scenario or preset")->fallthrough();
  sim->add_option("scenario", o.scenario, "scenario or preset name")->required();
  auto* bode = app.add_subcommand("bode", "theoretical and estimated closed-loop frequency response")->fallthrough();
  auto* reproduce = app.add_subcommand("reproduce", "run every preset and check the acceptance tolerances")
                        ->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Context c = load(o);
    if (plant->parsed()) return cmd_plant(c);
    if (synth->parsed()) return cmd_synth(c);
    if (sim->parsed()) return cmd_sim(c, o.scenario);
    if (bode->parsed()) return cmd_bode(c);
    if (reproduce->parsed()) return cmd_reproduce(c);
  } catch (const sea::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const sea::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
