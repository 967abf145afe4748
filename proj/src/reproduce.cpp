#include "sea/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <future>
#include <numbers>

#include "sea/ident.hpp"
#include "sea/io.hpp"

namespace sea {

namespace {

constexpr double kSettleS = 2.0;

double wrap_deg(double x) { return std::remainder(x, 360.0); }

double rms_from(const std::vector<double>& t, const std::vector<double>& x, double from_t) {
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= from_t) {
      acc += x[i] * x[i];
      ++n;
    }
  }
  return n ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
}

double max_abs(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

CheckResult upper(const std::string& preset, const std::string& name, double value, double limit,
                  std::string detail = {}) {
  return {preset, name, value, limit, value <= limit, std::move(detail)};
}

std::complex<double> at_hz(const TransferFunction& tf, double f_hz) {
  return tf.evaluate(2.0 * std::numbers::pi * f_hz);
}

void write_traces(const std::filesystem::path& dir, const std::vector<PresetRun>& runs,
                  const std::vector<SimTrace>& traces, const std::string& title) {
  std::vector<LabeledTrace> labeled;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    write_text(dir / (runs[i].name + ".csv"), trace_csv(traces[i]));
    labeled.push_back({runs[i].name, &traces[i]});
  }
  write_text(dir / "traces.svg", traces_svg(labeled, title));
}

// Compares an estimate with theory wherever the coherence clears 0.99.
void frf_checks(const std::string& preset, const FrfEstimate& est, const FrequencyResponse& theory,
                std::vector<CheckResult>& out) {
  double mag_dev = 0.0;
  double phase_dev = 0.0;
  std::size_t coherent = 0;
  for (std::size_t i = 0; i < est.freqs_hz.size(); ++i) {
    if (est.coherence[i] <= 0.99) continue;
    ++coherent;
    mag_dev = std::max(mag_dev, std::abs(est.magnitude_db[i] - theory.magnitude_db[i]));
    phase_dev = std::max(phase_dev, std::abs(wrap_deg(est.phase_deg[i] - theory.phase_deg[i])));
  }
  const double frac = static_cast<double>(coherent) / static_cast<double>(est.freqs_hz.size());
  out.push_back({preset, "coherent_fraction", frac, 0.5, frac >= 0.5, "share of grid with coherence > 0.99"});
  out.push_back(upper(preset, "max_mag_dev_db", mag_dev, 0.5));
  out.push_back(upper(preset, "max_phase_dev_deg", phase_dev, 5.0));
}

std::vector<SimTrace> run_all(const Preset& preset, const SeaModel& model, const TwoDofController& ctrl) {
  std::vector<SimTrace> traces;
  for (const auto& run : preset.runs) traces.push_back(run_scenario(run.def, model, ctrl));
  return traces;
}

std::vector<CheckResult> model_checks(const ProjectConfig& cfg, const SeaModel& model, const TwoDofController& ctrl,
                                      const std::filesystem::path& dir) {
  const TransferFunction cl = build_compensator(model, ctrl);
  write_text(dir / "plant.csv", plant_csv(model));
  write_text(dir / "controller.json", serialize_bundle(make_bundle(model, ctrl, cl)));

  std::vector<CheckResult> out;
  const std::string name = "model";
  double worst_re = -std::numeric_limits<double>::infinity();
  for (const Complex& r : roots(ctrl.characteristic()).roots) worst_re = std::max(worst_re, r.real());
  out.push_back({name, "max_closed_loop_pole_re", worst_re, 0.0, worst_re < 0.0, "roots of d_rho d_lambda_k"});

  const TransferFunction G1 = torque_loop_maps(model, ctrl, false).G1;
  const double bw = bandwidth_3db(G1);
  out.push_back({name, "bandwidth_hz", bw, 25.0, bw >= 10.0 && bw <= 25.0, "required in [10, 25] Hz"});
  const double lag = -phase_at(G1, bw);
  out.push_back({name, "phase_lag_at_bandwidth_deg", lag, 30.0, std::abs(lag - 130.0) <= 30.0,
                 "required within 30 deg of 130 deg"});

  if (cfg.params() == default_params() && cfg.weights == SynthesisWeights{}) {
    const Polynomial num = model.P.num();
    const Polynomial den = model.P.den();
    const double printed_p[] = {3.204, 94.34, 74.88, 2021.0};
    const double got_p[] = {num.coefficient(1), num.coefficient(0), den.coefficient(2), den.coefficient(1)};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(got_p[i] / printed_p[i] - 1.0));
    out.push_back(upper(name, "plant_coeff_rel_err", worst, 0.005));

    const std::vector<double> printed_c1 = {6.90e-4, 0.0517, 1.40, 0.0651};
    const std::vector<double> printed_den = {3.45e-7, 5.07e-5, 0.00346, 0.0651};
    const std::vector<double> printed_c2 = {3.22e-5, 0.00241, 0.0651};
    worst = 0.0;
    const auto cmp = [&worst](const Polynomial& got, const std::vector<double>& printed) {
      const int n = static_cast<int>(printed.size()) - 1;
      if (got.degree() != n) {
        worst = std::numeric_limits<double>::infinity();
        return;
      }
      for (int k = 0; k <= n; ++k) worst = std::max(worst, std::abs(got.coefficient(n - k) / printed[k] - 1.0));
    };
    cmp(ctrl.c1_num, printed_c1);
    cmp(ctrl.p, printed_den);
    cmp(ctrl.q, printed_c2);
    out.push_back(upper(name, "controller_coeff_rel_err", worst, 0.02));
  }
  return out;
}

}  // namespace

std::string traces_svg(const std::vector<LabeledTrace>& traces, const std::string& title) {
  PlotPanel torque{title, "t [s]", "torque [Nm]", false, {}, {}};
  PlotPanel velocity{"motor velocity command", "t [s]", "omega_d [rad/s]", false, {}, {}};
  PlotPanel load{"load angle", "t [s]", "phi_L [rad]", false, {}, {}};
  for (const auto& lt : traces) {
    const SimTrace& tr = *lt.trace;
    torque.series.push_back({lt.label + " tau_d", tr.t, tr.r});
    torque.series.push_back({lt.label + " tau_L", tr.t, tr.tau_L});
    velocity.series.push_back({lt.label, tr.t, tr.omega_d});
    load.series.push_back({lt.label, tr.t, tr.phi_L});
  }
  const std::vector<PlotPanel> panels = {torque, velocity, load};
  return render_svg(panels);
}

std::string bode_svg(const std::vector<std::pair<std::string, FrequencyResponse>>& curves,
                     const std::vector<double>& markers_hz, const std::string& title) {
  PlotPanel mag{title, "f [Hz]", "magnitude [dB]", true, {}, markers_hz};
  PlotPanel phase{"phase", "f [Hz]", "phase [deg]", true, {}, markers_hz};
  for (const auto& [label, fr] : curves) {
    mag.series.push_back({label, fr.freqs_hz, fr.magnitude_db});
    phase.series.push_back({label, fr.freqs_hz, fr.phase_deg});
  }
  const std::vector<PlotPanel> panels = {mag, phase};
  return render_svg(panels);
}

bool ReproduceReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string ReproduceReport::table() const {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %-28s %14s %14s  %s\n", "preset", "check", "value", "limit", "result");
  out += buf;
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%-12s %-28s %14.6g %14.6g  %s\n", c.preset.c_str(), c.name.c_str(), c.value,
                  c.limit, c.passed ? "PASS" : "FAIL");
    out += buf;
  }
  return out;
}

std::string ReproduceReport::csv() const {
  std::string out = "preset,check,value,limit,passed\n";
  for (const auto& c : checks) {
    out += c.preset + ',' + c.name + ',' + format_number(c.value) + ',' + format_number(c.limit) + ',' +
           (c.passed ? "1" : "0") + '\n';
  }
  return out;
}

std::vector<CheckResult> run_preset(const Preset& preset, const SeaModel& model, const TwoDofController& ctrl,
                                    const std::filesystem::path& dir) {
  const std::vector<SimTrace> traces = run_all(preset, model, ctrl);
  write_traces(dir, preset.runs, traces, preset.description);
  std::vector<CheckResult> out;
  const std::string& name = preset.name;
  const TorqueLoopMaps plain = torque_loop_maps(model, ctrl, false);
  const TransferFunction& G1 = plain.G1;
  const TransferFunction& G2 = plain.H_phi;

  if (name == "torque_sine") {
    const SimTrace& tr = traces[0];
    const double f = preset.runs[0].def.reference.frequency_hz;
    const std::complex<double> g = at_hz(G1, f);
    const SineFit fit = fit_sine(tr.t, tr.tau_L, f, kSettleS);
    const double amp = preset.runs[0].def.reference.amplitude * std::abs(g);
    out.push_back(upper(name, "amplitude_rel_err", std::abs(fit.amplitude / amp - 1.0), 0.02));
    out.push_back(upper(name, "phase_err_deg", std::abs(wrap_deg(fit.phase_deg - std::arg(g) * 180.0 / std::numbers::pi)),
                        2.0));
  } else if (name == "fig6") {
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const SimTrace& tr = traces[i];
      const ScenarioDef& def = preset.runs[i].def;
      const double I_d = virtual_stiffness(def, model.params);
      const double f = def.handle_motion.frequency_hz;
      const double bound = std::abs(1.0 - at_hz(G1, f)) * std::abs(I_d + at_hz(G2, f)) / I_d;
      const double rel = rms_from(tr.t, tr.e, kSettleS) / rms_from(tr.t, tr.r, kSettleS);
      out.push_back(upper(name, preset.runs[i].name + "_rel_rms_err", rel, 1.05 * bound));
    }
  } else if (name == "fig9") {
    const double rms_2dof = rms_error(traces[0], kSettleS);
    const double rms_pi = rms_error(traces[1], kSettleS);
    write_text(dir / "rms.csv", "controller,rms_error_nm\n2dof," + format_number(rms_2dof) + "\npi," +
                                    format_number(rms_pi) + "\n");
    out.push_back(upper(name, "rms_2dof_vs_pi", rms_2dof, rms_pi, "2-DOF RMS must not exceed PI RMS"));
  } else if (name == "fig10" || name == "fig10_paper") {
    const SimTrace& tr = traces[0];
    const ScenarioDef& def = preset.runs[0].def;
    const Band band = chirp_band(def.reference);
    const std::vector<double> grid = logspace_hz(band.lo_hz, band.hi_hz, 60);
    const FrfEstimate est = estimate_frf(tr.r, tr.tau_L, tr.dt_s, grid);
    const FrequencyResponse theory = frequency_response(G1, grid);
    write_text(dir / "frf_estimate.csv", frf_csv(est));
    write_text(dir / "frf_theory.csv", frequency_response_csv(theory));
    const double bw = bandwidth_3db(G1);
    const FrequencyResponse dense = frequency_response(G1, logspace_hz(0.1, 100.0, 301));
    write_text(dir / "bode.svg", bode_svg({{"theory", dense}, {"estimate", est.response()}}, {bw}, "tau_L / tau_d"));
    frf_checks(name, est, theory, out);
    out.push_back({name, "max_abs_omega_d", max_abs(tr.omega_d), def.saturation_rad_s,
                   max_abs(tr.omega_d) < def.saturation_rad_s, "saturation must stay inactive"});
  } else if (name == "fig11") {
    const double phi0 = preset.runs[0].def.phi0;
    std::vector<Peak> peaks;
    for (const Peak& p : peak_envelope(traces[0], "phi_L")) {
      if (p.value > 1e-3 * std::abs(phi0)) peaks.push_back(p);
    }
    std::string csv = "t,phi_L\n";
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
      csv += format_number(peaks[i].t) + ',' + format_number(peaks[i].value) + '\n';
      if (i > 0) worst_ratio = std::max(worst_ratio, peaks[i].value / peaks[i - 1].value);
    }
    write_text(dir / "peaks.csv", csv);
    out.push_back({name, "peak_count", static_cast<double>(peaks.size()), 2.0, peaks.size() >= 2,
                   "peaks above 0.1% of the release angle"});
    out.push_back({name, "max_successive_peak_ratio", worst_ratio, 1.0, peaks.size() >= 2 && worst_ratio < 1.0,
                   "envelope must strictly decrease"});
  } else if (name == "compensator") {
    const ScenarioDef& def = preset.runs[0].def;
    const double f = def.handle_motion.frequency_hz;
    const double a = def.handle_motion.amplitude;
    const double pred_on = a * std::abs((1.0 - at_hz(G1, f)) * at_hz(G2, f));
    const double pred_off = a * std::abs(at_hz(G2, f));
    const double on = fit_sine(traces[0].t, traces[0].tau_L, f, kSettleS).amplitude;
    const double off = fit_sine(traces[1].t, traces[1].tau_L, f, kSettleS).amplitude;
    out.push_back(upper(name, "compensated_amp_rel_err", std::abs(on / pred_on - 1.0), 0.02));
    out.push_back(upper(name, "uncompensated_amp_rel_err", std::abs(off / pred_off - 1.0), 0.02));
    out.push_back(upper(name, "compensated_vs_open_bound", on, pred_off, "must stay below |G2| prediction"));
  }
  return out;
}

ReproduceReport reproduce_all(const ProjectConfig& cfg, const std::filesystem::path& out_dir, std::uint64_t seed,
                              bool parallel) {
  const SeaModel model = build_plant(cfg.params());
  const TwoDofController ctrl = h2_synthesize(model, cfg.weights);

  ReproduceReport report;
  report.presets = preset_names();
  report.checks = model_checks(cfg, model, ctrl, out_dir / "model");

  std::vector<std::future<std::vector<CheckResult>>> jobs;
  for (const auto& name : report.presets) {
    const auto launch = parallel ? std::launch::async : std::launch::deferred;
    jobs.push_back(std::async(launch, [&, name] { return run_preset(preset(name, seed), model, ctrl, out_dir / name); }));
  }
  for (auto& job : jobs) {
    for (auto& c : job.get()) report.checks.push_back(std::move(c));
  }
  write_text(out_dir / "summary.csv", report.csv());
  return report;
}

}  // namespace sea
