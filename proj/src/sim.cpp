#include "sea/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "sea/errors.hpp"

namespace sea {

namespace {

class Excitation {
 public:
  Excitation(const SignalSpec& spec, double dt, double duration) : spec_(spec) {
    spec_.validate();
    if (spec_.is_noise()) samples_ = generate(spec_, dt, duration);
  }

  double operator()(double t, std::size_t k) const {
    if (spec_.is_noise()) return samples_[std::min(k, samples_.size() - 1)];
    return signal_value(spec_, t);
  }

 private:
  SignalSpec spec_;
  std::vector<double> samples_;
};

struct ControllerRealization {
  StateSpace ss;  // inputs [r, y]
  TransferFunction feedback_part;
};

ControllerRealization realize_controller(const TorqueController& c) {
  ControllerRealization out;
  if (const auto* two = std::get_if<TwoDofController>(&c)) {
    const std::array<Polynomial, 2> nums{two->c1_num, -two->q};
    out.ss = realize_common_denominator(two->p, nums);
    out.feedback_part = two->C2;
  } else {
    const auto& pi = std::get<PiController>(c);
    const Polynomial num{pi.kp, pi.ki};
    const Polynomial den{1.0, 0.0};
    const std::array<Polynomial, 2> nums{num, -num};
    out.ss = realize_common_denominator(den, nums);
    out.feedback_part = TransferFunction(num, den);
  }
  return out;
}

TransferFunction compensator_for(const SeaModel& model, const TransferFunction& c2) {
  const TransferFunction sens = feedback(TransferFunction::gain(1.0), series(model.P, c2));
  TransferFunction cl = minimal_form(series(model.G, sens));
  if (!is_stable(cl)) throw NumericalError("compensator G/(1 + P C2) is unstable");
  return cl;
}

struct Outputs {
  double phi_L = 0.0;
  double tau_L = 0.0;
  double y = 0.0;
  double tau_d = 0.0;
  double u = 0.0;
  double omega_d = 0.0;
  double d = 0.0;
  double n = 0.0;
};

struct Engine {
  const TorqueLoopScenario& sc;
  bool impedance = false;
  double I_d = 0.0;
  std::optional<LoadModel> load;

  StateSpace plant;
  StateSpace ctrl;
  std::optional<StateSpace> comp;

  Excitation ref;
  Excitation phi_ref;
  Excitation dist;
  Excitation noise;
  Excitation handle;

  int ip = 0, ic = 0, icl = 0, il = 0, nx = 0;

  Engine(const TorqueLoopScenario& s, const SignalSpec& phi_ref_spec)
      : sc(s),
        ref(s.reference, s.dt_s, s.duration_s),
        phi_ref(phi_ref_spec, s.dt_s, s.duration_s),
        dist(s.disturbance, s.dt_s, s.duration_s),
        noise(s.noise, s.dt_s, s.duration_s),
        handle(s.handle_motion, s.dt_s, s.duration_s) {
    plant = physical_realization(s.model.params);
    const ControllerRealization cr = realize_controller(s.controller);
    ctrl = cr.ss;
    if (s.compensator_on) comp = to_state_space(compensator_for(s.model, cr.feedback_part));
  }

  void layout() {
    ip = 0;
    ic = plant.states();
    icl = ic + ctrl.states();
    il = icl + (comp ? comp->states() : 0);
    nx = il + (load ? 2 : 0);
  }

  Outputs evaluate(const Eigen::VectorXd& x, double t, std::size_t k, Eigen::VectorXd* xdot) const {
    Outputs o;
    const int np = plant.states();
    const int nc = ctrl.states();
    const auto xp = x.segment(ip, np);
    const auto xc = x.segment(ic, nc);

    o.phi_L = load ? x(il) : handle(t, k);
    o.tau_L = plant.C.dot(xp) + plant.D(1) * o.phi_L;
    o.n = noise(t, k);
    o.y = o.tau_L + o.n;
    o.tau_d = impedance ? I_d * (phi_ref(t, k) - o.phi_L) : ref(t, k);
    double r_eff = o.tau_d;
    if (comp) {
      const auto xcl = x.segment(icl, comp->states());
      r_eff -= comp->C.dot(xcl) + comp->D(0) * o.phi_L;
    }
    o.u = ctrl.C.dot(xc) + ctrl.D(0) * r_eff + ctrl.D(1) * o.y;
    o.d = dist(t, k);
    o.omega_d = std::clamp(o.u + o.d, -sc.saturation_rad_s, sc.saturation_rad_s);

    if (xdot) {
      Eigen::VectorXd& dx = *xdot;
      dx.segment(ip, np) = plant.A * xp + plant.B.col(0) * o.omega_d + plant.B.col(1) * o.phi_L;
      dx.segment(ic, nc) = ctrl.A * xc + ctrl.B.col(0) * r_eff + ctrl.B.col(1) * o.y;
      if (comp) {
        const int ncl = comp->states();
        dx.segment(icl, ncl) = comp->A * x.segment(icl, ncl) + comp->B.col(0) * o.phi_L;
      }
      if (load) {
        dx(il) = x(il + 1);
        dx(il + 1) = (o.tau_L - load->b_L * x(il + 1)) / load->J_L;
      }
    }
    return o;
  }

  SimTrace run(Eigen::VectorXd x) const {
    const double dt = sc.dt_s;
    const std::size_t n = sample_count(dt, sc.duration_s);
    SimTrace tr;
    tr.dt_s = dt;
    for (auto* ch : {&tr.t, &tr.r, &tr.u_presat, &tr.omega_d, &tr.d, &tr.n, &tr.tau_L, &tr.y_meas, &tr.phi_L, &tr.e}) {
      ch->resize(n);
    }
    Eigen::VectorXd k1(nx), k2(nx), k3(nx), k4(nx), tmp(nx);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * dt;
      const Outputs o = evaluate(x, t, k, &k1);
      tr.t[k] = t;
      tr.r[k] = o.tau_d;
      tr.u_presat[k] = o.u;
      tr.omega_d[k] = o.omega_d;
      tr.d[k] = o.d;
      tr.n[k] = o.n;
      tr.tau_L[k] = o.tau_L;
      tr.y_meas[k] = o.y;
      tr.phi_L[k] = o.phi_L;
      tr.e[k] = o.tau_d - o.tau_L;
      if (!std::isfinite(o.tau_L) || !std::isfinite(o.u)) {
        throw NumericalError("simulation diverged at sample " + std::to_string(k));
      }
      if (k + 1 == n) break;
      tmp = x + 0.5 * dt * k1;
      evaluate(tmp, t + 0.5 * dt, k, &k2);
      tmp = x + 0.5 * dt * k2;
      evaluate(tmp, t + 0.5 * dt, k, &k3);
      tmp = x + dt * k3;
      evaluate(tmp, t + dt, k, &k4);
      x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!x.allFinite()) throw NumericalError("simulation diverged at sample " + std::to_string(k + 1));
    }
    return tr;
  }
};

}  // namespace

void TorqueLoopScenario::validate() const {
  model.params.validate();
  if (!(dt_s > 0.0)) throw ValidationError("scenario: dt_s must be positive");
  if (!(duration_s >= 10.0 * dt_s)) throw ValidationError("scenario: duration_s must be at least 10 dt_s");
  if (!(saturation_rad_s > 0.0)) throw ValidationError("scenario: saturation_rad_s must be positive");
  if (const auto* pi = std::get_if<PiController>(&controller)) {
    if (!(pi->kp >= 0.0) || !(pi->ki >= 0.0)) throw ValidationError("PI controller gains must be >= 0");
  }
  for (const SignalSpec* s : {&reference, &disturbance, &noise, &handle_motion}) s->validate();
}

void ImpedanceScenario::validate() const {
  torque.validate();
  if (!(I_d >= 0.0) || !std::isfinite(I_d)) throw ValidationError("impedance: I_d must be >= 0");
  phi_ref.validate();
}

void LoadModel::validate() const {
  if (!enabled) throw ValidationError("load model is disabled");
  if (!(J_L > 0.0)) throw ValidationError("load: J_L must be positive");
  if (!(b_L >= 0.0)) throw ValidationError("load: b_L must be >= 0");
}

const std::vector<double>& SimTrace::channel(std::string_view name) const {
  if (name == "t") return t;
  if (name == "r") return r;
  if (name == "u_presat") return u_presat;
  if (name == "omega_d") return omega_d;
  if (name == "d") return d;
  if (name == "n") return n;
  if (name == "tau_L") return tau_L;
  if (name == "y_meas") return y_meas;
  if (name == "phi_L") return phi_L;
  if (name == "e") return e;
  throw ValidationError("unknown trace channel '" + std::string(name) + "'");
}

SimTrace simulate_torque_loop(const TorqueLoopScenario& sc) {
  sc.validate();
  Engine eng(sc, SignalSpec::zero());
  eng.layout();
  return eng.run(Eigen::VectorXd::Zero(eng.nx));
}

SimTrace simulate_impedance(const ImpedanceScenario& sc) {
  sc.validate();
  Engine eng(sc.torque, sc.phi_ref);
  eng.impedance = true;
  eng.I_d = sc.I_d;
  eng.layout();
  return eng.run(Eigen::VectorXd::Zero(eng.nx));
}

SimTrace simulate_free_response(const ImpedanceScenario& sc, const LoadModel& load, double phi0) {
  sc.validate();
  load.validate();
  if (!std::isfinite(phi0)) throw ValidationError("free response: phi0 must be finite");
  Engine eng(sc.torque, sc.phi_ref);
  eng.impedance = true;
  eng.I_d = sc.I_d;
  eng.load = load;
  eng.layout();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(eng.nx);
  x(eng.ip) = phi0;  // actuator co-located with the displaced slider, spring relaxed
  if (eng.comp && eng.comp->states() > 0) {
    const Eigen::VectorXd xs = eng.comp->A.partialPivLu().solve(-eng.comp->B.col(0) * phi0);
    x.segment(eng.icl, eng.comp->states()) = xs;
  }
  x(eng.il) = phi0;
  return eng.run(x);
}

double rms_error(const SimTrace& trace, double from_t) {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace.t[i] + 1e-12 < from_t) continue;
    acc += trace.e[i] * trace.e[i];
    ++count;
  }
  if (count == 0) throw ValidationError("rms_error: empty window");
  return std::sqrt(acc / static_cast<double>(count));
}

double steady_state_error(const SimTrace& trace) {
  const std::size_t n = trace.size();
  const std::size_t count = std::max<std::size_t>(1, n / 10);
  if (n == 0) throw ValidationError("steady_state_error: empty trace");
  double acc = 0.0;
  for (std::size_t i = n - count; i < n; ++i) acc += trace.e[i];
  return acc / static_cast<double>(count);
}

std::vector<Peak> peak_envelope(const SimTrace& trace, std::string_view channel) {
  const auto& x = trace.channel(channel);
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (x[i] > x[i - 1] && x[i] > x[i + 1]) peaks.push_back({trace.t[i], x[i]});
  }
  return peaks;
}

double settling_time(const SimTrace& trace, std::string_view channel, double final_value, double band) {
  const auto& x = trace.channel(channel);
  double maxdev = 0.0;
  for (double v : x) maxdev = std::max(maxdev, std::abs(v - final_value));
  const double thr = band * maxdev;
  for (std::size_t i = x.size(); i-- > 0;) {
    if (std::abs(x[i] - final_value) > thr) return i + 1 < x.size() ? trace.t[i + 1] : trace.t[i];
  }
  return 0.0;
}

SineFit fit_sine(const std::vector<double>& t, const std::vector<double>& y, double f_hz, double from_t) {
  if (t.size() != y.size()) throw ValidationError("fit_sine: length mismatch");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] + 1e-12 >= from_t) idx.push_back(i);
  }
  if (idx.size() < 8) throw ValidationError("fit_sine: window too short");
  const double tmid = 0.5 * (t[idx.front()] + t[idx.back()]);
  const double w = 2.0 * std::numbers::pi * f_hz;
  Eigen::Matrix4d ata = Eigen::Matrix4d::Zero();
  Eigen::Vector4d aty = Eigen::Vector4d::Zero();
  for (std::size_t i : idx) {
    const Eigen::Vector4d row(std::sin(w * t[i]), std::cos(w * t[i]), 1.0, t[i] - tmid);
    ata += row * row.transpose();
    aty += row * y[i];
  }
  const Eigen::Vector4d c = ata.ldlt().solve(aty);
  SineFit fit;
  fit.amplitude = std::hypot(c(0), c(1));
  fit.phase_deg = std::atan2(c(1), c(0)) * 180.0 / std::numbers::pi;
  return fit;
}

}  // namespace sea
