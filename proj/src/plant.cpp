#include "sea/plant.hpp"

#include <cmath>
#include <string>

#include "sea/errors.hpp"

namespace sea {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(std::string("invalid SEA parameter: ") + what);
}

}  // namespace

void SeaParams::validate() const {
  require(std::isfinite(J_A) && J_A > 0.0, "J_A must be positive");
  require(std::isfinite(b_f) && b_f >= 0.0, "b_f must be non-negative");
  require(std::isfinite(K_s) && K_s > 0.0, "K_s must be positive");
  require(std::isfinite(r_winch) && r_winch > 0.0, "r_winch must be positive");
  require(std::isfinite(K_g) && K_g >= 1.0, "K_g must be at least 1");
  require(std::isfinite(K_pv) && K_pv > 0.0, "K_pv must be positive");
  require(std::isfinite(K_iv) && K_iv > 0.0, "K_iv must be positive");
}

SeaParams default_params() {
  SeaParams p;
  p.J_A = 6.90e-4;
  p.b_f = 0.0059;
  p.K_s = 2.0 * 0.0242;
  p.r_winch = 7.25e-3;
  p.K_g = 14.0;
  p.K_pv = 0.0457;
  p.K_iv = 1.3455;
  return p;
}

SeaModel build_plant(const SeaParams& params) {
  params.validate();
  const double J = params.J_A;
  const double Ks = params.K_s;
  const double damping = params.b_f + params.K_pv;
  const double spring = params.K_s + params.K_iv;

  SeaModel m;
  m.params = params;
  m.a = Polynomial{J, damping, spring, 0.0};
  m.b = Polynomial{Ks * params.K_pv, Ks * params.K_iv};
  m.P = TransferFunction(m.b, m.a, "Nm per rad/s");
  const Polynomial g_num{-J * Ks, -(Ks * params.b_f + Ks * params.K_pv), -Ks * params.K_iv};
  const Polynomial g_den{J, damping, spring};
  m.G = TransferFunction(g_num, g_den, "Nm per rad");
  return m;
}

StateSpace physical_realization(const SeaParams& params) {
  params.validate();
  const double J = params.J_A;
  StateSpace ss;
  // x = [phi_A, phi_A', eta], eta' = omega_d - phi_A'
  // J phi_A'' = K_pv (omega_d - phi_A') + K_iv eta - K_s (phi_A - phi_L) - b_f phi_A'
  ss.A = Eigen::MatrixXd::Zero(3, 3);
  ss.A(0, 1) = 1.0;
  ss.A(1, 0) = -params.K_s / J;
  ss.A(1, 1) = -(params.K_pv + params.b_f) / J;
  ss.A(1, 2) = params.K_iv / J;
  ss.A(2, 1) = -1.0;
  ss.B = Eigen::MatrixXd::Zero(3, 2);
  ss.B(1, 0) = params.K_pv / J;
  ss.B(2, 0) = 1.0;
  ss.B(1, 1) = params.K_s / J;
  ss.C = Eigen::RowVectorXd::Zero(3);
  ss.C(0) = params.K_s;
  ss.D = Eigen::RowVectorXd::Zero(2);
  ss.D(1) = -params.K_s;
  return ss;
}

double reflect_linear_stiffness(double k_lin, double r_winch) {
  if (!(k_lin > 0.0) || !(r_winch > 0.0)) {
    throw ValidationError("reflect_linear_stiffness: inputs must be positive");
  }
  return k_lin * r_winch * r_winch;
}

TransferFunction rigid_sea_tf(const SeaParams& params) {
  if (!(params.J_A > 0.0) || !(params.b_f >= 0.0) || !(params.K_s >= 0.0)) {
    throw ValidationError("rigid_sea_tf: invalid parameters");
  }
  return {Polynomial{params.K_s}, Polynomial{params.J_A, params.b_f, params.K_s}, "Nm per Nm"};
}

}  // namespace sea
