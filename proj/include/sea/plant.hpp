#pragma once

#include "sea/poly.hpp"
#include "sea/xfer.hpp"

namespace sea {

// Physical constants of the velocity-sourced cable-driven SEA, all reflected
// to rotation about the cable winch.
struct SeaParams {
  double J_A = 0.0;      // reflected inertia [kg m^2]
  double b_f = 0.0;      // viscous friction [Nm/(rad/s)]
  double K_s = 0.0;      // double-spring stiffness [Nm/rad]
  double r_winch = 0.0;  // winch radius [m]
  double K_g = 1.0;      // gear ratio; metadata only, already folded into J_A and b_f
  double K_pv = 0.0;     // velocity-loop proportional gain [Nm/(rad/s)]
  double K_iv = 0.0;     // velocity-loop integral gain [Nm/rad]

  // Throws ValidationError naming the first violated bound.
  void validate() const;

  friend bool operator==(const SeaParams&, const SeaParams&) = default;
};

// Table values of the prototype.
SeaParams default_params();

struct SeaModel {
  SeaParams params;
  // Unnormalized polynomials of P = b/a as derived from the physics:
  //   a = J_A s^3 + (b_f + K_pv) s^2 + (K_s + K_iv) s
  //   b = K_s K_pv s + K_s K_iv
  Polynomial a;
  Polynomial b;
  TransferFunction P;  // tau_L per omega_d
  TransferFunction G;  // tau_L per phi_L
};

SeaModel build_plant(const SeaParams& params);

// Physical realization of the plant with inputs [omega_d, phi_L] and output
// tau_L. States are motor angle phi_A, motor rate, and the integral of the
// velocity error inside the PI loop. Input-output equivalent to [P, G].
StateSpace physical_realization(const SeaParams& params);

// k_lin * r^2.
double reflect_linear_stiffness(double k_lin, double r_winch);

// K_s / (J_A s^2 + b_f s + K_s): torque-sourced model, tau_L per tau_A.
TransferFunction rigid_sea_tf(const SeaParams& params);

}  // namespace sea
