#pragma once

#include "sea/plant.hpp"
#include "sea/poly.hpp"
#include "sea/xfer.hpp"

namespace sea {

// rho weighs control effort against tracking error, lambda weighs disturbance
// against reference, k weighs noise against reference.
struct SynthesisWeights {
  double rho = 0.0005;
  double lambda = 1.0;
  double k = 1.0;

  void validate() const;
  friend bool operator==(const SynthesisWeights&, const SynthesisWeights&) = default;
};

// P = N/M and C0 = Y/X with M X + N Y = 1, all four stable. c = a p + b q is
// split as c = f h with deg f = deg a.
struct CoprimeFactorization {
  TransferFunction M;
  TransferFunction N;
  TransferFunction X;
  TransferFunction Y;
  Polynomial c;
  Polynomial f;
  Polynomial h;
};

// Roots of c are assigned to f by descending |Re|, ties by descending |Im|,
// keeping conjugate pairs together. lead(f) = lead(c) and h is monic.
// When only complex pairs remain for an odd last slot, f gets one real root
// at the modulus of the first skipped pair and h is left empty. X and Y are
// stored as p f / c and q f / c.
// Throws ValidationError when C0 does not stabilize P or a coprimeness check
// fails.
CoprimeFactorization coprime_factorize(const TransferFunction& P, const TransferFunction& C0);

struct ControllerPair {
  TransferFunction C1;
  TransferFunction C2;
};

// C1 = Q1 / (X - N Q2), C2 = (Y + M Q2) / (X - N Q2), reduced by
// minimal_form. Q1 and Q2 must be stable.
ControllerPair youla_2dof(const CoprimeFactorization& fact, const TransferFunction& Q1,
                          const TransferFunction& Q2);

struct DiophantineSolution {
  Polynomial p;
  Polynomial q;
  double condition = 0.0;    // 2-norm condition of the column-equilibrated Sylvester matrix
  double residual = 0.0;     // max|a p + b q - c| / max|c|
  bool ill_conditioned = false;  // condition above kIllConditioned
  static constexpr double kIllConditioned = 1e12;
};

// Solves a p + b q = c with deg p = deg a = n, deg q <= n - 1 and
// deg c = 2n. Throws NumericalError if the Sylvester system is singular
// (a, b not coprime) or p(0) vanishes (type-0 requirement).
DiophantineSolution solve_diophantine(const Polynomial& a, const Polynomial& b, const Polynomial& c);

struct TwoDofController {
  TransferFunction C1;  // feedforward, (d_rho(0)/b(0)) d_lambda_k / p
  TransferFunction C2;  // feedback, q / p
  Polynomial d_rho;
  Polynomial d_lambda_k;
  Polynomial p;
  Polynomial q;
  Polynomial c1_num;    // numerator of C1 over the same p
  SynthesisWeights weights;
  double diophantine_condition = 0.0;
  bool ill_conditioned = false;

  // a p + b q for the plant the controller was designed on.
  Polynomial characteristic() const { return d_rho * d_lambda_k; }
};

// H2-optimal 2-DOF design for P = b/a. The polynomials are used as given, so
// passing the unnormalized physical a, b keeps p, q on the same scale.
TwoDofController h2_synthesize(const Polynomial& a, const Polynomial& b, const SynthesisWeights& w);
TwoDofController h2_synthesize(const TransferFunction& P, const SynthesisWeights& w);
TwoDofController h2_synthesize(const SeaModel& model, const SynthesisWeights& w);

// C_L = G / (1 + P C2) in minimal form.
TransferFunction build_compensator(const SeaModel& model, const TwoDofController& ctrl);

struct TorqueLoopMaps {
  TransferFunction G1;     // tau_L per tau_d
  TransferFunction H_phi;  // tau_L per phi_L
};

// G1 = P C1 / (1 + P C2); H_phi = G2 without the compensator and
// (1 - G1) G2 with it. All reduced by minimal_form.
TorqueLoopMaps torque_loop_maps(const SeaModel& model, const TwoDofController& ctrl, bool with_compensator);

struct SignalMaps {
  TransferFunction u;
  TransferFunction v;
  TransferFunction y;
  TransferFunction z;
};

// The twelve closed-loop maps of the 2-DOF loop from r, d and n to the
// internal signals u, v, y, z, uncancelled. The d and n maps depend on C2
// only.
struct ClosedLoopMaps {
  SignalMaps from_r;
  SignalMaps from_d;
  SignalMaps from_n;
};

ClosedLoopMaps closed_loop_maps(const TransferFunction& P, const TransferFunction& C1,
                                const TransferFunction& C2);
ClosedLoopMaps closed_loop_maps(const TransferFunction& P, const TwoDofController& ctrl);

bool all_stable(const ClosedLoopMaps& maps);

}  // namespace sea
