#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sea/poly.hpp"

namespace sea {

// Continuous-time rational transfer function num(s)/den(s). The denominator
// is normalized to be monic; interconnections never cancel common factors
// (use minimal_form for that).
class TransferFunction {
 public:
  TransferFunction() : den_(Polynomial::constant(1.0)) {}
  TransferFunction(Polynomial num, Polynomial den, std::string units = {});

  static TransferFunction gain(double k, std::string units = {});

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  const std::string& units() const { return units_; }
  TransferFunction with_units(std::string units) const;

  // Order of the (uncancelled) denominator.
  int order() const { return den_.degree(); }

  Complex at(Complex s) const;
  // Value at s = j*omega (omega in rad/s). Throws at a pole.
  Complex evaluate(double omega) const;
  // Value at s = 0; throws at a pole at the origin.
  double dc_gain() const;

 private:
  Polynomial num_;
  Polynomial den_;
  std::string units_;
};

TransferFunction series(const TransferFunction& g, const TransferFunction& h);
TransferFunction parallel(const TransferFunction& g, const TransferFunction& h);
// g / (1 + g h).
TransferFunction feedback(const TransferFunction& g, const TransferFunction& h);
TransferFunction difference(const TransferFunction& g, const TransferFunction& h);
TransferFunction scaled(const TransferFunction& g, double k);
// 1 / g. Throws if g is identically zero.
TransferFunction inverse(const TransferFunction& g);

// Cancels pole/zero pairs with |z - p| <= tol * max(1, |p|). Conjugate pairs
// are cancelled together. Returns the input unchanged when nothing matches.
TransferFunction minimal_form(const TransferFunction& tf, double tol = 1e-7);

bool is_proper(const TransferFunction& tf);
bool is_strictly_proper(const TransferFunction& tf);
bool is_stable(const TransferFunction& tf);

// Single-output LTI realization x' = A x + B u, y = C x + D u with one or
// more inputs. SISO realizations have one input column.
struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::RowVectorXd C;
  Eigen::RowVectorXd D;

  int states() const { return static_cast<int>(A.rows()); }
  int inputs() const { return static_cast<int>(B.cols()); }
  // C (sI - A)^-1 B[:, input] + D[input].
  Complex transfer(Complex s, int input = 0) const;
};

// Controllable canonical realization. Throws for improper input.
StateSpace to_state_space(const TransferFunction& tf);

// Observable canonical realization of several numerators over one shared
// denominator; input j drives nums[j] / den. Used for two-input controllers
// [C1, -C2] that share p(s).
StateSpace realize_common_denominator(const Polynomial& den, std::span<const Polynomial> nums);

struct FrequencyResponse {
  std::vector<double> freqs_hz;
  std::vector<double> magnitude_db;
  std::vector<double> phase_deg;
};

// Magnitude in dB and continuously unwrapped phase in degrees. Intervals whose
// wrapped phase step exceeds 45 degrees are subdivided before unwrapping.
FrequencyResponse frequency_response(const TransferFunction& tf, std::span<const double> freqs_hz);

std::vector<double> logspace_hz(double f_lo, double f_hi, int points);

}  // namespace sea
