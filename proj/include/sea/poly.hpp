#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace sea {

using Complex = std::complex<double>;

// Real polynomial in the Laplace variable s. Coefficients are stored highest
// degree first. Leading zeros are stripped on construction, and a sum drops
// leading terms that cancel to within kNormalizationTol of the operands, so
// the leading coefficient is nonzero unless the polynomial is identically
// zero (empty coefficient list, degree -1).
class Polynomial {
 public:
  static constexpr double kNormalizationTol = 1e-12;

  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs);

  static Polynomial constant(double c);
  // lead * prod(s - r). Complex roots must come in conjugate pairs; the
  // imaginary residue of the expansion is discarded.
  static Polynomial from_roots(std::span<const Complex> roots, double lead = 1.0);

  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.front(); }
  // Coefficient of s^power; zero outside the stored range.
  double coefficient(int power) const;
  double max_abs_coeff() const;

  double operator()(double s) const;
  Complex operator()(Complex s) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(const Polynomial& rhs);
  Polynomial& operator*=(double k);

  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
  friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
  friend Polynomial operator*(Polynomial lhs, const Polynomial& rhs) { return lhs *= rhs; }
  friend Polynomial operator*(Polynomial lhs, double k) { return lhs *= k; }
  friend Polynomial operator*(double k, Polynomial rhs) { return rhs *= k; }

  // Exact coefficient equality.
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void normalize();
  std::vector<double> coeffs_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial multiply(const Polynomial& p, const Polynomial& q);

// p(-s): the coefficient of s^k is multiplied by (-1)^k.
Polynomial negate_argument(const Polynomial& p);

Polynomial derivative(const Polynomial& p);

// Long division, returns (quotient, remainder). Throws on a zero divisor.
std::pair<Polynomial, Polynomial> divide(const Polynomial& num, const Polynomial& den);

// Roots with multiplicity and the achieved relative residual
// max |p(r)| / sum_k |c_k| |r|^k.
struct RootSet {
  std::vector<Complex> roots;
  double residual = 0.0;
};

struct RootOptions {
  double residual_tol = 1e-8;
  int polish_iterations = 8;
};

// Eigenvalues of the balanced companion matrix, Newton-polished against the
// original coefficients, then conjugate-paired. Roots at the origin are
// factored out exactly. Throws ValidationError for degree < 1 and
// NumericalError if the residual exceeds the tolerance.
RootSet roots(const Polynomial& p, const RootOptions& opts = {});

// True iff every root has Re < -margin * max(1, max|root|). Degree-zero
// nonzero polynomials have no roots and are Hurwitz. Throws on zero input.
bool is_hurwitz(const Polynomial& p, double margin = 1e-9);

struct SpectralOptions {
  // |Re r| <= axis_tol * max(1, |r|) counts as an imaginary-axis root.
  double axis_tol = 1e-9;
  // Pairing |r1 + r2| <= pair_tol * max(1, |r1|) is required for a mirror pair.
  double pair_tol = 1e-5;
};

// Stable d with d(-s) d(s) = w_a^2 a(-s) a(s) + w_b^2 b(-s) b(s) and
// positive leading coefficient.
Polynomial spectral_factor(const Polynomial& a, const Polynomial& b, double w_a, double w_b,
                           const SpectralOptions& opts = {});

// The even polynomial w_a^2 a(-s) a(s) + w_b^2 b(-s) b(s).
Polynomial spectral_target(const Polynomial& a, const Polynomial& b, double w_a, double w_b);

// Degree of the numerical GCD, found by greedy root matching with
// |r1 - r2| <= tol * max(1, |r1|). Zero means coprime.
int gcd_degree(const Polynomial& p, const Polynomial& q, double tol = 1e-6);

}  // namespace sea
