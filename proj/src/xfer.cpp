#include "sea/xfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sea/errors.hpp"

namespace sea {

namespace {

constexpr double kPoleTol = 1e-300;

double wrap_deg(double x) {
  x = std::fmod(x + 180.0, 360.0);
  if (x < 0.0) x += 360.0;
  return x - 180.0;
}

double arg_deg(Complex z) { return std::arg(z) * 180.0 / std::numbers::pi; }

// Removes the given roots (a conjugate-closed list) from p by deflation.
Polynomial deflate(const Polynomial& p, const std::vector<Complex>& rs) {
  if (rs.empty()) return p;
  const Polynomial factor = Polynomial::from_roots(rs);
  return divide(p, factor).first;
}

}  // namespace

TransferFunction::TransferFunction(Polynomial num, Polynomial den, std::string units)
    : num_(std::move(num)), den_(std::move(den)), units_(std::move(units)) {
  if (den_.is_zero()) throw ValidationError("transfer function denominator is zero");
  const double lead = den_.leading();
  if (lead != 1.0) {
    num_ *= 1.0 / lead;
    den_ *= 1.0 / lead;
  }
}

TransferFunction TransferFunction::gain(double k, std::string units) {
  return {Polynomial::constant(k), Polynomial::constant(1.0), std::move(units)};
}

TransferFunction TransferFunction::with_units(std::string units) const {
  TransferFunction out = *this;
  out.units_ = std::move(units);
  return out;
}

Complex TransferFunction::at(Complex s) const {
  const Complex d = den_(s);
  if (std::abs(d) <= kPoleTol * std::max(1.0, den_.max_abs_coeff())) {
    throw NumericalError("transfer function evaluated at a pole");
  }
  return num_(s) / d;
}

Complex TransferFunction::evaluate(double omega) const { return at(Complex(0.0, omega)); }

double TransferFunction::dc_gain() const { return at(Complex(0.0, 0.0)).real(); }

TransferFunction series(const TransferFunction& g, const TransferFunction& h) {
  return {g.num() * h.num(), g.den() * h.den()};
}

TransferFunction parallel(const TransferFunction& g, const TransferFunction& h) {
  return {g.num() * h.den() + h.num() * g.den(), g.den() * h.den()};
}

TransferFunction difference(const TransferFunction& g, const TransferFunction& h) {
  return parallel(g, scaled(h, -1.0));
}

TransferFunction scaled(const TransferFunction& g, double k) { return {g.num() * k, g.den(), g.units()}; }

TransferFunction feedback(const TransferFunction& g, const TransferFunction& h) {
  Polynomial den = g.den() * h.den() + g.num() * h.num();
  if (den.is_zero()) throw NumericalError("feedback: closed-loop denominator is identically zero");
  return {g.num() * h.den(), std::move(den)};
}

TransferFunction inverse(const TransferFunction& g) {
  if (g.num().is_zero()) throw NumericalError("inverse: transfer function is identically zero");
  return {g.den(), g.num()};
}

TransferFunction minimal_form(const TransferFunction& tf, double tol) {
  if (tf.num().is_zero()) return {Polynomial{}, Polynomial::constant(1.0), tf.units()};
  if (tf.num().degree() < 1 || tf.den().degree() < 1) return tf;
  const auto zs = roots(tf.num()).roots;
  const auto ps = roots(tf.den()).roots;

  std::vector<Complex> cancel_z;
  std::vector<Complex> cancel_p;
  std::vector<bool> used(ps.size(), false);
  for (const Complex& z : zs) {
    if (z.imag() < 0.0) continue;  // handled with its conjugate
    std::size_t best_j = ps.size();
    double best = 0.0;
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (used[j] || (ps[j].imag() < 0.0) != (z.imag() < 0.0)) continue;
      if (z.imag() == 0.0 && ps[j].imag() != 0.0) continue;
      if (z.imag() > 0.0 && ps[j].imag() == 0.0) continue;
      const double dist = std::abs(z - ps[j]);
      if (best_j == ps.size() || dist < best) {
        best = dist;
        best_j = j;
      }
    }
    if (best_j == ps.size() || best > tol * std::max(1.0, std::abs(ps[best_j]))) continue;
    used[best_j] = true;
    cancel_z.push_back(z);
    cancel_p.push_back(ps[best_j]);
    if (z.imag() > 0.0) {
      cancel_z.push_back(std::conj(z));
      cancel_p.push_back(std::conj(ps[best_j]));
      for (std::size_t j = 0; j < ps.size(); ++j) {
        if (!used[j] && ps[j] == std::conj(ps[best_j])) {
          used[j] = true;
          break;
        }
      }
    }
  }
  if (cancel_z.empty()) return tf;
  return {deflate(tf.num(), cancel_z), deflate(tf.den(), cancel_p), tf.units()};
}

bool is_proper(const TransferFunction& tf) { return tf.num().degree() <= tf.den().degree(); }

bool is_strictly_proper(const TransferFunction& tf) { return tf.num().degree() < tf.den().degree(); }

bool is_stable(const TransferFunction& tf) { return is_hurwitz(minimal_form(tf).den()); }

Complex StateSpace::transfer(Complex s, int input) const {
  const Eigen::Index n = A.rows();
  Complex out = D(input);
  if (n == 0) return out;
  Eigen::MatrixXcd m = -A.cast<Complex>();
  m.diagonal().array() += s;
  const Eigen::VectorXcd x = m.partialPivLu().solve(B.col(input).cast<Complex>());
  return out + (C.cast<Complex>() * x)(0);
}

StateSpace to_state_space(const TransferFunction& tf) {
  if (!is_proper(tf)) throw ValidationError("to_state_space: transfer function is improper");
  const int n = tf.den().degree();
  StateSpace ss;
  ss.A = Eigen::MatrixXd::Zero(n, n);
  ss.B = Eigen::MatrixXd::Zero(n, 1);
  ss.C = Eigen::RowVectorXd::Zero(n);
  ss.D = Eigen::RowVectorXd::Zero(1);
  const double d0 = tf.num().coefficient(n);
  ss.D(0) = d0;
  if (n == 0) return ss;
  for (int i = 0; i + 1 < n; ++i) ss.A(i, i + 1) = 1.0;
  // State x_i is the (i)-th derivative of the partial state; the last row
  // carries the monic denominator.
  for (int k = 0; k < n; ++k) {
    ss.A(n - 1, k) = -tf.den().coefficient(k);
    ss.C(k) = tf.num().coefficient(k) - d0 * tf.den().coefficient(k);
  }
  ss.B(n - 1, 0) = 1.0;
  return ss;
}

StateSpace realize_common_denominator(const Polynomial& den, std::span<const Polynomial> nums) {
  if (den.is_zero()) throw ValidationError("realize_common_denominator: zero denominator");
  const int n = den.degree();
  const double lead = den.leading();
  const int m = static_cast<int>(nums.size());
  StateSpace ss;
  ss.A = Eigen::MatrixXd::Zero(n, n);
  ss.B = Eigen::MatrixXd::Zero(n, m);
  ss.C = Eigen::RowVectorXd::Zero(n);
  ss.D = Eigen::RowVectorXd::Zero(m);
  for (int j = 0; j < m; ++j) {
    if (nums[static_cast<std::size_t>(j)].degree() > n) {
      throw ValidationError("realize_common_denominator: improper numerator");
    }
    ss.D(j) = nums[static_cast<std::size_t>(j)].coefficient(n) / lead;
  }
  if (n == 0) return ss;
  for (int i = 0; i < n; ++i) {
    ss.A(i, 0) = -den.coefficient(n - 1 - i) / lead;
    if (i + 1 < n) ss.A(i, i + 1) = 1.0;
    for (int j = 0; j < m; ++j) {
      const Polynomial& num = nums[static_cast<std::size_t>(j)];
      ss.B(i, j) = num.coefficient(n - 1 - i) / lead - ss.D(j) * den.coefficient(n - 1 - i) / lead;
    }
  }
  ss.C(0) = 1.0;
  return ss;
}

FrequencyResponse frequency_response(const TransferFunction& tf, std::span<const double> freqs_hz) {
  FrequencyResponse fr;
  fr.freqs_hz.assign(freqs_hz.begin(), freqs_hz.end());
  for (std::size_t i = 1; i < fr.freqs_hz.size(); ++i) {
    if (!(fr.freqs_hz[i] > fr.freqs_hz[i - 1])) {
      throw ValidationError("frequency_response: frequencies must be strictly ascending");
    }
  }
  if (!fr.freqs_hz.empty() && !(fr.freqs_hz.front() > 0.0)) {
    throw ValidationError("frequency_response: frequencies must be positive");
  }
  const auto value = [&](double f) { return tf.evaluate(2.0 * std::numbers::pi * f); };

  double unwrapped = 0.0;
  double prev_f = 0.0;
  double prev_raw = 0.0;
  for (std::size_t i = 0; i < fr.freqs_hz.size(); ++i) {
    const double f = fr.freqs_hz[i];
    const Complex h = value(f);
    const double raw = arg_deg(h);
    if (i == 0) {
      unwrapped = raw;
    } else {
      // Walk the interval in sub-steps small enough that no wrapped step is
      // ambiguous; halve until every step is below 45 degrees.
      int pieces = 1;
      for (int depth = 0; depth < 20; ++depth) {
        bool ok = true;
        double last = prev_raw;
        for (int k = 1; k <= pieces; ++k) {
          const double fk = prev_f * std::pow(f / prev_f, static_cast<double>(k) / pieces);
          const double cur = k == pieces ? raw : arg_deg(value(fk));
          if (std::abs(wrap_deg(cur - last)) > 45.0) {
            ok = false;
            break;
          }
          last = cur;
        }
        if (ok) break;
        pieces *= 2;
      }
      double last = prev_raw;
      for (int k = 1; k <= pieces; ++k) {
        const double fk = prev_f * std::pow(f / prev_f, static_cast<double>(k) / pieces);
        const double cur = k == pieces ? raw : arg_deg(value(fk));
        unwrapped += wrap_deg(cur - last);
        last = cur;
      }
    }
    fr.magnitude_db.push_back(20.0 * std::log10(std::abs(h)));
    fr.phase_deg.push_back(unwrapped);
    prev_f = f;
    prev_raw = raw;
  }
  return fr;
}

std::vector<double> logspace_hz(double f_lo, double f_hi, int points) {
  if (points < 1 || !(f_lo > 0.0) || !(f_hi >= f_lo)) throw ValidationError("logspace_hz: invalid grid");
  std::vector<double> out(static_cast<std::size_t>(points));
  if (points == 1) {
    out[0] = f_lo;
    return out;
  }
  const double ratio = std::log(f_hi / f_lo);
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = f_lo * std::exp(ratio * i / (points - 1));
  }
  out.back() = f_hi;
  return out;
}

}  // namespace sea
