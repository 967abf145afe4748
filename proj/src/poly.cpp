#include "sea/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "sea/errors.hpp"

namespace sea {

namespace {

// Parlett-Reinsch diagonal similarity balancing, in place.
void balance(Eigen::MatrixXd& a) {
  constexpr double kRadix = 2.0;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / kRadix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= kRadix;
        c *= kRadix * kRadix;
      }
      g = r * kRadix;
      while (c > g) {
        f /= kRadix;
        c /= kRadix * kRadix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

double relative_residual(const Polynomial& p, Complex r) {
  const double mag = std::abs(r);
  double scale = 0.0;
  for (double c : p.coeffs()) scale = scale * mag + std::abs(c);
  if (scale == 0.0) return 0.0;
  return std::abs(p(r)) / scale;
}

Complex newton_polish(const Polynomial& p, const Polynomial& dp, Complex r, int iterations) {
  double best = std::abs(p(r));
  for (int it = 0; it < iterations && best > 0.0; ++it) {
    const Complex slope = dp(r);
    if (std::abs(slope) == 0.0) break;
    const Complex next = r - p(r) / slope;
    const double val = std::abs(p(next));
    if (!(val < best)) break;
    r = next;
    best = val;
  }
  return r;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { normalize(); }

Polynomial Polynomial::constant(double c) { return Polynomial(std::vector<double>{c}); }

Polynomial Polynomial::from_roots(std::span<const Complex> roots, double lead) {
  std::vector<Complex> acc{Complex(1.0, 0.0)};
  for (const Complex& r : roots) {
    std::vector<Complex> next(acc.size() + 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i] += acc[i];
      next[i + 1] -= acc[i] * r;
    }
    acc = std::move(next);
  }
  std::vector<double> out(acc.size());
  std::transform(acc.begin(), acc.end(), out.begin(),
                 [lead](const Complex& c) { return lead * c.real(); });
  return Polynomial(std::move(out));
}

void Polynomial::normalize() {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw NumericalError("polynomial coefficient is not finite");
  }
  auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](double c) { return c != 0.0; });
  coeffs_.erase(coeffs_.begin(), first);
}

double Polynomial::coefficient(int power) const {
  const int idx = degree() - power;
  if (power < 0 || idx < 0) return 0.0;
  return coeffs_[static_cast<std::size_t>(idx)];
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (double c : coeffs_) acc = acc * s + c;
  return acc;
}

Complex Polynomial::operator()(Complex s) const {
  Complex acc(0.0, 0.0);
  for (double c : coeffs_) acc = acc * s + c;
  return acc;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (double& c : out.coeffs_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  const std::size_t n = std::max(coeffs_.size(), rhs.coeffs_.size());
  std::vector<double> out(n, 0.0);
  std::vector<double> scale(n, 0.0);
  const std::size_t off_l = n - coeffs_.size();
  const std::size_t off_r = n - rhs.coeffs_.size();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    out[off_l + i] = coeffs_[i];
    scale[off_l + i] = std::abs(coeffs_[i]);
  }
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) {
    out[off_r + i] += rhs.coeffs_[i];
    scale[off_r + i] += std::abs(rhs.coeffs_[i]);
  }
  // Leading terms that cancelled down to rounding level are dropped.
  std::size_t lead = 0;
  while (lead < n && std::abs(out[lead]) <= kNormalizationTol * scale[lead]) ++lead;
  out.erase(out.begin(), out.begin() + static_cast<long>(lead));
  coeffs_ = std::move(out);
  normalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) { return *this += -rhs; }

Polynomial& Polynomial::operator*=(const Polynomial& rhs) {
  if (is_zero() || rhs.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<double> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  }
  coeffs_ = std::move(out);
  normalize();
  return *this;
}

Polynomial& Polynomial::operator*=(double k) {
  for (double& c : coeffs_) c *= k;
  normalize();
  return *this;
}

Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }

Polynomial multiply(const Polynomial& p, const Polynomial& q) { return p * q; }

Polynomial negate_argument(const Polynomial& p) {
  std::vector<double> c = p.coeffs();
  const int n = p.degree();
  for (int i = 0; i <= n; ++i) {
    if ((n - i) % 2 != 0) c[static_cast<std::size_t>(i)] = -c[static_cast<std::size_t>(i)];
  }
  return Polynomial(std::move(c));
}

Polynomial derivative(const Polynomial& p) {
  const int n = p.degree();
  if (n <= 0) return {};
  std::vector<double> c(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = p.coeffs()[static_cast<std::size_t>(i)] * (n - i);
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> divide(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw ValidationError("polynomial division by zero");
  if (num.degree() < den.degree()) return {Polynomial{}, num};
  std::vector<double> rem = num.coeffs();
  const auto& d = den.coeffs();
  const std::size_t qlen = rem.size() - d.size() + 1;
  std::vector<double> quot(qlen, 0.0);
  for (std::size_t i = 0; i < qlen; ++i) {
    const double f = rem[i] / d[0];
    quot[i] = f;
    for (std::size_t j = 0; j < d.size(); ++j) rem[i + j] -= f * d[j];
    rem[i] = 0.0;
  }
  std::vector<double> r(rem.begin() + static_cast<long>(qlen), rem.end());
  // The remainder inherits normalization relative to itself; scale against the
  // dividend so cancellation noise is dropped too.
  const double cut = Polynomial::kNormalizationTol * num.max_abs_coeff();
  auto first = std::find_if(r.begin(), r.end(), [cut](double c) { return std::abs(c) > cut; });
  r.erase(r.begin(), first);
  return {Polynomial(std::move(quot)), Polynomial(std::move(r))};
}

RootSet roots(const Polynomial& p, const RootOptions& opts) {
  if (p.degree() < 1) throw ValidationError("roots: polynomial degree must be at least 1");

  RootSet out;
  std::vector<double> c = p.coeffs();
  while (!c.empty() && c.back() == 0.0) {
    out.roots.emplace_back(0.0, 0.0);
    c.pop_back();
  }
  const Polynomial reduced(c);
  const int n = reduced.degree();
  const Polynomial dp = derivative(p);

  if (n == 1) {
    out.roots.emplace_back(-c[1] / c[0], 0.0);
  } else if (n > 1) {
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) comp(0, j) = -c[static_cast<std::size_t>(j + 1)] / c[0];
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    balance(comp);
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success) throw NumericalError("roots: companion eigenvalue solve failed");
    const Eigen::VectorXcd ev = es.eigenvalues();
    int upper = 0;
    int lower = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (ev[i].imag() > 0.0) ++upper;
      if (ev[i].imag() < 0.0) ++lower;
    }
    if (upper != lower) throw NumericalError("roots: eigenvalues are not conjugate-closed");
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const Complex r0 = ev[i];
      if (r0.imag() < 0.0) continue;
      if (r0.imag() == 0.0) {
        const Complex r = newton_polish(p, dp, r0, opts.polish_iterations);
        out.roots.emplace_back(r.real(), 0.0);
      } else {
        Complex r = newton_polish(p, dp, r0, opts.polish_iterations);
        if (r.imag() <= 0.0) r = r0;
        out.roots.push_back(r);
        out.roots.push_back(std::conj(r));
      }
    }
  }

  std::sort(out.roots.begin(), out.roots.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  for (const Complex& r : out.roots) out.residual = std::max(out.residual, relative_residual(p, r));
  if (!(out.residual <= opts.residual_tol)) {
    throw NumericalError("roots: residual " + std::to_string(out.residual) + " exceeds tolerance");
  }
  return out;
}

bool is_hurwitz(const Polynomial& p, double margin) {
  if (p.is_zero()) throw ValidationError("is_hurwitz: zero polynomial");
  if (p.degree() == 0) return true;
  const RootSet rs = roots(p);
  double scale = 1.0;
  for (const Complex& r : rs.roots) scale = std::max(scale, std::abs(r));
  return std::all_of(rs.roots.begin(), rs.roots.end(),
                     [&](const Complex& r) { return r.real() < -margin * scale; });
}

Polynomial spectral_target(const Polynomial& a, const Polynomial& b, double w_a, double w_b) {
  return (w_a * w_a) * (negate_argument(a) * a) + (w_b * w_b) * (negate_argument(b) * b);
}

Polynomial spectral_factor(const Polynomial& a, const Polynomial& b, double w_a, double w_b,
                           const SpectralOptions& opts) {
  if (!(w_a > 0.0) || !(w_b > 0.0)) throw ValidationError("spectral_factor: weights must be positive");
  const Polynomial e = spectral_target(a, b, w_a, w_b);
  if (e.is_zero()) throw ValidationError("spectral_factor: a and b are both zero");
  if (e.degree() % 2 != 0) throw NumericalError("spectral_factor: target polynomial is not even");
  const double e0 = e.coefficient(0);
  if (!(e0 > 0.0)) throw NumericalError("spectral_factor: target has a root at the origin");
  if (e.degree() == 0) return Polynomial::constant(std::sqrt(e0));

  std::vector<Complex> pool = roots(e).roots;
  for (const Complex& r : pool) {
    if (std::abs(r.real()) <= opts.axis_tol * std::max(1.0, std::abs(r))) {
      throw NumericalError("spectral_factor: target has an imaginary-axis root");
    }
  }

  std::vector<Complex> stable;
  std::vector<bool> used(pool.size(), false);
  for (std::size_t pairs = 0; pairs < pool.size() / 2; ++pairs) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        if (used[j]) continue;
        const double dist = std::abs(pool[i] + pool[j]);
        if (dist < best) {
          best = dist;
          bi = i;
          bj = j;
        }
      }
    }
    if (best > opts.pair_tol * std::max(1.0, std::abs(pool[bi]))) {
      throw NumericalError("spectral_factor: roots do not form mirror pairs");
    }
    used[bi] = used[bj] = true;
    stable.push_back(pool[bi].real() < 0.0 ? pool[bi] : pool[bj]);
  }

  // Keep the stable set conjugate-closed by snapping near-conjugates together.
  std::vector<Complex> clean;
  std::vector<bool> taken(stable.size(), false);
  for (std::size_t i = 0; i < stable.size(); ++i) {
    if (taken[i]) continue;
    taken[i] = true;
    if (stable[i].imag() == 0.0) {
      clean.push_back(stable[i]);
      continue;
    }
    std::size_t partner = stable.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1; j < stable.size(); ++j) {
      if (taken[j]) continue;
      const double dist = std::abs(stable[j] - std::conj(stable[i]));
      if (dist < best) {
        best = dist;
        partner = j;
      }
    }
    if (partner == stable.size()) throw NumericalError("spectral_factor: unpaired complex root");
    taken[partner] = true;
    const Complex avg = 0.5 * (stable[i] + std::conj(stable[partner]));
    clean.push_back(avg);
    clean.push_back(std::conj(avg));
  }

  Polynomial d = Polynomial::from_roots(clean);
  const double d0 = d.coefficient(0);
  return d * std::sqrt(e0 / (d0 * d0));
}

int gcd_degree(const Polynomial& p, const Polynomial& q, double tol) {
  if (p.is_zero() || q.is_zero()) throw ValidationError("gcd_degree: zero polynomial");
  if (p.degree() < 1 || q.degree() < 1) return 0;
  const auto rp = roots(p).roots;
  const auto rq = roots(q).roots;
  std::vector<bool> used(rq.size(), false);
  int matched = 0;
  for (const Complex& r : rp) {
    std::size_t best_j = rq.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < rq.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(r - rq[j]);
      if (dist < best) {
        best = dist;
        best_j = j;
      }
    }
    if (best_j < rq.size() && best <= tol * std::max(1.0, std::abs(r))) {
      used[best_j] = true;
      ++matched;
    }
  }
  return matched;
}

}  // namespace sea
