#include "sea/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "sea/errors.hpp"

namespace sea {

namespace {

double max_abs_diff(const Polynomial& x, const Polynomial& y) {
  const int n = std::max(x.degree(), y.degree());
  double m = 0.0;
  for (int k = 0; k <= n; ++k) m = std::max(m, std::abs(x.coefficient(k) - y.coefficient(k)));
  return m;
}

void require_stabilizing(const Polynomial& a, const Polynomial& b, const TwoDofController& ctrl) {
  const Polynomial chi = a * ctrl.p + b * ctrl.q;
  if (!is_hurwitz(chi)) throw NumericalError("closed loop is not stable");
}

}  // namespace

void SynthesisWeights::validate() const {
  if (!(std::isfinite(rho) && rho > 0.0)) throw ValidationError("weight rho must be positive");
  if (!(std::isfinite(lambda) && lambda > 0.0)) throw ValidationError("weight lambda must be positive");
  if (!(std::isfinite(k) && k > 0.0)) throw ValidationError("weight k must be positive");
}

CoprimeFactorization coprime_factorize(const TransferFunction& P, const TransferFunction& C0) {
  const Polynomial& a = P.den();
  const Polynomial& b = P.num();
  const Polynomial& p = C0.den();
  const Polynomial& q = C0.num();
  if (b.is_zero()) throw ValidationError("coprime_factorize: plant is identically zero");
  if (gcd_degree(a, b) != 0) throw ValidationError("coprime_factorize: plant numerator and denominator share a root");
  if (!q.is_zero() && gcd_degree(p, q) != 0) {
    throw ValidationError("coprime_factorize: controller numerator and denominator share a root");
  }
  const Polynomial c = a * p + b * q;
  const int n = a.degree();
  if (c.is_zero() || c.degree() < n) throw ValidationError("coprime_factorize: degenerate characteristic polynomial");
  if (!is_hurwitz(c)) throw ValidationError("coprime_factorize: seed controller does not stabilize the plant");

  std::vector<Complex> rs = c.degree() > 0 ? roots(c).roots : std::vector<Complex>{};
  std::stable_sort(rs.begin(), rs.end(), [](const Complex& x, const Complex& y) {
    const double rx = std::abs(x.real());
    const double ry = std::abs(y.real());
    if (rx != ry) return rx > ry;
    if (std::abs(x.imag()) != std::abs(y.imag())) return std::abs(x.imag()) > std::abs(y.imag());
    return x.imag() > y.imag();
  });

  std::vector<Complex> f_roots;
  std::vector<bool> taken(rs.size(), false);
  double skipped_pair_mag = 0.0;
  for (std::size_t i = 0; i < rs.size() && static_cast<int>(f_roots.size()) < n; ++i) {
    if (taken[i]) continue;
    if (rs[i].imag() == 0.0) {
      f_roots.push_back(rs[i]);
      taken[i] = true;
      continue;
    }
    if (static_cast<int>(f_roots.size()) + 2 > n) {
      if (skipped_pair_mag == 0.0) skipped_pair_mag = std::abs(rs[i]);
      continue;
    }
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (!taken[j] && rs[j] == std::conj(rs[i])) {
        taken[i] = taken[j] = true;
        f_roots.push_back(rs[i]);
        f_roots.push_back(rs[j]);
        break;
      }
    }
  }

  CoprimeFactorization out;
  out.c = c;
  if (static_cast<int>(f_roots.size()) == n) {
    out.f = Polynomial::from_roots(f_roots, c.leading());
    out.h = divide(c, out.f).first;
  } else {
    // Only complex pairs are left for an odd last slot. f takes one real
    // root at the modulus of the first pair passed over and no longer
    // divides c.
    if (static_cast<int>(f_roots.size()) != n - 1 || skipped_pair_mag == 0.0) {
      throw NumericalError("coprime_factorize: cannot split c(s) into real factors of the required degrees");
    }
    f_roots.emplace_back(-skipped_pair_mag, 0.0);
    out.f = Polynomial::from_roots(f_roots, c.leading());
  }
  // p f / c equals p / h, but keeps M X + N Y = 1 exact even when roots of
  // c are clustered and f h only approximates c.
  out.X = TransferFunction(p * out.f, c);
  out.Y = TransferFunction(q * out.f, c);
  out.M = TransferFunction(a, out.f);
  out.N = TransferFunction(b, out.f);
  return out;
}

ControllerPair youla_2dof(const CoprimeFactorization& fact, const TransferFunction& Q1,
                          const TransferFunction& Q2) {
  if (!is_stable(Q1) || !is_stable(Q2)) throw ValidationError("youla_2dof: Q1 and Q2 must be stable");
  const TransferFunction den = minimal_form(difference(fact.X, series(fact.N, Q2)));
  if (den.num().is_zero()) throw NumericalError("youla_2dof: X - N Q2 is identically zero");
  const TransferFunction inv = inverse(den);
  ControllerPair out;
  out.C1 = minimal_form(series(Q1, inv));
  out.C2 = minimal_form(series(parallel(fact.Y, series(fact.M, Q2)), inv));
  return out;
}

DiophantineSolution solve_diophantine(const Polynomial& a, const Polynomial& b, const Polynomial& c) {
  const int n = a.degree();
  if (n < 1) throw ValidationError("solve_diophantine: deg a must be at least 1");
  if (b.is_zero()) throw NumericalError("solve_diophantine: b is zero, system is singular");
  if (b.degree() > n - 1) throw ValidationError("solve_diophantine: plant must be strictly proper");
  if (c.degree() != 2 * n) throw ValidationError("solve_diophantine: deg c must equal 2 deg a");

  const int size = 2 * n + 1;
  // Unknown ordering: p_n..p_0, then q_{n-1}..q_0. Row k is the s^k equation.
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(size, size);
  Eigen::VectorXd rhs(size);
  for (int k = 0; k < size; ++k) {
    rhs(k) = c.coefficient(k);
    for (int j = 0; j <= n; ++j) S(k, n - j) = a.coefficient(k - j);
    for (int j = 0; j < n; ++j) S(k, n + 1 + (n - 1 - j)) = b.coefficient(k - j);
  }
  Eigen::VectorXd colscale(size);
  for (int j = 0; j < size; ++j) {
    const double nrm = S.col(j).norm();
    colscale(j) = nrm > 0.0 ? 1.0 / nrm : 1.0;
  }
  const Eigen::MatrixXd Ss = S * colscale.asDiagonal();

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ss);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(size - 1);
  if (!(smin > smax * 1e-15 * size)) {
    throw NumericalError("solve_diophantine: Sylvester system is singular (a and b not coprime)");
  }

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Ss);
  Eigen::VectorXd y = qr.solve(rhs);
  for (int it = 0; it < 2; ++it) y += qr.solve(rhs - Ss * y);
  const Eigen::VectorXd x = colscale.asDiagonal() * y;

  std::vector<double> pc(static_cast<std::size_t>(n + 1));
  std::vector<double> qc(static_cast<std::size_t>(n));
  for (int i = 0; i <= n; ++i) pc[static_cast<std::size_t>(i)] = x(i);
  for (int i = 0; i < n; ++i) qc[static_cast<std::size_t>(i)] = x(n + 1 + i);

  DiophantineSolution sol;
  sol.p = Polynomial(pc);
  sol.q = Polynomial(qc);
  sol.condition = smax / smin;
  sol.ill_conditioned = sol.condition > DiophantineSolution::kIllConditioned;
  sol.residual = max_abs_diff(a * sol.p + b * sol.q, c) / c.max_abs_coeff();
  if (std::abs(sol.p.coefficient(0)) <= 1e-10 * sol.p.max_abs_coeff()) {
    throw NumericalError("solve_diophantine: p(0) = 0, controller is not type 0");
  }
  return sol;
}

TwoDofController h2_synthesize(const Polynomial& a, const Polynomial& b, const SynthesisWeights& w) {
  w.validate();
  if (a.degree() < 1) throw ValidationError("h2_synthesize: plant denominator must have degree >= 1");
  if (b.is_zero()) throw ValidationError("h2_synthesize: plant numerator is zero");
  if (b.degree() >= a.degree()) throw ValidationError("h2_synthesize: plant must be strictly proper");
  if (gcd_degree(a, b) != 0) throw NumericalError("h2_synthesize: a(s) and b(s) are not coprime");
  const double b0 = b.coefficient(0);
  if (b0 == 0.0) throw NumericalError("h2_synthesize: b(0) = 0, feedforward gain undefined");

  TwoDofController out;
  out.weights = w;
  out.d_rho = spectral_factor(a, b, w.rho, 1.0);
  out.d_lambda_k = spectral_factor(a, b, w.k, w.lambda);
  const DiophantineSolution sol = solve_diophantine(a, b, out.d_rho * out.d_lambda_k);
  out.p = sol.p;
  out.q = sol.q;
  out.diophantine_condition = sol.condition;
  out.ill_conditioned = sol.ill_conditioned;
  out.c1_num = out.d_lambda_k * (out.d_rho.coefficient(0) / b0);
  out.C1 = TransferFunction(out.c1_num, out.p);
  out.C2 = TransferFunction(out.q, out.p);
  return out;
}

TwoDofController h2_synthesize(const TransferFunction& P, const SynthesisWeights& w) {
  return h2_synthesize(P.den(), P.num(), w);
}

TwoDofController h2_synthesize(const SeaModel& model, const SynthesisWeights& w) {
  return h2_synthesize(model.a, model.b, w);
}

TransferFunction build_compensator(const SeaModel& model, const TwoDofController& ctrl) {
  require_stabilizing(model.a, model.b, ctrl);
  // G2 = G a p / (a p + b q). When the denominator of G divides a, cancel it
  // by division so the zero at the origin stays exact.
  TransferFunction cl = TransferFunction::gain(0.0);
  const auto [quot, rem] = divide(model.a, model.G.den());
  if (rem.is_zero() || rem.max_abs_coeff() <= 1e-9 * model.a.max_abs_coeff()) {
    std::vector<double> qc = quot.coeffs();
    const double cut = 1e-12 * quot.max_abs_coeff();
    for (double& c : qc) {
      if (std::abs(c) <= cut) c = 0.0;
    }
    cl = TransferFunction(model.G.num() * Polynomial(qc) * ctrl.p, model.a * ctrl.p + model.b * ctrl.q);
  } else {
    const TransferFunction sens = feedback(TransferFunction::gain(1.0), series(model.P, ctrl.C2));
    cl = minimal_form(series(model.G, sens));
  }
  if (!is_stable(cl)) throw NumericalError("build_compensator: compensator is unstable");
  return cl.with_units("Nm per rad");
}

TorqueLoopMaps torque_loop_maps(const SeaModel& model, const TwoDofController& ctrl, bool with_compensator) {
  require_stabilizing(model.a, model.b, ctrl);
  TorqueLoopMaps out;
  out.G1 = minimal_form(series(feedback(model.P, ctrl.C2), ctrl.C1)).with_units("Nm per Nm");
  const TransferFunction g2 = build_compensator(model, ctrl);
  if (with_compensator) {
    out.H_phi = minimal_form(series(difference(TransferFunction::gain(1.0), out.G1), g2));
  } else {
    out.H_phi = g2;
  }
  out.H_phi = out.H_phi.with_units("Nm per rad");
  return out;
}

ClosedLoopMaps closed_loop_maps(const TransferFunction& P, const TransferFunction& C1,
                                const TransferFunction& C2) {
  const TransferFunction loop = series(P, C2);
  const TransferFunction sens = feedback(TransferFunction::gain(1.0), loop);
  const TransferFunction comp_sens = series(loop, sens);
  ClosedLoopMaps m;
  m.from_r.u = series(C1, sens);
  m.from_r.v = m.from_r.u;
  m.from_r.y = series(series(P, C1), sens);
  m.from_r.z = m.from_r.y;
  m.from_d.u = scaled(comp_sens, -1.0);
  m.from_d.v = sens;
  m.from_d.y = series(P, sens);
  m.from_d.z = m.from_d.y;
  m.from_n.u = scaled(series(C2, sens), -1.0);
  m.from_n.v = m.from_n.u;
  m.from_n.y = sens;
  m.from_n.z = scaled(comp_sens, -1.0);
  return m;
}

ClosedLoopMaps closed_loop_maps(const TransferFunction& P, const TwoDofController& ctrl) {
  return closed_loop_maps(P, ctrl.C1, ctrl.C2);
}

bool all_stable(const ClosedLoopMaps& maps) {
  for (const SignalMaps* s : {&maps.from_r, &maps.from_d, &maps.from_n}) {
    for (const TransferFunction* tf : {&s->u, &s->v, &s->y, &s->z}) {
      if (!is_stable(*tf)) return false;
    }
  }
  return true;
}

}  // namespace sea
