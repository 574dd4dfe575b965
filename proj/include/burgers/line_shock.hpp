#pragma once

// Viscous shocks on the infinite line in self-similar variables (xi, tau):
// w_tau = 2 w w_xi + w_xixi with w(xi, 0) = tanh(xi / a).

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "errors.hpp"
#include "field.hpp"
#include "quadrature.hpp"

namespace burgers {

struct LineShockParams {
  double a = 4.0;
  double quad_tol = 1e-10;
  void validate() const {
    if (!(a >= 4.0) || !std::isfinite(a)) throw ValidationError("LineShockParams: a must be >= 4");
    if (!(quad_tol >= 1e-13 && quad_tol <= 1e-6))
      throw ValidationError("LineShockParams: quad_tol must lie in [1e-13, 1e-6]");
  }
};

struct ShockValue {
  double w = 0.0;
  double w_xi = 0.0;
  double w_xixi = 0.0;
};

inline double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

inline double log_psi_closed_a4(double xi, double tau) {
  const double t1 = std::log(3.0);
  const double t2 = std::log(4.0) + log_cosh(0.5 * xi) + 0.25 * tau;
  const double t3 = log_cosh(xi) + tau;
  const double m = std::max({t1, t2, t3});
  return std::log(0.125) + m + std::log(std::exp(t1 - m) + std::exp(t2 - m) + std::exp(t3 - m));
}

/// (1/8)[3 + 4 cosh(xi/2) e^{tau/4} + cosh(xi) e^tau]
inline double psi_closed_a4(double xi, double tau) {
  if (!(tau >= 0.0)) throw ValidationError("psi_closed_a4: tau must be >= 0");
  if (std::abs(xi) <= 500.0 && tau <= 500.0)
    return 0.125 * (3.0 + 4.0 * std::cosh(0.5 * xi) * std::exp(0.25 * tau) +
                    std::cosh(xi) * std::exp(tau));
  return std::exp(log_psi_closed_a4(xi, tau));
}

/// w = tanh(xi) + D'/D with psi = cosh(xi) e^tau D / 8.
inline ShockValue shock_a4(double xi, double tau) {
  if (!(tau >= 0.0)) throw ValidationError("w_line_a4: tau must be >= 0");
  const double ax = std::abs(xi);
  const double e1 = std::exp(-ax);
  const double e2 = e1 * e1;
  const double q = std::exp(-0.5 * ax) * (1.0 + e1) / (1.0 + e2);  // cosh(xi/2)/cosh(xi)
  const double s = 2.0 * e1 / (1.0 + e2);                         // sech(xi)
  const double t = std::tanh(0.5 * xi);
  const double T = std::tanh(xi);
  const double S2 = s * s;
  const double lq1 = 0.5 * t - T;
  const double lq2 = 0.25 * (1.0 - t * t) - S2;
  const double lq3 = -0.25 * t * (1.0 - t * t) + 2.0 * T * S2;
  const double ls1 = -T;
  const double ls2 = -S2;
  const double ls3 = 2.0 * T * S2;
  const double q1 = q * lq1;
  const double q2 = q * (lq2 + lq1 * lq1);
  const double q3 = q * (lq3 + 3.0 * lq1 * lq2 + lq1 * lq1 * lq1);
  const double s1 = s * ls1;
  const double s2 = s * (ls2 + ls1 * ls1);
  const double s3 = s * (ls3 + 3.0 * ls1 * ls2 + ls1 * ls1 * ls1);
  const double A = 4.0 * std::exp(-0.75 * tau);
  const double B = 3.0 * std::exp(-tau);
  const double D = 1.0 + A * q + B * s;
  const double d1 = (A * q1 + B * s1) / D;
  const double d2 = (A * q2 + B * s2) / D;
  const double d3 = (A * q3 + B * s3) / D;
  ShockValue v;
  v.w = T + d1;
  v.w_xi = S2 + d2 - d1 * d1;
  v.w_xixi = -2.0 * S2 * T + d3 - 3.0 * d1 * d2 + 2.0 * d1 * d1 * d1;
  return v;
}

inline double w_line_a4(double xi, double tau) { return shock_a4(xi, tau).w; }

/// (1 + e^{-2|xi|/a})^a, evaluated in log-space.
inline double phi_a(double xi, double a) {
  if (!(a > 0.0)) throw ValidationError("phi_a: a must be positive");
  return std::exp(a * std::log1p(std::exp(-2.0 * std::abs(xi) / a)));
}

inline double phi_a_minus_one(double xi, double a) {
  return std::expm1(a * std::log1p(std::exp(-2.0 * std::abs(xi) / a)));
}

/// psi_+ or psi_- together with their first three xi-derivatives.
struct PsiJet {
  std::array<double, 4> plus{};
  std::array<double, 4> minus{};
};

namespace detail {

inline double hermite(int m, double z) {
  switch (m) {
    case 0: return 1.0;
    case 1: return 2.0 * z;
    case 2: return 4.0 * z * z - 2.0;
    default: return 8.0 * z * z * z - 12.0 * z;
  }
}

inline double z_max_for(const LineShockParams& p) {
  // e^{-z^2} 2^a <= quad_tol, with e^{-10} headroom for the Hermite weights.
  return std::sqrt(std::max(0.0, p.a * std::log(2.0) - std::log(p.quad_tol) + 10.0));
}

// Moments  int_lo^hi H_m(z) e^{-z^2} (phi_a(center + 2 sqrt(tau) z) - 1) dz, m = 0..3.
inline std::array<double, 4> hermite_moments(double center, double tau, double lo, double hi,
                                             const LineShockParams& p) {
  std::array<double, 4> zero{};
  if (!(hi > lo)) return zero;
  const double st = std::sqrt(tau);
  auto f = [&](double z) {
    const double g = std::exp(-z * z) * phi_a_minus_one(center + 2.0 * st * z, p.a);
    return std::array<double, 4>{g, 2.0 * z * g, (4.0 * z * z - 2.0) * g,
                                 (8.0 * z * z * z - 12.0 * z) * g};
  };
  std::array<double, 4> scale{1.0, 2.0 * st, 4.0 * tau, 8.0 * tau * st};
  for (auto& s : scale) s = std::max(s, 1e-300);
  QuadOptions opt;
  opt.abs_tol = 0.1 * p.quad_tol;
  opt.rel_tol = 1e-14;
  opt.max_evals = 100000;
  return integrate_breakpoints<std::array<double, 4>>(f, std::vector<double>{lo, hi}, opt,
                                                      &scale)
      .value;
}

}  // namespace detail

/// psi_+(xi,tau) = int_{-z_+}^inf e^{-z^2} phi_a(xi + 2tau + 2sqrt(tau) z) dz - sqrt(pi)
/// psi_-(xi,tau) = int_{-inf}^{z_-} e^{-z^2} phi_a(xi - 2tau + 2sqrt(tau) z) dz - sqrt(pi)
inline PsiJet psi_pm_jet(double xi, double tau, const LineShockParams& p) {
  p.validate();
  if (!(tau > 0.0)) throw ValidationError("psi_pm_general: tau must be > 0");
  const double st = std::sqrt(tau);
  const double zp = (2.0 * tau + xi) / (2.0 * st);
  const double zm = (2.0 * tau - xi) / (2.0 * st);
  const double zmax = detail::z_max_for(p);
  const auto mp = detail::hermite_moments(xi + 2.0 * tau, tau,
                                          std::max(-zp, -zmax), zmax, p);
  const auto mm = detail::hermite_moments(xi - 2.0 * tau, tau, -zmax,
                                          std::min(zm, zmax), p);
  const double sp = std::sqrt(kPi);
  PsiJet j;
  // The "-1" part integrates in closed form to -(sqrt(pi)/2) erfc(z_pm).
  j.plus[0] = mp[0] - 0.5 * sp * std::erfc(zp);
  j.minus[0] = mm[0] - 0.5 * sp * std::erfc(zm);
  const double gp = std::exp(-zp * zp);
  const double gm = std::exp(-zm * zm);
  double h = 1.0;
  for (int m = 1; m <= 3; ++m) {
    h /= 2.0 * st;
    const double sign = (m % 2 == 1) ? 1.0 : -1.0;
    j.plus[m] = h * (mp[m] + sign * detail::hermite(m - 1, zp) * gp);
    j.minus[m] = h * (mm[m] - detail::hermite(m - 1, zm) * gm);
  }
  return j;
}

inline std::pair<double, double> psi_pm_general(double xi, double tau,
                                                const LineShockParams& p) {
  auto j = psi_pm_jet(xi, tau, p);
  return {j.plus[0], j.minus[0]};
}

inline ShockValue shock_general(double xi, double tau, const LineShockParams& p) {
  p.validate();
  if (!(tau >= 0.0)) throw ValidationError("w_line_general: tau must be >= 0");
  if (xi < 0.0) {
    auto v = shock_general(-xi, tau, p);
    return {-v.w, v.w_xi, -v.w_xixi};
  }
  if (tau == 0.0) {
    const double T = std::tanh(xi / p.a);
    const double S2 = 1.0 - T * T;
    return {T, S2 / p.a, -2.0 * S2 * T / (p.a * p.a)};
  }
  const auto j = psi_pm_jet(xi, tau, p);
  const double T = std::tanh(xi);
  const double e = std::exp(-2.0 * xi);
  const double S2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
  const double P = 1.0 / (1.0 + e);
  const double M = e / (1.0 + e);
  const double P1 = 0.5 * S2;
  const double P2 = -S2 * T;
  const double P3 = 2.0 * S2 * T * T - S2 * S2;
  std::array<double, 4> d{};
  for (int m = 0; m < 4; ++m) d[m] = j.plus[m] - j.minus[m];
  const double isp = 1.0 / std::sqrt(kPi);
  const double Psi = isp * (P * j.plus[0] + M * j.minus[0]);
  const double Psi1 = isp * (P * j.plus[1] + M * j.minus[1] + P1 * d[0]);
  const double Psi2 = isp * (P * j.plus[2] + M * j.minus[2] + 2.0 * P1 * d[1] + P2 * d[0]);
  const double Psi3 = isp * (P * j.plus[3] + M * j.minus[3] + 3.0 * P1 * d[2] +
                             3.0 * P2 * d[1] + P3 * d[0]);
  const double den = 1.0 + Psi;
  if (!(den > 0.0)) throw NumericError("w_line_general: 1 + Psi is not positive");
  const double r1 = Psi1 / den, r2 = Psi2 / den, r3 = Psi3 / den;
  ShockValue v;
  v.w = T + r1;
  v.w_xi = S2 + r2 - r1 * r1;
  v.w_xixi = -2.0 * S2 * T + r3 - 3.0 * r1 * r2 + 2.0 * r1 * r1 * r1;
  if (xi == 0.0) {
    v.w = 0.0;
    v.w_xixi = 0.0;
  }
  return v;
}

inline double w_line_general(double xi, double tau, const LineShockParams& p) {
  return shock_general(xi, tau, p).w;
}

enum class ShockKind { steady, closed_a4, quadrature_general };

class LineShockSolution {
 public:
  static LineShockSolution steady() { return LineShockSolution(ShockKind::steady, {1e30, 1e-10}); }
  static LineShockSolution closed_a4() { return LineShockSolution(ShockKind::closed_a4, {4.0, 1e-13}); }
  static LineShockSolution general(LineShockParams p) {
    p.validate();
    return LineShockSolution(ShockKind::quadrature_general, p);
  }

  ShockKind kind() const { return kind_; }
  const LineShockParams& params() const { return params_; }

  ShockValue evaluate(double xi, double tau) const {
    switch (kind_) {
      case ShockKind::steady: {
        const double T = std::tanh(xi);
        const double S2 = 1.0 - T * T;
        return {T, S2, -2.0 * S2 * T};
      }
      case ShockKind::closed_a4:
        return shock_a4(xi, tau);
      default:
        return shock_general(xi, tau, params_);
    }
  }
  double w(double xi, double tau) const { return evaluate(xi, tau).w; }
  double operator()(double xi, double tau) const { return w(xi, tau); }

  /// Width of the initial profile, controls the decay envelope of w_xi.
  double initial_width() const {
    switch (kind_) {
      case ShockKind::steady: return 1.0;
      case ShockKind::closed_a4: return 4.0;
      default: return params_.a;
    }
  }

 private:
  LineShockSolution(ShockKind k, LineShockParams p) : kind_(k), params_(p) {}
  ShockKind kind_;
  LineShockParams params_;
};

struct HalfLineDiagnostics {
  double E = 0.0;
  double R = 0.0;
  double xi_max = 0.0;
};

/// E = int_0^inf w_xi^2, R = 2 int_0^inf (w_xi^3 - w_xixi^2).
inline HalfLineDiagnostics halfline_diagnostics(const LineShockSolution& sol, double tau) {
  if (!(tau >= 0.0)) throw ValidationError("halfline_diagnostics: tau must be >= 0");
  const double a = sol.initial_width();
  // The envelope 4 e^{-2 xi / a} of |w_xi| falls below 1e-14 here.
  const double xi_max = 0.5 * a * std::log(4.0 / 1e-14);
  std::vector<double> pts{0.0};
  for (double x = 0.5; x < xi_max; x *= 2.0) pts.push_back(x);
  pts.push_back(xi_max);
  auto f = [&](double xi) {
    const auto v = sol.evaluate(xi, tau);
    return std::array<double, 2>{v.w_xi * v.w_xi, v.w_xi * v.w_xi * v.w_xi - v.w_xixi * v.w_xixi};
  };
  QuadOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  opt.max_evals = 200000;
  if (sol.kind() == ShockKind::quadrature_general) {
    opt.abs_tol = std::max(1e-13, sol.params().quad_tol);
    opt.rel_tol = 1e-10;
  }
  const auto r = integrate_breakpoints<std::array<double, 2>>(f, pts, opt);
  return {r.value[0], 2.0 * r.value[1], xi_max};
}

struct LineMaximizer {
  double k = 0.0;
  double E = 0.0;
  double R = 0.0;
  double profile(double x) const { return -4.0 * k * std::tanh(k * x); }
};

/// Odd maximizer of R at fixed E on the line: u = -4k tanh(kx), E = 32k^3/3.
inline LineMaximizer line_maximizer(double E) {
  if (!(E > 0.0) || !std::isfinite(E)) throw ValidationError("line_maximizer: E must be > 0");
  LineMaximizer m;
  m.k = std::cbrt(3.0 * E / 32.0);
  m.E = E;
  m.R = 256.0 * std::pow(m.k, 5) / 5.0;
  return m;
}

enum class TStarVariant { a4, general };

inline double t_star_formula(double k, double a, double delta, TStarVariant v) {
  if (!(k > 1.0)) throw ValidationError("t_star_formula: k must exceed 1");
  if (!(delta >= 0.0)) throw ValidationError("t_star_formula: delta must be >= 0");
  if (v == TStarVariant::a4) return (1.0 + delta) * std::log(k) / (12.0 * k * k);
  if (!(a >= 4.0)) throw ValidationError("t_star_formula: a must be >= 4");
  return (1.0 + delta) * (1.0 + delta) * a * std::log(a) / (32.0 * k * k);
}

}  // namespace burgers
