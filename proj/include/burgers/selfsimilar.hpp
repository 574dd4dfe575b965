#pragma once

// Change of variables between the circle problem and the rescaled line problem:
// u(x, t) = p(t) (2x - w(p(t) x, tau(t))).

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <vector>
#include <functional>
#include <limits>
#include <string>

#include "errors.hpp"
#include "field.hpp"
#include "line_shock.hpp"
#include "quadrature.hpp"

namespace burgers {

struct RescaleMap {
  double k;

  explicit RescaleMap(double k_) : k(k_) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("RescaleMap: k must be positive");
  }
  double p(double t) const { return 4.0 * k / (1.0 + 16.0 * k * t); }
  double tau(double t) const { return 16.0 * k * k * t / (1.0 + 16.0 * k * t); }
  double xi(double x, double t) const { return 4.0 * k * x / (1.0 + 16.0 * k * t); }
  double t_of_tau(double tau) const {
    if (!(tau >= 0.0 && tau < k))
      throw ValidationError("RescaleMap: tau must lie in [0, k)");
    return tau / (16.0 * k * (k - tau));
  }
};

struct ForwardImage {
  double xi, tau, p;
};
struct InverseImage {
  double x, t;
};

inline ForwardImage map_forward(double k, double x, double t) {
  if (!(t >= 0.0)) throw ValidationError("map_forward: t must be >= 0");
  RescaleMap m(k);
  return {m.xi(x, t), m.tau(t), m.p(t)};
}

inline InverseImage map_inverse(double k, double xi, double tau) {
  RescaleMap m(k);
  const double t = m.t_of_tau(tau);
  return {xi * (1.0 + 16.0 * k * t) / (4.0 * k), t};
}

/// w(xi, tau) with an optional limit on the xi-range it can be evaluated on.
struct WEvaluator {
  std::function<double(double, double)> w;
  double half_width = std::numeric_limits<double>::infinity();
};

inline PeriodicField assemble_u(const WEvaluator& w, double k, double t, const PeriodicGrid& g) {
  if (!(t >= 0.0)) throw ValidationError("assemble_u: t must be >= 0");
  RescaleMap m(k);
  const double p = m.p(t);
  const double tau = m.tau(t);
  if (0.5 * p > w.half_width * (1.0 + 1e-12))
    throw PreconditionError("assemble_u: |xi| reaches " + std::to_string(0.5 * p) +
                            " beyond the evaluator's domain " + std::to_string(w.half_width));
  return PeriodicField::sample(g, [&](double x) { return p * (2.0 * x - w.w(p * x, tau)); });
}

inline PeriodicField assemble_u(std::function<double(double, double)> w, double k, double t,
                                const PeriodicGrid& g) {
  return assemble_u(WEvaluator{std::move(w)}, k, t, g);
}

struct InertialDiagnostics {
  double K, E, R;
  bool asymptotic_regime;
};

/// Leading-order K, E, R of the steady shock on the decaying rarefaction.
inline InertialDiagnostics inertial_diagnostics(double p) {
  if (!(p > 0.0)) throw ValidationError("inertial_diagnostics: p must be positive");
  const bool ok = p >= 10.0;
  if (!ok) warn("inertial_diagnostics: p < 10 is outside the asymptotic regime");
  return {p * p / 6.0, 2.0 * p * p * p / 3.0, -8.0 * p * p * p * p, ok};
}

/// K, E, R of u = p (2x - tanh(px)) integrated exactly over [-1/2, 1/2].
inline InertialDiagnostics steady_shock_diagnostics(double p) {
  auto f = [p](double x) {
    const double T = std::tanh(p * x);
    const double S2 = 1.0 - T * T;
    const double u = p * (2.0 * x - T);
    const double ux = p * (2.0 - p * S2);
    const double uxx = 2.0 * p * p * p * S2 * T;
    return std::array<double, 3>{0.5 * u * u, 0.5 * ux * ux, -(uxx * uxx + ux * ux * ux)};
  };
  QuadOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-13;
  std::vector<double> pts{-0.5, -0.25, 0.0, 0.25, 0.5};
  const auto r = integrate_breakpoints<std::array<double, 3>>(f, pts, opt).value;
  return {r[0], r[1], r[2], p >= 10.0};
}

/// w and w_xi at fixed tau.
using ShockSlice = std::function<ShockValue(double)>;

struct ResidualNorm {
  double l2 = 0.0;
  double h1 = 0.0;
};

/// ||w - w_app|| and ||d_xi (w - w_app)|| over |xi| <= 2(k - tau).
inline ResidualNorm residual_norm(const ShockSlice& w_num, const ShockSlice& w_app, double k,
                                  double tau) {
  if (!(tau >= 0.0 && tau < k)) throw ValidationError("residual_norm: tau must lie in [0, k)");
  const double L = 2.0 * (k - tau);
  auto f = [&](double xi) {
    const auto a = w_num(xi);
    const auto b = w_app(xi);
    const double d0 = a.w - b.w, d1 = a.w_xi - b.w_xi;
    return std::array<double, 2>{d0 * d0, d1 * d1};
  };
  std::vector<double> pts;
  const int pieces = std::max(8, static_cast<int>(std::ceil(2.0 * L)));
  for (int i = 0; i <= pieces; ++i) pts.push_back(-L + 2.0 * L * i / pieces);
  QuadOptions opt;
  opt.abs_tol = 1e-20 * L;
  opt.rel_tol = 1e-6;
  opt.max_evals = 400000;
  const auto r = integrate_breakpoints<std::array<double, 2>>(f, pts, opt).value;
  return {std::sqrt(r[0]), std::sqrt(r[1])};
}

/// Pull a periodic solution back to w(xi) = 2 xi / p - u(xi / p) / p at the time t.
inline ShockSlice pullback(const PeriodicField& u, double k, double t) {
  RescaleMap m(k);
  const double p = m.p(t);
  auto interp = std::make_shared<TrigInterpolant>(u);
  return [interp, p](double xi) {
    const auto [val, der] = (*interp)(xi / p);
    ShockValue v;
    v.w = 2.0 * xi / p - val / p;
    v.w_xi = 2.0 / p - der / (p * p);
    return v;
  };
}

inline ShockSlice slice(const LineShockSolution& s, double tau) {
  return [s, tau](double xi) { return s.evaluate(xi, tau); };
}

/// chi(tau) = 1 - w_app(2(k - tau), tau)
inline double chi_boundary(const std::function<double(double, double)>& w_app, double k,
                           double tau) {
  if (!(tau < k)) throw ValidationError("chi_boundary: tau must be < k");
  return 1.0 - w_app(2.0 * (k - tau), tau);
}

/// Upper bound C0* = 1 - (1 + delta)^2 a log(a) / (4k) on the time fraction C0.
inline double c0_star(double k, double a, double delta) {
  return 1.0 - (1.0 + delta) * (1.0 + delta) * a * std::log(a) / (4.0 * k);
}

}  // namespace burgers
