#pragma once

// Maximizer of R(u) at fixed enstrophy on the circle, built from the cnoidal
// periodic orbits of y'' = 4y - 6y^2 with (y')^2 = 4y^2 - 4y^3 + c.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "quadrature.hpp"

namespace burgers {

inline constexpr double kCenterLevel = -16.0 / 27.0;

struct CubicRoots {
  double y3;     // negative root
  double y_min;  // in (0, 2/3)
  double y_max;  // in (2/3, 1)
};

namespace detail {

// Bisection on r = log(x) so that tiny roots keep full relative accuracy.
template <class F>
double log_bisect(F f, double lo, double hi) {
  double rlo = std::log(lo), rhi = std::log(hi);
  const double flo = f(lo);
  for (int i = 0; i < 300; ++i) {
    const double rm = 0.5 * (rlo + rhi);
    if (!(rm > rlo && rm < rhi)) break;
    const double fm = f(std::exp(rm));
    if (fm == 0.0) return std::exp(rm);
    if ((fm > 0) == (flo > 0)) rlo = rm; else rhi = rm;
  }
  return std::exp(0.5 * (rlo + rhi));
}

}  // namespace detail

/// Real roots of y^3 - y^2 - c/4 = 0 for c in (-16/27, 0).
inline CubicRoots cubic_roots(double c) {
  if (!(c > kCenterLevel && c < 0.0))
    throw ValidationError("cnoidal: level c must lie in (-16/27, 0), got " + std::to_string(c));
  const double q = -0.25 * c;  // y^2 (1 - y) = q
  const double ymin = detail::log_bisect(
      [q](double y) { return y * y * (1.0 - y) - q; }, std::sqrt(q) * 0.25, 2.0 / 3.0);
  // y_max = 1 - d with (1 - d)^2 d = q, d in (0, 1/3).
  const double d = detail::log_bisect(
      [q](double d) { return (1.0 - d) * (1.0 - d) * d - q; }, q * 0.25, 1.0 / 3.0);
  const double ymax = 1.0 - d;
  return {-q / (ymin * ymax), ymin, ymax};
}

namespace detail {

// 2 int_0^{pi/2} y^p / sqrt(y - y3) dtheta with y = ymin + (ymax - ymin) sin^2,
// for p = 0, 1, 3.
inline std::array<double, 3> cnoidal_moments(const CubicRoots& r) {
  const double base = r.y_min - r.y3;
  const double span = r.y_max - r.y_min;
  std::vector<double> pts{0.0};
  if (span > 0.0) {
    const double tc = std::sqrt(base / span);
    for (double t = tc; t < 0.5 * kPi; t *= 4.0) pts.push_back(t);
  }
  pts.push_back(0.5 * kPi);
  auto f = [&](double th) {
    const double s = std::sin(th);
    const double y = r.y_min + span * s * s;
    const double g = 1.0 / std::sqrt(base + span * s * s);
    return std::array<double, 3>{g, y * g, y * y * y * g};
  };
  QuadOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-15;
  opt.max_evals = 100000;
  auto res = integrate_breakpoints<std::array<double, 3>>(f, pts, opt);
  return {2.0 * res.value[0], 2.0 * res.value[1], 2.0 * res.value[2]};
}

}  // namespace detail

inline double cnoidal_period(double c) {
  return detail::cnoidal_moments(cubic_roots(c))[0];
}

struct CnoidalOrbit {
  double k = 0.0;
  double c = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  double y3 = 0.0;
  double m1 = 0.0;
  double m3 = 0.0;
  double period = 0.0;
};

inline CnoidalOrbit find_cnoidal(double k) {
  if (!(k > kPi + 1e-6) || !std::isfinite(k))
    throw PreconditionError("find_cnoidal: no cnoidal orbit of period k <= pi (k = " +
                            std::to_string(k) + ")");
  // s = log(-c); period(s) increases from pi (s = log 16/27) to infinity (s -> -inf).
  double s_hi = std::log(-kCenterLevel);
  double s_lo = -2.0 * k - 10.0;
  while (cnoidal_period(-std::exp(s_lo)) < k) {
    s_lo -= 20.0;
    if (s_lo < -1400.0) throw BracketError("find_cnoidal: period bracket failed");
  }
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (s_lo + s_hi);
    if (!(mid > s_lo && mid < s_hi)) break;
    if (cnoidal_period(-std::exp(mid)) > k) s_lo = mid; else s_hi = mid;
  }
  const double s = 0.5 * (s_lo + s_hi);
  CnoidalOrbit o;
  o.k = k;
  o.c = -std::exp(s);
  const auto r = cubic_roots(o.c);
  const auto m = detail::cnoidal_moments(r);
  o.y_min = r.y_min;
  o.y_max = r.y_max;
  o.y3 = r.y3;
  o.period = m[0];
  o.m1 = m[1];
  o.m3 = m[2];
  if (std::abs(o.period - k) > 1e-10 * k)
    throw NumericError("find_cnoidal: period mismatch " + std::to_string(o.period - k));
  return o;
}

/// y, y' and z = int y on [0, k/2], tabulated by RK4 from the trough back to the crest.
class CnoidalTable {
 public:
  CnoidalTable(const CnoidalOrbit& o, int cells, int substeps) : k_(o.k), cells_(cells) {
    const int steps = cells * substeps;
    const double h = 0.5 * o.k / steps;
    y_.resize(cells + 1);
    yp_.resize(cells + 1);
    z_.resize(cells + 1);
    std::array<double, 3> s{o.y_min, 0.0, 0.5 * o.m1};
    auto rhs = [](const std::array<double, 3>& v) {
      return std::array<double, 3>{v[1], 4.0 * v[0] - 6.0 * v[0] * v[0], v[0]};
    };
    auto store = [&](int cell) {
      y_[cell] = s[0];
      yp_[cell] = s[1];
      z_[cell] = s[2];
    };
    store(cells);
    const double dt = -h;
    for (int i = 1; i <= steps; ++i) {
      const auto k1 = rhs(s);
      std::array<double, 3> t;
      for (int j = 0; j < 3; ++j) t[j] = s[j] + 0.5 * dt * k1[j];
      const auto k2 = rhs(t);
      for (int j = 0; j < 3; ++j) t[j] = s[j] + 0.5 * dt * k2[j];
      const auto k3 = rhs(t);
      for (int j = 0; j < 3; ++j) t[j] = s[j] + dt * k3[j];
      const auto k4 = rhs(t);
      for (int j = 0; j < 3; ++j) s[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      if (i % substeps == 0) store(cells - i / substeps);
    }
  }

  int cells() const { return cells_; }
  double spacing() const { return 0.5 * k_ / cells_; }
  double y_node(int i) const { return y_[i]; }
  double yp_node(int i) const { return yp_[i]; }
  double z_node(int i) const { return z_[i]; }
  double crest_slope() const { return yp_[0]; }
  double crest_z() const { return z_[0]; }

  /// (y, z) at any xi, using evenness of y, oddness of z and Hermite interpolation.
  std::pair<double, double> operator()(double xi) const {
    const double period = k_;
    xi -= period * std::round(xi / period);
    const double sgn = xi < 0.0 ? -1.0 : 1.0;
    const double a = std::abs(xi);
    const double hsp = spacing();
    int i = std::min(cells_ - 1, static_cast<int>(a / hsp));
    const double t = (a - i * hsp) / hsp;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    const double y = h00 * y_[i] + h10 * hsp * yp_[i] + h01 * y_[i + 1] + h11 * hsp * yp_[i + 1];
    const double z = h00 * z_[i] + h10 * hsp * y_[i] + h01 * z_[i + 1] + h11 * hsp * y_[i + 1];
    return {y, sgn * z};
  }

 private:
  double k_;
  int cells_;
  std::vector<double> y_, yp_, z_;
};

struct MaximizerSolution {
  double target_E = 0.0;
  double k = 0.0;
  double lambda = 0.0;
  double a_plus = 0.0;
  double a_minus = 0.0;
  double K = 0.0;
  double E = 0.0;
  double R = 0.0;
  int bracket_sign_changes = 0;
  CnoidalOrbit orbit;

  /// Samples of u and v = u_x on the grid.
  std::pair<PeriodicField, PeriodicField> sample(const PeriodicGrid& g) const {
    const int n = g.size();
    const double cell = k / n;
    const int sub = std::max(1, static_cast<int>(std::ceil(cell / 2.5e-4)));
    CnoidalTable tab(orbit, n / 2, sub);
    std::vector<double> u(n), v(n);
    for (int j = 0; j < n; ++j) {
      const int i = std::abs(j - n / 2);  // |x_j| = i / n
      const double x = g.point(j);
      const double sgn = j < n / 2 ? -1.0 : 1.0;
      const double y = tab.y_node(i);
      const double z = sgn * tab.z_node(i);
      u[j] = a_plus * x - 4.0 * k * z;
      v[j] = a_plus - 4.0 * k * k * y;
    }
    return {PeriodicField(g, std::move(u)), PeriodicField(g, std::move(v))};
  }

  PeriodicField u_field(const PeriodicGrid& g) const { return sample(g).first; }
  PeriodicField v_field(const PeriodicGrid& g) const { return sample(g).second; }
};

namespace detail {

struct KAssembly {
  CnoidalOrbit orbit;
  double a_plus, lambda, E;
};

inline KAssembly assemble_for_k(double k) {
  KAssembly s;
  s.orbit = find_cnoidal(k);
  s.a_plus = 4.0 * k * s.orbit.m1;
  s.lambda = 4.0 * k * k - 3.0 * s.a_plus;
  s.E = s.a_plus * (8.0 * k * k - 3.0 * s.a_plus) / 6.0;
  return s;
}

inline int diagnostic_grid_size(double k) {
  int n = 256;
  while (n < 64.0 * k) n *= 2;
  return n;
}

}  // namespace detail

inline MaximizerSolution maximizer_for_k(double k) {
  const auto s = detail::assemble_for_k(k);
  MaximizerSolution sol;
  sol.k = k;
  sol.orbit = s.orbit;
  sol.a_plus = s.a_plus;
  sol.lambda = s.lambda;
  sol.a_minus = s.a_plus - 8.0 * k * k / 3.0;
  sol.E = s.E;
  sol.target_E = s.E;
  const double ap = s.a_plus;
  sol.R = 2.0 * s.lambda * s.E + ap * ap * (4.0 * k * k - ap) - 32.0 * std::pow(k, 5) * s.orbit.m3;
  sol.K = energy(sol.u_field(PeriodicGrid(detail::diagnostic_grid_size(k))));
  return sol;
}

inline MaximizerSolution solve_maximizer(double target_E) {
  if (!(target_E > 0.0) || !std::isfinite(target_E))
    throw ValidationError("solve_maximizer: target_E must be positive");
  const double k_lo = kPi + 2e-6;
  auto E_of = [](double k) { return detail::assemble_for_k(k).E; };
  if (E_of(k_lo) >= target_E)
    throw BracketError("solve_maximizer: target_E too small for the k > pi regime");
  double k_hi = std::max(k_lo + 1.0, std::cbrt(3.0 * target_E / 32.0) + 2.0);
  while (E_of(k_hi) < target_E) {
    k_hi *= 2.0;
    if (k_hi > 700.0) throw BracketError("solve_maximizer: k bracket failed");
  }
  int changes = 0;
  {
    const int samples = 24;
    double prev = E_of(k_lo) - target_E;
    for (int i = 1; i <= samples; ++i) {
      const double kk = k_lo + (k_hi - k_lo) * i / samples;
      const double cur = E_of(kk) - target_E;
      if ((cur > 0) != (prev > 0)) ++changes;
      prev = cur;
    }
  }
  const double k = bisect([&](double kk) { return E_of(kk) - target_E; }, k_lo, k_hi,
                          4e-16 * k_hi, 200);
  MaximizerSolution sol = maximizer_for_k(k);
  sol.target_E = target_E;
  sol.bracket_sign_changes = changes;
  if (std::abs(sol.E - target_E) > 1e-8 * target_E)
    throw NumericError("solve_maximizer: enstrophy mismatch after bisection");
  return sol;
}

/// 4k(2x - tanh(kx)) on the grid.
inline PeriodicField asymptotic_profile(double k, const PeriodicGrid& g) {
  if (!(k > kPi)) throw PreconditionError("asymptotic_profile: k must exceed pi");
  return PeriodicField::sample(g, [k](double x) { return 4.0 * k * (2.0 * x - std::tanh(k * x)); });
}

struct ExpansionReport {
  double k = 0.0;
  double K_residual = 0.0;  // (K - 8k^2/3) / k
  double E_residual = 0.0;  // (E - 32k^3/3) / k^2
  double R_residual = 0.0;  // (R - 256k^5/5) / k^4
  double z_sup_error = 0.0; // sup |z - tanh| on [-k/2, k/2]
};

inline ExpansionReport check_expansions(const MaximizerSolution& s) {
  ExpansionReport r;
  const double k = s.k;
  r.k = k;
  r.K_residual = (s.K - 8.0 * k * k / 3.0) / k;
  r.E_residual = (s.E - 32.0 * k * k * k / 3.0) / (k * k);
  r.R_residual = (s.R - 256.0 * std::pow(k, 5) / 5.0) / std::pow(k, 4);
  const int cells = 4096;
  const int sub = std::max(1, static_cast<int>(std::ceil(0.5 * k / cells / 2.5e-4)));
  CnoidalTable tab(s.orbit, cells, sub);
  double m = 0.0;
  for (int i = 0; i <= cells; ++i)
    m = std::max(m, std::abs(tab.z_node(i) - std::tanh(i * tab.spacing())));
  r.z_sup_error = m;
  return r;
}

}  // namespace burgers
