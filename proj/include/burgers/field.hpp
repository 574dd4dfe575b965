#pragma once

// Periodic grids on [-1/2, 1/2), sampled fields and the diagnostics K, E, R.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"

namespace burgers {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Poincare constant 1/(4 pi^2).
inline constexpr double kPoincareConstant = 1.0 / (4.0 * kPi * kPi);
/// Constant in R <= (3/2) E^{5/3}.
inline constexpr double kRateBoundConstant = 1.5;
/// Asymptotic R / E^{5/3} of the maximizer, 3^{5/3} / (5 * 2^{1/3}).
inline const double kSharpRateConstant =
    std::pow(3.0, 5.0 / 3.0) / (5.0 * std::cbrt(2.0));
/// Asymptotic K / E^{2/3} of the maximizer, 6^{-1/3}.
inline const double kSharpEnergyConstant = std::pow(6.0, -1.0 / 3.0);

inline constexpr double kResolutionWarnTail = 1e-8;
inline constexpr double kResolutionFailTail = 1e-4;

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

class PeriodicGrid {
 public:
  explicit PeriodicGrid(int n) : n_(n) {
    if (n < 16 || !is_power_of_two(n))
      throw ValidationError("PeriodicGrid: n must be a power of two >= 16, got " +
                            std::to_string(n));
  }
  int size() const { return n_; }
  double spacing() const { return 1.0 / n_; }
  double point(int j) const { return -0.5 + static_cast<double>(j) / n_; }
  std::vector<double> points() const {
    std::vector<double> x(n_);
    for (int j = 0; j < n_; ++j) x[j] = point(j);
    return x;
  }
  /// Index of -x_j on the grid.
  int mirror(int j) const { return (n_ - j) % n_; }
  bool operator==(const PeriodicGrid& o) const { return n_ == o.n_; }

 private:
  int n_;
};

class PeriodicField {
 public:
  PeriodicField(PeriodicGrid grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.size())
      throw ValidationError("PeriodicField: value count does not match grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw NumericError("PeriodicField: non-finite value");
  }

  static PeriodicField zeros(PeriodicGrid grid) {
    return PeriodicField(grid, std::vector<double>(grid.size(), 0.0));
  }

  template <class F>
  static PeriodicField sample(PeriodicGrid grid, F f) {
    std::vector<double> v(grid.size());
    for (int j = 0; j < grid.size(); ++j) v[j] = f(grid.point(j));
    return PeriodicField(grid, std::move(v));
  }

  const PeriodicGrid& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](int j) const { return values_[j]; }

  double mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / values_.size();
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  bool is_mean_zero() const {
    return std::abs(mean()) <= 1e-12 * std::max(1.0, max_abs());
  }
  void require_mean_zero(const std::string& who) const {
    if (!is_mean_zero())
      throw PreconditionError(who + ": field is not mean-zero (mean " +
                              sci(mean()) + ")");
  }
  /// sup_j |u(x_j) + u(-x_j)|
  double odd_defect() const {
    double m = 0.0;
    for (int j = 0; j < size(); ++j)
      m = std::max(m, std::abs(values_[j] + values_[grid_.mirror(j)]));
    return m;
  }
  bool is_odd(double tol) const { return odd_defect() <= tol; }

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

inline double sup_distance(const PeriodicField& a, const PeriodicField& b) {
  if (!(a.grid() == b.grid())) throw ValidationError("sup_distance: grids differ");
  double m = 0.0;
  for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

struct Diagnostics {
  double t = 0.0;
  double energy_K = 0.0;
  double enstrophy_E = 0.0;
  double rate_R = 0.0;
};

// Warning sink for under-resolution; defaults to stderr.
using WarningHandler = void (*)(const std::string&);
inline void default_warning_handler(const std::string& msg) {
  std::cerr << "warning: " << msg << '\n';
}
inline std::atomic<WarningHandler>& warning_handler() {
  static std::atomic<WarningHandler> h{&default_warning_handler};
  return h;
}
inline void set_warning_handler(WarningHandler h) {
  warning_handler().store(h ? h : &default_warning_handler);
}
inline void warn(const std::string& msg) { warning_handler().load()(msg); }

inline std::vector<cplx> spectrum(const PeriodicField& f) {
  return fft_for(f.size()).forward(f.values());
}

/// Multiply mode m by (i 2 pi m)^order; the Nyquist mode is dropped for odd orders.
inline void differentiate_spectrum(std::vector<cplx>& c, int n, int order) {
  const int nyq = n / 2;
  for (int m = 0; m <= nyq; ++m) {
    const cplx ik(0.0, kTwoPi * m);
    cplx factor = 1.0;
    for (int p = 0; p < order; ++p) factor *= ik;
    c[m] *= factor;
  }
  if (order % 2 == 1) c[nyq] = 0.0;
}

inline PeriodicField spectral_derivative(const PeriodicField& f, int order) {
  if (order < 1 || order > 3)
    throw ValidationError("spectral_derivative: order must be 1, 2 or 3");
  auto c = spectrum(f);
  differentiate_spectrum(c, f.size(), order);
  return PeriodicField(f.grid(), fft_for(f.size()).inverse(c));
}

/// Trapezoid rule on the periodic grid.
inline double periodic_integral(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

inline double energy(const PeriodicField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return 0.5 * s / f.size();
}

inline double enstrophy(const PeriodicField& f) {
  return energy(spectral_derivative(f, 1));
}

/// Share of spectral energy carried by modes m > n/3.
inline double spectral_tail_fraction(const std::vector<cplx>& c, int n) {
  const int nyq = n / 2;
  double total = 0.0, tail = 0.0;
  for (int m = 1; m <= nyq; ++m) {
    const double e = std::norm(c[m]);
    total += e;
    if (3 * m > n) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

inline double spectral_tail_fraction(const PeriodicField& f) {
  return spectral_tail_fraction(spectrum(f), f.size());
}

inline double rate_of_change(const PeriodicField& f) {
  auto c = spectrum(f);
  const double tail = spectral_tail_fraction(c, f.size());
  if (tail > kResolutionWarnTail)
    warn("rate_of_change: spectral tail fraction " + sci(tail) +
         " exceeds 1e-8 (n = " + std::to_string(f.size()) + ")");
  auto& fft = fft_for(f.size());
  auto c1 = c;
  differentiate_spectrum(c1, f.size(), 1);
  auto c2 = c;
  differentiate_spectrum(c2, f.size(), 2);
  const auto ux = fft.inverse(c1);
  const auto uxx = fft.inverse(c2);
  double s = 0.0;
  for (int j = 0; j < f.size(); ++j) s += uxx[j] * uxx[j] + ux[j] * ux[j] * ux[j];
  return -s / f.size();
}

inline Diagnostics diagnose(const PeriodicField& f, double t = 0.0) {
  return {t, energy(f), enstrophy(f), rate_of_change(f)};
}

struct BoundReport {
  double poincare_ratio = 0.0;  // K / E
  double rate_ratio = 0.0;      // R / E^{5/3}
  bool poincare_ok = true;
  bool rate_ok = true;
  bool integral_bound_ok = true;
  // Evaluates to about 0.9906, which is not below 1/2.
  double sharp_rate_constant = kSharpRateConstant;
  bool sharp_constant_below_half = kSharpRateConstant < 0.5;
  bool ok() const { return poincare_ok && rate_ok && integral_bound_ok; }
};

/// Integral bounds relative to an earlier state (K0, E0) of the same trajectory.
inline bool integral_bounds_hold(double K0, double E0, double K, double E,
                                 double tol = 1e-10) {
  const double lhs = std::cbrt(E) - std::cbrt(E0);
  const double nonlocal = 0.25 * (K0 - K);
  const double cap = std::pow(std::cbrt(E0) + E0 / (16.0 * kPi * kPi), 3);
  return lhs <= nonlocal + tol * (1.0 + std::cbrt(E)) && E <= cap * (1.0 + tol);
}

inline BoundReport audit_bounds(const PeriodicField& f,
                                const Diagnostics* initial = nullptr) {
  f.require_mean_zero("audit_bounds");
  BoundReport r;
  const auto d = diagnose(f);
  if (d.enstrophy_E > 0.0) {
    r.poincare_ratio = d.energy_K / d.enstrophy_E;
    r.rate_ratio = d.rate_R / std::pow(d.enstrophy_E, 5.0 / 3.0);
  }
  r.poincare_ok = d.energy_K <= d.enstrophy_E * kPoincareConstant + 1e-10;
  r.rate_ok = d.rate_R <= kRateBoundConstant * std::pow(d.enstrophy_E, 5.0 / 3.0) +
                              1e-8 * (1.0 + std::pow(d.enstrophy_E, 5.0 / 3.0));
  if (initial)
    r.integral_bound_ok = integral_bounds_hold(initial->energy_K, initial->enstrophy_E,
                                               d.energy_K, d.enstrophy_E);
  return r;
}

/// Spectral interpolation onto a finer grid (n_out >= n_in).
inline PeriodicField resample(const PeriodicField& f, int n_out) {
  PeriodicGrid g(n_out);
  const int n = f.size();
  if (n_out == n) return f;
  if (n_out < n) throw ValidationError("resample: only refinement is supported");
  auto c = spectrum(f);
  std::vector<cplx> d(n_out / 2 + 1, 0.0);
  const double s = static_cast<double>(n_out) / n;
  for (int m = 0; m < n / 2; ++m) d[m] = c[m] * s;
  d[n / 2] = 0.5 * c[n / 2] * s;  // split the old Nyquist mode between +-n/2
  return PeriodicField(g, fft_for(n_out).inverse(d));
}

/// Evaluate the trigonometric interpolant (and its derivative) at arbitrary x.
struct TrigInterpolant {
  explicit TrigInterpolant(const PeriodicField& f) : n(f.size()), c(spectrum(f)) {
    for (auto& v : c) v /= static_cast<double>(n);
  }
  // value and first derivative
  std::pair<double, double> operator()(double x) const {
    const double s = x + 0.5;  // offset from the first grid point
    double u = c[0].real(), ux = 0.0;
    const cplx step = std::polar(1.0, kTwoPi * s);
    cplx e = step;
    for (int m = 1; m <= n / 2; ++m, e *= step) {
      const double w = (m == n / 2) ? 1.0 : 2.0;
      const cplx term = c[m] * e;
      u += w * term.real();
      if (m != n / 2) ux += w * (cplx(0.0, kTwoPi * m) * term).real();
    }
    return {u, ux};
  }
  int n;
  std::vector<cplx> c;
};

}  // namespace burgers
