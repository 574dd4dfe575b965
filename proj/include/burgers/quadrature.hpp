#pragma once

// Adaptive Gauss-Kronrod (7/15) integration with a shared evaluation budget,
// plus the scalar root/extremum helpers used throughout the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "errors.hpp"

namespace burgers {

struct QuadOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  std::size_t max_evals = 200000;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  std::size_t evals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct is_std_array : std::false_type {};
template <std::size_t N>
struct is_std_array<std::array<double, N>> : std::true_type {};

template <class T>
T zero_like() {
  if constexpr (std::is_same_v<T, double>) {
    return 0.0;
  } else {
    T z;
    z.fill(0.0);
    return z;
  }
}

template <class T>
void axpy(T& acc, double w, const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    acc += w * v;
  } else {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * v[i];
  }
}

template <class T>
void add(T& acc, const T& v) { axpy(acc, 1.0, v); }

// Largest scaled component, used as the norm for error control.
template <class T>
double scaled_norm(const T& v, const T* scale) {
  if constexpr (std::is_same_v<T, double>) {
    return std::abs(v) / (scale ? *scale : 1.0);
  } else {
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      m = std::max(m, std::abs(v[i]) / (scale ? (*scale)[i] : 1.0));
    return m;
  }
}

template <class T>
bool all_finite(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::isfinite(v);
  } else {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  }
}

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gk15(F& f, double a, double b, const T* scale) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T fc = f(c);
  T kron = zero_like<T>();
  T gauss = zero_like<T>();
  axpy(kron, kWgk[7], fc);
  axpy(gauss, kWg[3], fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    T f1 = f(c - dx);
    T f2 = f(c + dx);
    axpy(kron, kWgk[j], f1);
    axpy(kron, kWgk[j], f2);
    if (j % 2 == 1) {
      axpy(gauss, kWg[j / 2], f1);
      axpy(gauss, kWg[j / 2], f2);
    }
  }
  T value = zero_like<T>();
  axpy(value, h, kron);
  T diff = value;
  axpy(diff, -h, gauss);
  return {a, b, value, scaled_norm(diff, scale)};
}

}  // namespace detail

/// Globally adaptive integration over consecutive breakpoints.
/// T is double or std::array<double, N>; `scale` weights the error of each component.
template <class T, class F>
QuadResult<T> integrate_breakpoints(F f, const std::vector<double>& points,
                                    const QuadOptions& opt = {},
                                    const T* scale = nullptr) {
  if (points.size() < 2) throw ValidationError("integrate: need at least two breakpoints");
  std::priority_queue<detail::Segment<T>> heap;
  QuadResult<T> out;
  out.value = detail::zero_like<T>();
  double total_err = 0.0;
  T total = detail::zero_like<T>();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) {
      if (points[i + 1] == points[i]) continue;
      throw ValidationError("integrate: breakpoints must be increasing");
    }
    auto s = detail::gk15<T>(f, points[i], points[i + 1], scale);
    out.evals += 15;
    detail::add(total, s.value);
    total_err += s.error;
    heap.push(s);
  }
  if (heap.empty()) return out;

  auto tolerance = [&] {
    return std::max(opt.abs_tol, opt.rel_tol * detail::scaled_norm(total, scale));
  };
  while (total_err > tolerance()) {
    if (!detail::all_finite(total))
      throw QuadratureError("integrate: non-finite integrand");
    if (out.evals + 30 > opt.max_evals)
      throw QuadratureError("integrate: evaluation budget exhausted (error " +
                            std::to_string(total_err) + ")");
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval can no longer be split; accept what we have.
      heap.push(worst);
      break;
    }
    auto left = detail::gk15<T>(f, worst.a, mid, scale);
    auto right = detail::gk15<T>(f, mid, worst.b, scale);
    out.evals += 30;
    detail::axpy(total, -1.0, worst.value);
    detail::add(total, left.value);
    detail::add(total, right.value);
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from the leaves to shed accumulated rounding in the running total.
  T sum = detail::zero_like<T>();
  double err = 0.0;
  while (!heap.empty()) {
    detail::add(sum, heap.top().value);
    err += heap.top().error;
    heap.pop();
  }
  if (!detail::all_finite(sum)) throw QuadratureError("integrate: non-finite result");
  out.value = sum;
  out.error = err;
  return out;
}

template <class T = double, class F>
QuadResult<T> integrate(F f, double a, double b, const QuadOptions& opt = {},
                        const T* scale = nullptr) {
  return integrate_breakpoints<T>(std::move(f), std::vector<double>{a, b}, opt, scale);
}

/// Bisection for a sign change of f on [lo, hi].
template <class F>
double bisect(F f, double lo, double hi, double x_tol = 0.0, int max_iter = 400) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw BracketError("bisect: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi) || hi - lo <= x_tol) break;
    const double fm = f(mid);
    if (!std::isfinite(fm)) throw NumericError("bisect: non-finite function value");
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Extremum {
  double x;
  double value;
};

/// Golden-section search for the maximum of a unimodal f on [a, b].
template <class F>
Extremum golden_max(F f, double a, double b, double x_tol, int max_iter = 500) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
}

}  // namespace burgers
