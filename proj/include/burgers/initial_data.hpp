#pragma once

// Shock-on-rarefaction initial data u0 = 4k(2x - tanh(lx)/tanh(l/2)) and the
// closed forms of K, E, R for this family.

#include <array>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "field.hpp"
#include "quadrature.hpp"

namespace burgers {

enum class FamilyKind { instant, general };

struct DataFamily {
  FamilyKind kind = FamilyKind::general;
  double k = 1.0;
  double l = 1.0;

  static DataFamily instant(double k) { return make(FamilyKind::instant, k, k); }
  static DataFamily general(double k, double l) { return make(FamilyKind::general, k, l); }

  double operator()(double x) const {
    return 4.0 * k * (2.0 * x - std::tanh(l * x) / std::tanh(0.5 * l));
  }

 private:
  static DataFamily make(FamilyKind kind, double k, double l) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("DataFamily: k must be positive");
    if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("DataFamily: l must be positive");
    return {kind, k, l};
  }
};

inline PeriodicField sample(const DataFamily& f, const PeriodicGrid& g) {
  if (g.size() < 32.0 * f.l)
    throw ResolutionError("sample: grid n = " + std::to_string(g.size()) +
                          " does not resolve the shock (need n >= 32 l = " +
                          std::to_string(32.0 * f.l) + ")");
  return PeriodicField::sample(g, f);
}

namespace detail {

inline double log1p_exp_neg_integral(double l) {
  QuadOptions opt;
  opt.abs_tol = 1e-15;
  opt.rel_tol = 1e-14;
  return integrate([](double z) { return std::log1p(std::exp(-z)); }, 0.0, l, opt).value;
}

}  // namespace detail

/// K(u0) / k^2
inline double K_tilde(double l) {
  if (!(l > 0.0)) throw ValidationError("K_tilde: l must be positive");
  const double e = std::exp(-l);
  const double inv_sinh2 = 4.0 * e / ((1.0 - e) * (1.0 - e));  // 1/sinh^2(l/2)
  const double coth = (1.0 + e) / (1.0 - e);                    // coth(l/2)
  const double bracket = 1.0 + 0.5 * l + 2.0 * std::log1p(e) -
                         2.0 / l * detail::log1p_exp_neg_integral(l);
  return 32.0 / 3.0 + 8.0 * inv_sinh2 - 16.0 * coth / l * bracket;
}

/// E(u0) / k^2 = 32 l (cosh l + 2) / (3 sinh l) - 32
inline double E_tilde(double l) {
  if (!(l > 0.0)) throw ValidationError("E_tilde: l must be positive");
  const double e = std::exp(-l);
  const double e2 = e * e;
  const double ratio = (1.0 + e2 + 4.0 * e) / (1.0 - e2);  // (cosh l + 2) / sinh l
  return 32.0 * l * ratio / 3.0 - 32.0;
}

struct KE {
  double K0;
  double E0;
};

inline KE closed_form_KE(double k, double l) {
  if (!(k > 0.0)) throw ValidationError("closed_form_KE: k must be positive");
  return {k * k * K_tilde(l), k * k * E_tilde(l)};
}

/// R(u0) from the antiderivatives of the sech-power integrals.
inline double closed_form_R(double k, double l) {
  if (!(k > 0.0) || !(l > 0.0)) throw ValidationError("closed_form_R: k, l must be positive");
  const double th = std::tanh(0.5 * l);
  const double t2 = th * th, t3 = t2 * th, t5 = t3 * t2;
  const double S4 = th - t3 / 3.0;
  const double S6 = th - 2.0 * t3 / 3.0 + t5 / 5.0;
  const double SS = t3 / 3.0 - t5 / 5.0;
  return 64.0 * k * k * k * (16.0 - 12.0 * l / t2 * S4 + 2.0 * l * l / t3 * S6) -
         128.0 * k * k * l * l * l / t2 * SS;
}

/// Same expression with the sech-power integrals computed by adaptive quadrature.
inline double closed_form_R_quadrature(double k, double l) {
  if (!(k > 0.0) || !(l > 0.0)) throw ValidationError("closed_form_R: k, l must be positive");
  const double th = std::tanh(0.5 * l);
  QuadOptions opt;
  opt.abs_tol = 1e-16;
  opt.rel_tol = 1e-14;
  // int_0^{l/2} of sech^4, sech^6, sech^4 tanh^2 in s = l x; equals the T-antiderivatives.
  auto f = [](double s) {
    const double sc = 1.0 / std::cosh(s);
    const double s2 = sc * sc;
    const double t = std::tanh(s);
    return std::array<double, 3>{s2 * s2, s2 * s2 * s2, s2 * s2 * t * t};
  };
  const auto r = integrate<std::array<double, 3>>(f, 0.0, 0.5 * l, opt).value;
  const double t2 = th * th, t3 = t2 * th;
  return 64.0 * k * k * k * (16.0 - 12.0 * l / t2 * r[0] + 2.0 * l * l / t3 * r[1]) -
         128.0 * k * k * l * l * l / t2 * r[2];
}

struct FormulaCheck {
  double K_rel = 0.0;
  double E_rel = 0.0;
  double R_rel = 0.0;
  bool formula_discrepancy = false;
};

/// Closed forms against grid quadrature of the sampled field (the ground truth).
inline FormulaCheck check_closed_forms(double k, double l, const PeriodicGrid& g) {
  const auto u = sample(DataFamily::general(k, l), g);
  const auto d = diagnose(u);
  const auto ke = closed_form_KE(k, l);
  const double R = closed_form_R(k, l);
  FormulaCheck c;
  c.K_rel = std::abs(ke.K0 - d.energy_K) / std::abs(d.energy_K);
  c.E_rel = std::abs(ke.E0 - d.enstrophy_E) / std::abs(d.enstrophy_E);
  c.R_rel = std::abs(R - d.rate_R) / std::max(std::abs(d.rate_R), 1e-300);
  c.formula_discrepancy = c.K_rel > 1e-4 || c.E_rel > 1e-4 || c.R_rel > 1e-4;
  return c;
}

/// F(l) = K~(l) / E~(l)
inline double poincare_ratio_F(double l) { return K_tilde(l) / E_tilde(l); }

struct FMaximum {
  double l0;
  double F0;
};

inline FMaximum maximize_F() {
  const auto m = golden_max(poincare_ratio_F, 0.5, 10.0, 1e-9);
  return {m.x, m.value};
}

enum class LPolicyKind { l_equals_k, l_log, l_fixed };

struct LPolicy {
  LPolicyKind kind = LPolicyKind::l_equals_k;
  double value = 0.0;  // Delta for l_log, l for l_fixed

  static LPolicy equals_k() { return {LPolicyKind::l_equals_k, 0.0}; }
  static LPolicy log(double delta = 3.0) {
    if (!(delta > 0.0)) throw ValidationError("LPolicy: Delta must be positive");
    return {LPolicyKind::l_log, delta};
  }
  static LPolicy fixed(double l) {
    if (!(l > 0.0)) throw ValidationError("LPolicy: fixed l must be positive");
    return {LPolicyKind::l_fixed, l};
  }

  double l_of(double k) const {
    switch (kind) {
      case LPolicyKind::l_equals_k: return k;
      case LPolicyKind::l_log: return (1.0 + value) * std::log(k);
      default: return value;
    }
  }

  std::string name() const {
    switch (kind) {
      case LPolicyKind::l_equals_k: return "l_equals_k";
      case LPolicyKind::l_log: return "l_log";
      default: return "l_fixed";
    }
  }
};

struct KL {
  double k;
  double l;
};

/// Solves k^2 E~(l(k)) = target_E for k >= 2.
inline KL k_from_E(double target_E, const LPolicy& policy) {
  if (!(target_E > 0.0) || !std::isfinite(target_E))
    throw ValidationError("k_from_E: target_E must be positive");
  auto E_of = [&](double k) { return k * k * E_tilde(policy.l_of(k)); };
  const double k_lo = 2.0;
  if (E_of(k_lo) > target_E)
    throw BracketError("k_from_E: target_E too small (requires k >= 2)");
  double k_hi = 4.0;
  while (E_of(k_hi) < target_E) {
    k_hi *= 2.0;
    if (k_hi > 1e12) throw BracketError("k_from_E: bracket failed");
  }
  const double k = bisect([&](double kk) { return E_of(kk) - target_E; }, k_lo, k_hi,
                          1e-15 * k_hi);
  return {k, policy.l_of(k)};
}

/// Root x >= 1 of x log x = z.
inline double solve_x_log_x(double z) {
  if (!(z >= 0.0)) throw ValidationError("solve_x_log_x: z must be non-negative");
  double hi = 2.0;
  while (hi * std::log(hi) < z) hi *= 2.0;
  return bisect([z](double x) { return x * std::log(x) - z; }, 1.0, hi, 0.0);
}

}  // namespace burgers
