#include <gtest/gtest.h>

#include <cmath>

#include "burgers/line_shock.hpp"

using namespace burgers;

namespace {

double sup_deviation(const LineShockSolution& sol, double tau, double xi_lo, double xi_hi,
                     double step) {
  double m = 0.0;
  for (double xi = xi_lo; xi <= xi_hi; xi += step)
    m = std::max(m, std::abs(sol.w(xi, tau) - std::tanh(xi)));
  return m;
}

}  // namespace

TEST(PsiClosed, Values) {
  EXPECT_DOUBLE_EQ(psi_closed_a4(0, 0), 1.0);
  for (double xi : {-3.0, 0.7, 5.0}) {
    const double c = std::cosh(xi / 4);
    EXPECT_NEAR(psi_closed_a4(xi, 0), c * c * c * c, 1e-13 * c * c * c * c);
  }
  for (double tau : {0.5, 3.0, 10.0}) {
    const double ref = (3 + 4 * std::exp(tau / 4) + std::exp(tau)) / 8;
    EXPECT_NEAR(psi_closed_a4(0, tau), ref, 1e-13 * ref);
  }
}

TEST(PsiClosed, LogSpaceBeyondOverflow) {
  const double v = log_psi_closed_a4(900.0, 2.0);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, 900.0 + 2.0 - std::log(16.0), 1e-9);
  EXPECT_TRUE(std::isinf(psi_closed_a4(900.0, 2.0)));
  EXPECT_THROW(psi_closed_a4(0.0, -1.0), ValidationError);
}

TEST(LineA4, OddAndInitialProfile) {
  for (double tau : {0.0, 0.3, 2.0, 30.0}) EXPECT_EQ(w_line_a4(0.0, tau), 0.0);
  for (double xi = -30; xi <= 30; xi += 0.37)
    EXPECT_NEAR(w_line_a4(xi, 0.0), std::tanh(xi / 4), 1e-12);
}

TEST(LineA4, StaysBounded) {
  for (double tau : {0.0, 1.0, 5.0, 50.0})
    for (double xi = -2000; xi <= 2000; xi += 7.3) {
      const double w = w_line_a4(xi, tau);
      EXPECT_LT(std::abs(w), 1.0 + 1e-9);
    }
}

TEST(LineA4, SolvesBurgersLine) {
  const double h = 1e-5;
  for (double tau : {0.2, 1.0, 3.0, 7.0})
    for (double xi : {-6.0, -1.3, 0.4, 2.0, 9.0}) {
      const auto v = shock_a4(xi, tau);
      const double wt = (w_line_a4(xi, tau + h) - w_line_a4(xi, tau - h)) / (2 * h);
      EXPECT_NEAR(wt - 2 * v.w * v.w_xi - v.w_xixi, 0.0, 1e-8) << xi << " " << tau;
    }
}

TEST(LineA4, DerivativesMatchDifferences) {
  const double h = 1e-5;
  for (double tau : {0.5, 4.0})
    for (double xi : {-2.0, 0.3, 3.0}) {
      const auto v = shock_a4(xi, tau);
      const auto p = shock_a4(xi + h, tau), m = shock_a4(xi - h, tau);
      EXPECT_NEAR(v.w_xi, (p.w - m.w) / (2 * h), 1e-9);
      EXPECT_NEAR(v.w_xixi, (p.w_xi - m.w_xi) / (2 * h), 1e-9);
    }
}

TEST(LineA4, DecayRateThreeQuarters) {
  const auto sol = LineShockSolution::closed_a4();
  const double d8 = sup_deviation(sol, 8, 0, 40, 0.01);
  const double d12 = sup_deviation(sol, 12, 0, 40, 0.01);
  EXPECT_NEAR(d12 / d8, std::exp(-3.0), 0.1 * std::exp(-3.0));

  std::vector<double> taus, logs;
  for (double tau = 6; tau <= 14; tau += 1) {
    taus.push_back(tau);
    logs.push_back(std::log(sup_deviation(sol, tau, 0, 40, 0.01)));
  }
  const double n = taus.size();
  double st = 0, sl = 0, stt = 0, stl = 0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    st += taus[i];
    sl += logs[i];
    stt += taus[i] * taus[i];
    stl += taus[i] * logs[i];
  }
  const double slope = (n * stl - st * sl) / (n * stt - st * st);
  EXPECT_NEAR(slope, -0.75, 0.05);
}

TEST(PhiA, Values) {
  for (double a : {4.0, 10.0, 40.0}) {
    EXPECT_NEAR(phi_a(0, a), std::pow(2.0, a), 1e-12 * std::pow(2.0, a));
    EXPECT_NEAR(phi_a(1e4 * a, a), 1.0, 1e-15);
  }
  for (double a : {16.0, 64.0, 256.0}) {
    const double xi = 0.75 * a * std::log(a);
    const double scaled = phi_a_minus_one(xi, a) * std::sqrt(a);
    EXPECT_GT(scaled, 0.5);
    EXPECT_LT(scaled, 1.5);
  }
  EXPECT_THROW(phi_a(0, 0), ValidationError);
}

TEST(PsiGeneral, SymmetryAndLimit) {
  LineShockParams p;
  p.a = 10;
  for (double tau : {0.5, 3.0, 20.0})
    for (double xi : {0.0, 1.5, 7.0}) {
      const auto a = psi_pm_general(-xi, tau, p);
      const auto b = psi_pm_general(xi, tau, p);
      EXPECT_NEAR(a.first, b.second, 10 * p.quad_tol);
      EXPECT_NEAR(a.second, b.first, 10 * p.quad_tol);
    }
  double prev = INFINITY;
  for (double tau : {10.0, 40.0, 160.0, 640.0}) {
    const auto v = psi_pm_general(0.0, tau, p);
    const double m = std::max(std::abs(v.first), std::abs(v.second));
    EXPECT_LT(m, prev);
    prev = m;
  }
  EXPECT_LT(prev, 1e-10);
  EXPECT_THROW(psi_pm_general(0.0, 0.0, p), ValidationError);
}

TEST(LineGeneral, MatchesClosedFormAtFour) {
  LineShockParams p;
  p.a = 4;
  for (double tau : {1.0, 4.0, 16.0})
    for (double xi = -20; xi <= 20; xi += 0.5) {
      const auto g = shock_general(xi, tau, p);
      const auto c = shock_a4(xi, tau);
      EXPECT_NEAR(g.w, c.w, 10 * p.quad_tol) << xi << " " << tau;
    }
}

TEST(LineGeneral, InitialProfileAndOddness) {
  LineShockParams p;
  p.a = 10;
  EXPECT_NEAR(w_line_general(3.0, 0.0, p), std::tanh(0.3), 1e-15);
  for (double tau : {0.0, 1.0, 25.0}) EXPECT_EQ(w_line_general(0.0, tau, p), 0.0);
  for (double tau : {0.5, 5.0})
    for (double xi = -40; xi <= 40; xi += 1.7)
      EXPECT_LT(std::abs(w_line_general(xi, tau, p)), 1.0 + 1e-9);
  p.a = 3;
  EXPECT_THROW(w_line_general(0.5, 1.0, p), ValidationError);
}

TEST(LineGeneral, SolvesBurgersLine) {
  LineShockParams p;
  p.a = 10;
  const double h = 1e-4;
  for (double tau : {1.0, 6.0})
    for (double xi : {-3.0, 0.5, 4.0}) {
      const auto v = shock_general(xi, tau, p);
      const double wt =
          (w_line_general(xi, tau + h, p) - w_line_general(xi, tau - h, p)) / (2 * h);
      EXPECT_NEAR(wt - 2 * v.w * v.w_xi - v.w_xixi, 0.0, 1e-6) << xi << " " << tau;
    }
}

TEST(LineGeneral, ApproachesSteadyShock) {
  const auto sol = LineShockSolution::general({10.0, 1e-10});
  double prev = INFINITY;
  for (double tau : {5.0, 20.0, 80.0, 160.0}) {
    const double scaled = sup_deviation(sol, tau, 0, 4 * tau + 60, 0.25) * std::sqrt(tau);
    EXPECT_LT(scaled, prev) << tau;
    prev = scaled;
  }
}

TEST(LineGeneral, BoundarySmallnessConstantStable) {
  const double delta = 0.5;
  std::vector<double> C;
  for (double a : {16.0, 32.0}) {
    const auto sol = LineShockSolution::general({a, 1e-10});
    const double xb = 0.5 * (1 + delta) * (1 + delta) * a * std::log(a);
    double m = 0.0;
    for (double tau : {0.0, a, 4 * a})
      m = std::max(m, sup_deviation(sol, tau, xb, xb + 4 * a, 0.5));
    C.push_back(m * std::pow(a, 1 + delta));
  }
  EXPECT_GT(C[1] / C[0], 0.5);
  EXPECT_LT(C[1] / C[0], 2.0);
}

TEST(HalfLine, SteadyShock) {
  const auto d = halfline_diagnostics(LineShockSolution::steady(), 0.0);
  EXPECT_NEAR(d.E, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(d.R, 0.0, 1e-9);
}

TEST(HalfLine, InitialEnstrophy) {
  EXPECT_NEAR(halfline_diagnostics(LineShockSolution::closed_a4(), 0.0).E, 2.0 / 12.0, 1e-12);
  for (double a : {4.0, 10.0, 40.0}) {
    const auto d = halfline_diagnostics(LineShockSolution::general({a, 1e-10}), 0.0);
    EXPECT_NEAR(d.E, 2.0 / (3.0 * a), 1e-10);
  }
  EXPECT_THROW(halfline_diagnostics(LineShockSolution::closed_a4(), -1.0), ValidationError);
}

TEST(HalfLine, EnstrophyRisesToTwoThirds) {
  const auto sol = LineShockSolution::closed_a4();
  double prev = 0.0;
  for (double tau : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 12.0, 20.0}) {
    const auto d = halfline_diagnostics(sol, tau);
    EXPECT_GT(d.E, prev) << tau;
    EXPECT_LT(d.E, 2.0 / 3.0);
    prev = d.E;
  }
  EXPECT_NEAR(prev, 2.0 / 3.0, 1e-5);
}

TEST(LineMaximizerTest, ClosedForms) {
  const auto m = line_maximizer(32.0 / 3.0);
  EXPECT_NEAR(m.k, 1.0, 1e-15);
  EXPECT_NEAR(m.R, 51.2, 1e-12);
  for (double E : {1.0, 1e3, 1e6}) {
    const auto s = line_maximizer(E);
    EXPECT_NEAR(s.R / std::pow(E, 5.0 / 3.0), kSharpRateConstant, 1e-12);
  }
  const double k = 1.3;
  EXPECT_NEAR(kSharpRateConstant, 256 * std::pow(k, 5) / 5 / std::pow(32 * k * k * k / 3, 5.0 / 3.0),
              1e-14);
  EXPECT_THROW(line_maximizer(0.0), ValidationError);
}

TEST(LineMaximizerTest, SteadyShockHasFourTimesEnstrophy) {
  const double k = 1.7;
  const auto m = line_maximizer(32.0 * k * k * k / 3.0);
  auto sech2 = [](double y) { const double c = std::cosh(y); return 1.0 / (c * c); };
  const double L = 40.0 / k;
  auto Es = integrate([&](double x) { const double v = -4 * k * k * sech2(k * x); return 0.5 * v * v; }, -L, L).value;
  auto Ei = integrate([&](double x) { const double v = -16 * k * k * sech2(4 * k * x); return 0.5 * v * v; }, -L, L).value;
  EXPECT_NEAR(Es, m.E, 1e-10 * m.E);
  EXPECT_NEAR(Ei, 4 * Es, 1e-10 * Ei);
  EXPECT_NEAR(m.profile(0.3), -4 * k * std::tanh(0.3 * k), 1e-14);
}

TEST(TStar, Formulas) {
  EXPECT_NEAR(t_star_formula(20, 4, 0.5, TStarVariant::a4), 9.362e-4, 5e-8);
  EXPECT_NEAR(t_star_formula(std::exp(1.0), 4, 0.0, TStarVariant::a4),
              1.0 / (12 * std::exp(2.0)), 1e-16);
  EXPECT_NEAR(t_star_formula(20, 16, 0.5, TStarVariant::general), 7.798e-3, 5e-7);
  EXPECT_THROW(t_star_formula(1.0, 4, 0.5, TStarVariant::a4), ValidationError);
  EXPECT_THROW(t_star_formula(20, 3, 0.5, TStarVariant::general), ValidationError);
}
