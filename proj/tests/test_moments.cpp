#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "hkfold/moments.hpp"
#include "support.hpp"

using namespace hkfold;
using namespace hkfold::moments;
using testing_support::Rng;
using testing_support::uniform;
using cd = std::complex<double>;

constexpr double kPi = std::numbers::pi;

TEST(FibreQuadrature, IntegratesOneToPi) {
  for (int n : {8, 16, 32}) {
    EXPECT_NEAR(FibreQuadrature(n, 1).integrate([](double, double) { return 1.0; }), kPi, 1e-10);
    EXPECT_NEAR(FibreQuadrature(n, 1, Measure::Area).integrate([](double, double) { return 1.0; }), 2 * kPi, 1e-10);
  }
}

TEST(FibreQuadrature, RadialMomentsMatchDoubleFactorials) {
  // int_0^1 r^{2l+1}/sqrt(1-r^2) dr = (2l)!!/(2l+1)!!
  const FibreQuadrature q(24, 4, Measure::Area);
  double ratio = 1.0;
  for (int l = 0; l <= 6; ++l) {
    if (l > 0) ratio *= (2.0 * l) / (2.0 * l + 1.0);
    const double got = q.integrate([l](double r, double) { return std::pow(r, 2 * l); });
    EXPECT_NEAR(got, 2 * kPi * ratio, 1e-12);
  }
}

TEST(Pairings, FibreAreaAndVanishingClasses) {
  Rng g(1);
  for (int i = 0; i < 5; ++i) {
    const auto p = fibre_pairings(uniform(g, -2, 2), uniform(g, 0.3, 3));
    EXPECT_NEAR(p.omega1, 4 * kPi, 1e-6);
    EXPECT_NEAR(p.upper_disc, 2 * kPi, 1e-6);
    EXPECT_NEAR(p.lower_disc, 2 * kPi, 1e-6);
    EXPECT_LT(std::abs(p.omega2), 1e-8);
    EXPECT_LT(std::abs(p.omega3), 1e-8);
  }
  EXPECT_THROW(fibre_pairings(0.0, -1.0), DomainError);
}

TEST(Alpha, OddVanish) {
  Rng g(2);
  for (int m : {1, 3, 5, 7}) {
    const cd a(uniform(g, -0.5, 0.5), uniform(g, -0.5, 0.5));
    EXPECT_LT(std::abs(alpha_m(1.3, a, m)), 1e-10);
  }
}

TEST(Alpha, EvenAgreeWithDirectIntegral) {
  Rng g(3);
  for (int m = 0; m <= 8; m += 2) {
    const cd a(uniform(g, -0.5, 0.5), uniform(g, -0.5, 0.5));
    const double k = uniform(g, 0.8, 2.0);
    const cd got = alpha_m(k, a, m), ref = alpha_exact(a, m);
    EXPECT_LT(std::abs(got - ref), 1e-10 * (1 + std::abs(ref))) << m;
  }
}

TEST(Alpha, ZeroAndAreaNormalization) {
  EXPECT_NEAR(std::abs(alpha_m(1.0, 0.0, 0) - 2 * kPi), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(alpha_m(1.0, 0.0, 0, Measure::Area) - 4 * kPi), 0.0, 1e-12);
  EXPECT_LT(std::abs(alpha_m(1.7, cd(0.3, 0.2), 1)), 1e-12);
}

TEST(Alpha, IndependentOfK) {
  const cd a(0.2, -0.1);
  for (int m : {2, 4, 6}) EXPECT_LT(std::abs(alpha_m(0.5, a, m) - alpha_m(3.0, a, m)), 1e-12);
}

TEST(Alpha, ClosedFormArithmetic) {
  // (pi/2)^2 a and (3 pi/8)^2 a^2; a different number from the integral.
  const cd a(0.4, 0.0);
  EXPECT_NEAR(alpha_closed_form(a, 2).real(), 2.4674011002723395 * 0.4, 1e-14);
  EXPECT_NEAR(alpha_closed_form(a, 4).real(), 1.3879131189031910 * 0.16, 1e-14);
  EXPECT_GT(std::abs(alpha_closed_form(a, 2) - alpha_m(1.0, a, 2)), 0.1);
}

TEST(Alpha, DegenerateInputsRejected) {
  EXPECT_THROW(alpha_m(0.3, 0.5, 2), DegeneracyError);
  EXPECT_THROW(alpha_m(1.0, 0.5, -1), std::invalid_argument);
}

TEST(Alpha, DoublingChangesLittle) {
  const cd a(0.3, 0.4);
  auto at = [&](int n) { return 2.0 * FibreQuadrature(n, 12, Measure::Half).integrate([&](double r, double th) {
    const cd e = std::polar(1.0, th);
    return std::pow(0.5 * (r * std::conj(e) + a * r * e), 4);
  }); };
  EXPECT_LT(std::abs(at(32) - at(64)), 1e-9);
}

TEST(Holomorphy, ConstantAndLinearDifferentials) {
  std::vector<cd> pts;
  for (double x : {-0.3, 0.0, 0.25})
    for (double y : {-0.2, 0.1, 0.3}) pts.push_back({x, y});
  auto disc_k = [](cd z) { const double s = 1 - std::norm(z); return 1 / (s * s); };
  auto zero = [](cd) { return cd(0.0); };
  auto p0 = alpha_holomorphy_probe(disc_k, zero, 2, pts);
  EXPECT_LT(p0.max_defect, 1e-6);
  auto lin = [](cd z) { return cd(0.3, 0.1) * z; };
  auto p1 = alpha_holomorphy_probe(disc_k, lin, 2, pts);
  EXPECT_LT(p1.max_defect, 1e-8);
  EXPECT_TRUE(p1.resolved);
  auto p4 = alpha_holomorphy_probe(disc_k, lin, 4, pts);
  EXPECT_LT(p4.max_defect, 1e-8);
}

TEST(Holomorphy, NonHolomorphicControl) {
  std::vector<cd> pts{{0.1, 0.1}, {-0.2, 0.3}, {0.3, -0.1}};
  auto k = [](cd z) { const double s = 1 - std::norm(z); return 1 / (s * s); };
  auto lin = [](cd z) { return cd(0.3, 0.1) * z; };
  auto bent = [](cd z) { return cd(0.3, 0.1) * z + 0.1 * std::conj(z); };
  const auto good = alpha_holomorphy_probe(k, lin, 2, pts);
  const auto bad = alpha_holomorphy_probe(k, bent, 2, pts);
  EXPECT_GT(bad.max_defect, 10 * std::max(good.max_defect, 1e-9));
  EXPECT_NEAR(bad.max_defect, 2 * kPi * 0.1 / 3, 1e-8);
}

TEST(MomentVariation, SelectionRule) {
  Rng g(4);
  for (int kp = 1; kp <= 5; ++kp)
    for (int m = 2; m <= 5; ++m) {
      if (kp == m) continue;
      const cd a(uniform(g, -1, 1), uniform(g, -1, 1));
      EXPECT_LT(std::abs(moment_variation(kp, m, a, uniform(g, 0.5, 2))), 1e-12);
    }
}

TEST(MomentVariation, DiagonalClosedForm) {
  const cd a(0.7, -0.2);
  EXPECT_NEAR(std::abs(moment_variation_exact(1, 1, a) - 2 * kPi * a), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(moment_variation_exact(2, 2, a) - 8 * kPi / 3 * a), 0.0, 1e-14);
  for (int m = 1; m <= 6; ++m)
    for (double y : {0.5, 1.0, 2.5}) {
      const cd got = moment_variation(m, m, a, y), ref = moment_variation_exact(m, m, a);
      EXPECT_LT(std::abs(got - ref), 1e-6 * std::abs(ref)) << m;
    }
  EXPECT_THROW(moment_variation(1, 0, a, 1.0), std::invalid_argument);
}

TEST(Converge, ReportsHistory) {
  try {
    converge([](int n) { return std::sin(double(n)); }, 1e-12, 4, 64, "probe");
    FAIL();
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.history().size(), 4u);
  }
}
