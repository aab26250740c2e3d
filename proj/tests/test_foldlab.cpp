#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "hkfold/foldlab.hpp"
#include "support.hpp"

using namespace hkfold;
using namespace hkfold::foldlab;
using testing_support::Rng;
using testing_support::uniform;
using cd = std::complex<double>;

namespace {

// Kernel of a complex 2-form on C^3: (b_yz, -b_xz, b_xy).
Eigen::Vector3cd cross_kernel(const CForm<3, double>& b) {
  auto c = [&](unsigned m) { return cd(b.re[m], b.im[m]); };
  return {c(0b110), -c(0b101), c(0b011)};
}

Point<4> off_axis(Rng& g, double box) {
  const double rho = uniform(g, 0.2, box), phi = uniform(g, 0, 2 * M_PI);
  return {rho * std::cos(phi), rho * std::sin(phi), uniform(g, -box, box), uniform(g, -1, 1)};
}

}  // namespace

TEST(JumpModel, DivisibleByDbAtZero) {
  EXPECT_EQ(divisibility_defect(JumpModel{0.0}), 0.0);
  EXPECT_GT(divisibility_defect(JumpModel{0.5}), 0.4);
  const auto w = JumpModel{0.0}.omega_zeta(cd(0.3, -1.2));
  EXPECT_EQ(max_abs(wedge(w, CForm<4, double>{Form<4, double>::basis(0), Form<4, double>(1)})), 0.0);
}

TEST(JumpModel, ZetaZeroIsDecomposable) {
  const auto w = JumpModel{1.0}.omega_zeta(0.0);
  EXPECT_EQ(w.re.at({0, 1}), 1.0);
  EXPECT_EQ(max_abs(wedge(w, w)), 0.0);
}

TEST(JumpModel, SquareIsLinearInT) {
  // The coefficients as written give -t; the slope is exactly -1.
  for (double t : {-2.0, -0.5, 0.0, 0.25, 3.0}) {
    const cd s = JumpModel{t}.square();
    EXPECT_DOUBLE_EQ(s.real(), -t);
    EXPECT_EQ(s.imag(), 0.0);
  }
  EXPECT_NEAR(jump_slope({-1.0, -0.3, 0.0, 0.7, 2.0}), -1.0, 1e-12);
  EXPECT_THROW(jump_slope({1.0}), std::invalid_argument);
}

TEST(JumpModel, MiddleCoefficientWedgesFirstToZero) {
  Rng g(1);
  for (int i = 0; i < 50; ++i) {
    const JumpModel m{uniform(g, -5, 5)};
    EXPECT_LT(max_abs(wedge(m.coefficient1(), m.coefficient0())), 1e-13);
  }
}

TEST(JumpModel, OmegaOneSquareTracksT) {
  // (2 omega1)^2 = 2t db dc0 dc1 dc2 from the zeta^1 coefficient.
  for (double t : {-1.0, 0.5, 2.0}) {
    const auto c1 = JumpModel{t}.coefficient1();
    EXPECT_DOUBLE_EQ(wedge(c1, c1).re.top(), -2 * t);
  }
}

TEST(EtaKernel, LineAtReferencePoint) {
  const auto f = canonical::fold_data(0.0, 1.0, 0.0);
  for (cd z : {cd(0), cd(1), cd(0, 1), cd(2, -1)}) {
    const auto k = eta_kernel(f, z);
    EXPECT_GT(k.singular_values[1], 1e-8 * k.singular_values[0]);
    const auto ref = cross_kernel(wedge(eta_form(f, z), CForm<3, double>{f.phi, Form<3, double>(1)}));
    EXPECT_NEAR(line_alignment(k.direction, ref), 1.0, 1e-12) << z;
  }
}

TEST(EtaKernel, ZetaZeroMatchesDirectKernel) {
  const auto f = canonical::fold_data(0.3, 1.7, 0.4);
  const CForm<3, double> b = wedge(CForm<3, double>{f.eta1, f.eta2}, CForm<3, double>{f.phi, Form<3, double>(1)});
  const Eigen::Vector3cd v = eta_kernel(f, 0.0).direction;
  // b(v, .) = 0 componentwise.
  for (int j = 0; j < 3; ++j) {
    cd s = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (i == j) continue;
      const unsigned m = (1u << i) | (1u << j);
      const double sign = i < j ? 1.0 : -1.0;
      s += sign * cd(b.re[m], b.im[m]) * v[i];
    }
    EXPECT_LT(std::abs(s), 1e-13);
  }
}

TEST(EtaKernel, RandomPairsHaveOneDimensionalKernel) {
  Rng g(2);
  for (int i = 0; i < 100; ++i) {
    const auto f = canonical::fold_data(uniform(g, -2, 2), uniform(g, 0.2, 3), uniform(g, 0, 2 * M_PI));
    const cd z = std::polar(uniform(g, 0, 3), uniform(g, 0, 2 * M_PI));
    EXPECT_NO_THROW(eta_kernel(f, z));
  }
}

TEST(EtaKernel, AntipodalKernelIsConjugate) {
  Rng g(3);
  for (int i = 0; i < 50; ++i) {
    const auto f = canonical::fold_data(uniform(g, -2, 2), uniform(g, 0.2, 3), uniform(g, 0, 2 * M_PI));
    const cd z = std::polar(uniform(g, 0.1, 3), uniform(g, 0, 2 * M_PI));
    const auto k = eta_kernel(f, z), ka = eta_kernel(f, -1.0 / std::conj(z));
    EXPECT_NEAR(line_alignment(ka.direction, k.direction.conjugate()), 1.0, 1e-10);
  }
}

TEST(EtaKernel, ZeroFormIsRankAmbiguous) {
  canonical::FoldData f;
  f.phi = f.eta1 = f.eta2 = Form<3, double>(1);
  f.volume = 1.0;  // lie about the volume to reach the rank test
  EXPECT_THROW(eta_kernel(f, 0.5), RankAmbiguityError);
  f.volume = 0.0;
  EXPECT_THROW(eta_kernel(f, 0.5), DegeneracyError);
}

TEST(GibbonsHawking, SingleCentreHasNoFold) {
  const GibbonsHawkingData g({0.0}, {1.0});
  Rng r(4);
  for (int i = 0; i < 200; ++i) {
    const auto f = gh_forms(g, off_axis(r, 3));
    EXPECT_GT(f.V, 0.0);
    EXPECT_LT(f.identity_residual, 1e-12 * (1 + f.V));
    EXPECT_LT(f.closedness, 1e-10);
  }
}

TEST(GibbonsHawking, DipoleFoldsOnBisectorPlane) {
  const double a = 0.8;
  const GibbonsHawkingData g({-a, a}, {-1.0, 1.0});
  Rng r(5);
  for (int i = 0; i < 20; ++i) {
    Point<4> p = off_axis(r, 2);
    p[2] = 0.0;
    EXPECT_LT(std::abs(g.potential(p)), 1e-15);
  }
  const auto line = gh_line(g, {0.5, 0.2, -1.0, 0.0}, {0.5, 0.2, 1.0, 0.0}, 21);
  EXPECT_LT(line.front().omega1_sq, 0.0);
  EXPECT_GT(line.back().omega1_sq, 0.0);
  EXPECT_LT(std::abs(line[10].V), 1e-15);
  for (const auto& s : line) EXPECT_NEAR(s.omega1_sq, 2 * s.V, 1e-12);
}

TEST(GibbonsHawking, EguchiHansonHasNoFold) {
  const GibbonsHawkingData g({-1.0, 1.0}, {1.0, 1.0});
  Rng r(6);
  for (int i = 0; i < 200; ++i) EXPECT_GT(gh_forms(g, off_axis(r, 4)).V, 0.0);
}

TEST(GibbonsHawking, IdentitiesAtRandomPoints) {
  const GibbonsHawkingData g({-0.8, 0.8}, {-1.0, 1.0});
  Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    const Point<4> p = off_axis(r, 2);
    const auto f = gh_forms(g, p);
    EXPECT_LT(f.identity_residual, 1e-12 * (1 + std::abs(f.V)));
    EXPECT_NEAR(volume_coefficient(wedge(f.omega[1], f.omega[1])), 2 * f.V, 1e-12 * (1 + std::abs(f.V)));
    EXPECT_LT(f.closedness, 1e-9);
  }
}

TEST(GibbonsHawking, MonopoleEquation) {
  Rng r(8);
  const GibbonsHawkingData one({0.0}, {1.0});
  const GibbonsHawkingData three({-1.0, 0.2, 1.5}, {1.0, -1.0, 0.5});
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    worst = std::max(worst, gh_monopole_check(one, off_axis(r, 3)));
    worst = std::max(worst, gh_monopole_check(three, off_axis(r, 3)));
  }
  EXPECT_LT(worst, 1e-10);
  double corrupted = 0.0;
  for (int i = 0; i < 20; ++i) corrupted = std::max(corrupted, gh_monopole_check(three, off_axis(r, 2), 1));
  EXPECT_GE(corrupted, 1e-2);
}

TEST(GibbonsHawking, Errors) {
  const GibbonsHawkingData g({0.0, 1.0}, {1.0, -1.0});
  EXPECT_THROW(g.potential(Point<4>{0.0, 0.0, 1.0, 0.0}), DomainError);
  EXPECT_THROW(gh_forms(g, {1e-9, 0.0, 0.5, 0.0}), DomainError);
  EXPECT_THROW(GibbonsHawkingData({0.0}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(gh_line(g, {1, 0, 0, 0}, {1, 0, 1, 0}, 1), std::invalid_argument);
}
