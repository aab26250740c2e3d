#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "hkfold/forms.hpp"
#include "form_oracles.hpp"
#include "support.hpp"

using hkfold::CForm;
using hkfold::Form;
using hkfold::Jet;
using namespace testing_support;

namespace {

struct RandomVectorField {
  std::array<RandomQuadratic<4>, 4> c;
  static RandomVectorField draw(Rng& g) {
    RandomVectorField v;
    for (auto& q : v.c) q = RandomQuadratic<4>::draw(g);
    return v;
  }
  template <class T>
  std::array<T, 4> operator()(const std::array<T, 4>& x) const {
    return {c[0](x), c[1](x), c[2](x), c[3](x)};
  }
};

}  // namespace

TEST(Wedge, VolumeOrientation) {
  const auto a = wedge(Form<4>::basis(0), Form<4>::basis(1));
  const auto b = wedge(Form<4>::basis(2), Form<4>::basis(3));
  EXPECT_EQ(wedge(a, b).top(), 1.0);
  EXPECT_EQ(wedge(b, a).top(), 1.0);
  EXPECT_EQ(wedge(Form<4>::basis(1), Form<4>::basis(0)).at({0, 1}), -1.0);
}

TEST(Wedge, OneFormSquaresToZero) {
  Rng g(1);
  for (int n = 0; n < 100; ++n) {
    const auto a = random_form<4>(g, 1);
    EXPECT_LE(hkfold::max_abs(wedge(a, a)), 1e-15);
  }
}

TEST(Wedge, MatchesBruteForceAntisymmetrization) {
  Rng g(2);
  for (int n = 0; n < 200; ++n) {
    const auto a = random_form<4>(g, 1);
    const auto b = random_form<4>(g, 2);
    const auto w = wedge(a, b);
    for (unsigned m = 0; m < 16; ++m) {
      if (!w.in_range(m)) continue;
      std::vector<int> I;
      for (int i = 0; i < 4; ++i)
        if (m & (1u << i)) I.push_back(i);
      EXPECT_NEAR(w[m], brute_wedge(a, b, I), 1e-14);
    }
    const auto c = random_form<4>(g, 2);
    EXPECT_NEAR(wedge(b, c).top(), brute_wedge(b, c, {0, 1, 2, 3}), 1e-14);
  }
}

TEST(Wedge, GradedCommutativeAndAssociative) {
  Rng g(3);
  for (int n = 0; n < 300; ++n) {
    const int p = 1 + n % 2, q = 1 + (n / 2) % 2;
    const auto a = random_form<4>(g, p), b = random_form<4>(g, q), c = random_form<4>(g, 1);
    const double s = ((p * q) % 2) ? -1.0 : 1.0;
    EXPECT_LE(hkfold::max_abs(wedge(a, b) - s * wedge(b, a)), 1e-13);
    EXPECT_LE(hkfold::max_abs(wedge(wedge(a, b), c) - wedge(a, wedge(b, c))), 1e-13);
  }
}

TEST(Wedge, DegreeAboveChartIsZero) {
  const auto a = wedge(wedge(Form<3>::basis(0), Form<3>::basis(1)), Form<3>::basis(2));
  const auto z = wedge(a, Form<3>::basis(0));
  EXPECT_EQ(z.degree(), 4);
  EXPECT_EQ(hkfold::max_abs(z), 0.0);
}

TEST(Wedge, MonomialRejectsRepeatedIndex) {
  EXPECT_EQ(hkfold::max_abs(Form<4>::monomial(2.0, {1, 1})), 0.0);
  EXPECT_EQ(Form<4>::monomial(2.0, {3, 1})[0b1010], -2.0);
  EXPECT_THROW(Form<3>::monomial(1.0, {0, 3}), std::out_of_range);
  EXPECT_THROW(Form<4>(1) + Form<4>(2), std::invalid_argument);
}

TEST(Exterior, DOfCoordinateOneForm) {
  auto f = [](const auto& c) {
    using T = std::decay_t<decltype(c[0])>;
    return Form<4, T>::monomial(c[0], {1});
  };
  const auto r = hkfold::exterior_derivative<4>(f, {0.3, 0.1, -2.0, 5.0});
  EXPECT_EQ(r.at({0, 1}), 1.0);
  EXPECT_EQ(hkfold::max_abs(r - wedge(Form<4>::basis(0), Form<4>::basis(1))), 0.0);
}

TEST(Exterior, DSquaredVanishes) {
  Rng g(4);
  for (int n = 0; n < 200; ++n) {
    const auto field = RandomFormField::draw(g, n % 3);
    const auto p = uniform_point<4>(g, -1.5, 1.5);
    const auto w = hkfold::eval_form<4>(field, p);
    EXPECT_LE(hkfold::max_abs(value(d(d(w)))), 1e-13);
  }
  const auto f = RandomCubic<4>::draw(g);
  const auto df = d(hkfold::eval<4>(f, {0.1, 0.2, 0.3, 0.4}));
  EXPECT_LE(hkfold::max_abs(value(d(df))), 1e-13);
}

TEST(Exterior, LeibnizRule) {
  Rng g(5);
  for (int n = 0; n < 100; ++n) {
    const auto a = RandomFormField::draw(g, 1), b = RandomFormField::draw(g, 2);
    const auto p = uniform_point<4>(g, -1, 1);
    const auto wa = hkfold::eval_form<4>(a, p), wb = hkfold::eval_form<4>(b, p);
    const auto lhs = value(d(wedge(wa, wb)));
    const auto rhs = wedge(value(d(wa)), value(wb)) - wedge(value(wa), value(d(wb)));
    EXPECT_LE(hkfold::max_abs(lhs - rhs), 1e-12);
  }
}

TEST(Interior, BasisContraction) {
  const auto w = wedge(Form<4>::basis(0), Form<4>::basis(1));
  const auto r = interior(std::array<double, 4>{1, 0, 0, 0}, w);
  EXPECT_EQ(hkfold::max_abs(r - Form<4>::basis(1)), 0.0);
}

TEST(Interior, SquareVanishesAndLinear) {
  Rng g(6);
  for (int n = 0; n < 200; ++n) {
    const auto w = random_form<4>(g, 2 + n % 3);
    const auto X = uniform_point<4>(g, -1, 1);
    EXPECT_LE(hkfold::max_abs(interior(X, interior(X, w))), 1e-15);
    const double f = uniform(g, -3, 3);
    EXPECT_LE(hkfold::max_abs(interior(X, f * w) - f * interior(X, w)), 1e-14);
  }
}

TEST(Lie, TranslationOfCoordinateForm) {
  auto X = [](const auto& c) {
    using T = std::decay_t<decltype(c[0])>;
    return std::array<T, 4>{T(1.0), T(0.0), T(0.0), T(0.0)};
  };
  auto w = [](const auto& c) {
    using T = std::decay_t<decltype(c[0])>;
    return Form<4, T>::monomial(c[0], {1, 2});
  };
  const auto r = hkfold::lie<4>(X, w, {0.2, 0.4, 0.6, 0.8});
  EXPECT_EQ(hkfold::max_abs(r - Form<4>::monomial(1.0, {1, 2})), 0.0);
}

TEST(Lie, CommutesWithD) {
  Rng g(8);
  for (int n = 0; n < 200; ++n) {
    const auto field = RandomFormField::draw(g, 1 + n % 2);
    const auto X = RandomVectorField::draw(g);
    const auto p = uniform_point<4>(g, -1, 1);
    const auto c = hkfold::variables<4>(p);
    const auto w = field(c);
    const auto x = X(c);
    const auto a = value(hkfold::lie_of<4>(x, d(w)));
    const auto b = value(d(hkfold::lie_of<4>(x, w)));
    EXPECT_LE(hkfold::max_abs(a - b), 1e-12);
  }
}

TEST(Lie, CartanMatchesFlowFiniteDifference) {
  Rng g(9);
  for (int n = 0; n < 20; ++n) {
    const auto field = RandomFormField::draw(g, 2);
    const auto X = RandomVectorField::draw(g);
    const auto p = uniform_point<4>(g, -0.5, 0.5);
    auto pulled = [&](double s) {
      auto c = hkfold::variables<4>(p);
      const int steps = 4;
      for (int k = 0; k < steps; ++k) {
        const double h = s / steps;
        auto add = [](std::array<Jet<4>, 4> a, double t, const std::array<Jet<4>, 4>& b) {
          for (int i = 0; i < 4; ++i) a[i] = a[i] + t * b[i];
          return a;
        };
        const auto k1 = X(c);
        const auto k2 = X(add(c, h / 2, k1));
        const auto k3 = X(add(c, h / 2, k2));
        const auto k4 = X(add(c, h, k3));
        for (int i = 0; i < 4; ++i) c[i] = c[i] + h / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
      std::array<double, 4> q;
      std::array<std::array<double, 4>, 4> J;
      for (int i = 0; i < 4; ++i) {
        q[i] = c[i].value;
        for (int j = 0; j < 4; ++j) J[i][j] = c[i].grad[j];
      }
      return hkfold::pullback<4, 4, double>(field(q), J);
    };
    const double h = 1e-5;
    const auto fd = (1.0 / (2 * h)) * (pulled(h) - pulled(-h));
    const auto cartan = hkfold::lie<4>(X, field, p);
    EXPECT_LE(hkfold::max_abs(fd - cartan), 1e-4 * std::max(1.0, hkfold::max_abs(cartan)));
  }
}

TEST(Restrict, CoordinatePlaneKillsNormalDirection) {
  auto w = [](const auto& c) {
    using T = std::decay_t<decltype(c[0])>;
    return Form<4, T>::monomial(T(1.0) + c[1], {2, 0});
  };
  auto incl = [](const auto& s) {
    using T = std::decay_t<decltype(s[0])>;
    return std::array<T, 4>{s[0], s[1], T(0.0), s[2]};
  };
  const auto r = hkfold::restrict_form<3, 4>(w, incl, {0.1, 0.2, 0.3});
  EXPECT_EQ(hkfold::max_abs(value(r)), 0.0);
}

TEST(Restrict, CommutesWithD) {
  Rng g(10);
  for (int n = 0; n < 200; ++n) {
    const auto field = RandomFormField::draw(g, 1 + n % 2);
    std::array<RandomQuadratic<3>, 4> map;
    for (auto& q : map) q = RandomQuadratic<3>::draw(g);
    auto incl = [&](const auto& s) {
      using T = std::decay_t<decltype(s[0])>;
      return std::array<T, 4>{map[0](s), map[1](s), map[2](s), map[3](s)};
    };
    const auto s = uniform_point<3>(g, -1, 1);
    const auto lhs = value(d(hkfold::restrict_form<3, 4>(field, incl, s)));
    const auto J = hkfold::jacobian<3, 4>(incl, s);
    const auto at = incl(s);
    const auto dw = hkfold::exterior_derivative<4>(field, at);
    const auto rhs = hkfold::pullback<3, 4, double>(dw, J);
    EXPECT_LE(hkfold::max_abs(lhs - rhs), 1e-12 * std::max(1.0, hkfold::max_abs(rhs)));
  }
}

TEST(ComplexForm, WedgeDistributes) {
  Rng g(12);
  const CForm<4> a{random_form<4>(g, 1), random_form<4>(g, 1)};
  const CForm<4> b{random_form<4>(g, 1), random_form<4>(g, 1)};
  const auto w = wedge(a, b);
  EXPECT_LE(hkfold::max_abs(w.re - (wedge(a.re, b.re) - wedge(a.im, b.im))), 1e-15);
  EXPECT_LE(hkfold::max_abs(w.im - (wedge(a.re, b.im) + wedge(a.im, b.re))), 1e-15);
  const auto ab = wedge(a, a.conj());
  EXPECT_LE(hkfold::max_abs(ab.re), 1e-15);
}
