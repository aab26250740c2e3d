#pragma once

// First-order deformations of the canonical triple in the disc chart
// (x, y, u1, u2), w = u1 + i u2, driven by a holomorphic differential a(z):
//   X^c = a y^{2m-2} wbar^{m-1} d/dw,   X = X^c + conj(X^c).
// With that scale X = Re F d/du1 + Im F d/du2, F = a y^{2m-2} wbar^{m-1},
// and L_X (omega2 + i omega3) = d(F dz).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hkfold/canonical.hpp"
#include "hkfold/errors.hpp"
#include "hkfold/forms.hpp"
#include "hkfold/ode.hpp"
#include "hkfold/quadrature.hpp"

namespace hkfold::deform {

template <class T>
Complex<T> eval_poly(const std::vector<std::complex<double>>& c, const Complex<T>& z) {
  Complex<T> r(T(0.0), T(0.0));
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + Complex<T>(T(it->real()), T(it->imag()));
  return r;
}

/// Complex coefficient F of X^c = F d/dw.
struct DeformationField {
  int m = 2;
  std::vector<std::complex<double>> a{1.0};  ///< polynomial coefficients of a(z)

  DeformationField() = default;
  DeformationField(int m_, std::vector<std::complex<double>> a_) : m(m_), a(std::move(a_)) {
    if (m < 2) throw std::invalid_argument("DeformationField: m must be >= 2");
  }

  template <class T>
  Complex<T> coefficient(const std::array<T, 4>& c) const {
    const Complex<T> az = eval_poly(a, Complex<T>(c[0], c[1]));
    const Complex<T> wbar(c[2], -c[3]);
    return az * cpow(wbar, m - 1) * pow(c[1], 2 * m - 2);
  }

  template <class T>
  std::array<T, 4> operator()(const std::array<T, 4>& c) const {
    return realify(coefficient(c));
  }

  /// X := X^c + conj(X^c) for X^c = F d/dw.
  template <class T>
  static std::array<T, 4> realify(const Complex<T>& F) {
    return {T(0.0), T(0.0), F.re, F.im};
  }
};

/// w d/dw, realified the same way; not admissible, used as a control.
struct EulerField {
  template <class T>
  std::array<T, 4> operator()(const std::array<T, 4>& c) const {
    return {T(0.0), T(0.0), c[2], c[3]};
  }
};

inline void check_point(const Point<4>& p) {
  const double y = p[1], r = std::hypot(p[2], p[3]);
  if (!(y > 0.0)) throw DomainError("deform: y <= 0");
  if (!(y * r < 1.0)) throw DomainError("deform: point outside the disc y|w| < 1");
}

namespace detail {
template <class VF, class Field>
Form<4, Jet<4>> lie_jets(const VF& X, const Field& w, const Point<4>& p) {
  const auto c = variables<4>(p);
  return lie_of<4>(X(c), w(c));
}

inline auto omega2_field() {
  return [](const auto& c) { return canonical::DiscOmegaC{}(c).re; };
}
inline auto omega3_field() {
  return [](const auto& c) { return canonical::DiscOmegaC{}(c).im; };
}
}  // namespace detail

/// L_X omega_i as jet-valued forms (one derivative order left).
template <class VF>
std::array<Form<4, Jet<4>>, 3> lie_triple_jets(const VF& X, const Point<4>& p) {
  check_point(p);
  return {detail::lie_jets(X, canonical::DiscOmega1{}, p), detail::lie_jets(X, detail::omega2_field(), p),
          detail::lie_jets(X, detail::omega3_field(), p)};
}

template <class VF>
std::array<Form<4, double>, 3> lie_triple(const VF& X, const Point<4>& p) {
  const auto j = lie_triple_jets(X, p);
  return {value(j[0]), value(j[1]), value(j[2])};
}

/// d(F dz) by jets: the direct form of L_X(omega2 + i omega3).
inline CForm<4, double> lie_c_direct(const DeformationField& f, const Point<4>& p) {
  auto pot = [&f](const auto& c) {
    using T = std::decay_t<decltype(c[0])>;
    return wedge(cscalar<4, T>(f.coefficient(c)), canonical::dz_form<T>());
  };
  return exterior_derivative<4>(pot, p);
}

/// (m-1) a y^{2m-3} wbar^{m-2} (y dwbar^dz + i wbar dzbar^dz).
inline CForm<4, double> lie_c_closed_form(const DeformationField& f, const Point<4>& p) {
  using C = Complex<double>;
  using F = Form<4, double>;
  const double y = p[1];
  const C az = eval_poly(f.a, C(p[0], p[1]));
  const C wbar(p[2], -p[3]);
  const C pref = az * cpow(wbar, f.m - 2) * ((f.m - 1) * std::pow(y, 2 * f.m - 3));
  const CForm<4, double> dz = canonical::dz_form<double>();
  const CForm<4, double> dzbar{F::basis(0), -F::basis(1)};
  const CForm<4, double> dwbar{F::basis(2), -F::basis(3)};
  const CForm<4, double> inner =
      C(y, 0.0) * wedge(dwbar, dz) + wedge(cscalar<4, double>(C(0.0, 1.0) * wbar), wedge(dzbar, dz));
  return pref * inner;
}

struct AsdReport {
  std::array<std::array<double, 3>, 3> residual{};  ///< |L_X omega_i ^ omega_j| / |omega1^2|
  double max() const {
    double r = 0.0;
    for (const auto& row : residual)
      for (double v : row) r = std::max(r, v);
    return r;
  }
};

template <class VF>
AsdReport asd_check(const VF& X, const Point<4>& p) {
  const auto L = lie_triple(X, p);
  const auto W = canonical::triple(canonical::DiscPoint{p[0], p[1], p[2], p[3]});
  const double vol = std::abs(wedge(W[0], W[0]).top());
  AsdReport r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.residual[i][j] = std::abs(wedge(L[i], W[j]).top()) / vol;
  return r;
}

/// max |d L_X omega_i|.
template <class VF>
double lie_closedness(const VF& X, const Point<4>& p) {
  const auto L = lie_triple_jets(X, p);
  double r = 0.0;
  for (const auto& l : L) r = std::max(r, max_abs(value(d(l))));
  return r;
}

/// First-order change of omega_i ^ omega_j under omega2,3 -> omega2,3 + eps
/// L_X omega2,3 with omega1 fixed; the symmetric matrix of
/// dot(omega_i) ^ omega_j + omega_i ^ dot(omega_j), relative to |omega1^2|.
template <class VF>
double first_order_identity_defect(const VF& X, const Point<4>& p) {
  const auto L = lie_triple(X, p);
  const auto W = canonical::triple(canonical::DiscPoint{p[0], p[1], p[2], p[3]});
  const std::array<Form<4, double>, 3> dot{Form<4, double>(2), L[1], L[2]};
  const double vol = std::abs(wedge(W[0], W[0]).top());
  double r = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r = std::max(r, std::abs((wedge(dot[i], W[j]) + wedge(W[i], dot[j])).top()) / vol);
  return r;
}

/// Flow of X for time eps from p by RK4 substeps, as jets in p.
template <class VF>
std::array<Jet<4>, 4> flow(const VF& X, const Point<4>& p, double eps, int substeps = 4) {
  std::array<Jet<4>, 4> s = variables<4>(p);
  auto rhs = [&X](double, const std::array<Jet<4>, 4>& q) { return X(q); };
  for (int i = 0; i < substeps; ++i) s = rk4_step<4>(rhs, 0.0, s, eps / substeps);
  return s;
}

/// phi_eps^* w - w at p for a form field w.
template <class VF, class Field>
Form<4, double> flow_difference(const VF& X, const Field& w, const Point<4>& p, double eps) {
  const auto s = flow(X, p, eps);
  Point<4> q;
  std::array<std::array<double, 4>, 4> J;
  for (int i = 0; i < 4; ++i) {
    q[i] = s[i].value;
    for (int j = 0; j < 4; ++j) J[i][j] = s[i].grad[j];
  }
  return pullback<4, 4, double>(w(q), J) - w(p);
}

/// Variation of the fibre moment int w^k omega1|fibre under X:
/// int X(w^k) omega1|fibre over the disc y|w| < 1, with |w| = sin(s)/y.
inline std::complex<double> moment_variation_direct(const DeformationField& f, int k, double x, double y,
                                                    int radial = 48) {
  if (k < 1) throw std::invalid_argument("moment_variation_direct: k must be >= 1");
  const Rule q = gauss_legendre(radial, 0.0, std::numbers::pi / 2);
  const int na = 2 * (k + f.m) + 4;
  const double dth = 2.0 * std::numbers::pi / na;
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double s = q.nodes[i], rho = std::sin(s) / y, drho = std::cos(s) / y;
    for (int j = 0; j < na; ++j) {
      const Point<4> p{x, y, rho * std::cos(j * dth), rho * std::sin(j * dth)};
      const auto c = variables<4>(p);
      // X(w^k) = d(w^k)(X)
      const Complex<Jet<4>> wk = cpow(Complex<Jet<4>>(c[2], c[3]), k);
      const auto X = f(p);
      const std::complex<double> Xwk(wk.re.grad[2] * X[2] + wk.re.grad[3] * X[3],
                                     wk.im.grad[2] * X[2] + wk.im.grad[3] * X[3]);
      const double area = canonical::DiscOmega1{}(p).at({2, 3});
      sum += q.weights[i] * dth * rho * drho * area * Xwk;
    }
  }
  return sum;
}

}  // namespace hkfold::deform
