#pragma once

// Canonical folded hyperkahler model over the hyperbolic plane (curvature -1).
//
// Equator chart (x, y, x3, psi): (x1, x2) = sqrt(1 - x3^2)(cos psi, sin psi),
// w = (x1 + i x2)/y, fold at x3 = 0.
// Disc chart (x, y, u1, u2): w = u1 + i u2, u3 = sqrt(1/y^2 - |w|^2) > 0,
// covering the x3 > 0 sheet including w = 0.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "hkfold/errors.hpp"
#include "hkfold/forms.hpp"
#include "hkfold/jet.hpp"
#include "hkfold/ode.hpp"

namespace hkfold::canonical {

struct EquatorPoint {
  double x = 0, y = 1, x3 = 0, psi = 0;
  Point<4> coords() const { return {x, y, x3, psi}; }
};

struct DiscPoint {
  double x = 0, y = 1, u1 = 0, u2 = 0;
  Point<4> coords() const { return {x, y, u1, u2}; }
  double u3() const { return std::sqrt(1.0 / (y * y) - u1 * u1 - u2 * u2); }
};

inline void validate(const EquatorPoint& p) {
  if (!(p.y > 0.0)) throw DomainError("equator chart: y must be > 0");
  if (!(std::abs(p.x3) < 1.0)) throw DomainError("equator chart: |x3| must be < 1 (pole)");
}

inline void validate(const DiscPoint& p) {
  if (!(p.y > 0.0)) throw DomainError("disc chart: y must be > 0");
  if (!(p.y * p.y * (p.u1 * p.u1 + p.u2 * p.u2) < 1.0))
    throw DomainError("disc chart: y^2 |w|^2 must be < 1");
}

/// Underlying disc-chart point of an equator-chart point with x3 > 0.
inline DiscPoint to_disc(const EquatorPoint& p) {
  if (!(p.x3 > 0.0)) throw DomainError("disc chart covers x3 > 0 only");
  const double s = std::sqrt(1.0 - p.x3 * p.x3);
  return {p.x, p.y, s * std::cos(p.psi) / p.y, s * std::sin(p.psi) / p.y};
}

/// Inclusion (x, y, x3, psi) -> (x, y, u1, u2), usable with jets.
struct EquatorToDisc {
  template <class T>
  std::array<T, 4> operator()(const std::array<T, 4>& c) const {
    const T s = sqrt(T(1.0) - c[2] * c[2]);
    return {c[0], c[1], s * cos(c[3]) / c[1], s * sin(c[3]) / c[1]};
  }
};

// ---- equator chart fields ----

/// Potential (x3/y) dx - x3 dpsi of omega1.
struct EquatorOmega1Potential {
  template <class T>
  Form<4, T> operator()(const std::array<T, 4>& c) const {
    Form<4, T> r(1);
    r[1u << 0] = c[2] / c[1];
    r[1u << 3] = -c[2];
    return r;
  }
};

/// omega1 = (x3/y^2) dx^dy - (1/y) dx^dx3 - dx3^dpsi.
struct EquatorOmega1 {
  template <class T>
  Form<4, T> operator()(const std::array<T, 4>& c) const {
    return Form<4, T>::monomial(c[2] / (c[1] * c[1]), {0, 1}) -
           Form<4, T>::monomial(T(1.0) / c[1], {0, 2}) - Form<4, T>::monomial(T(1.0), {2, 3});
  }
};

template <class T>
Complex<T> equator_w(const std::array<T, 4>& c) {
  const T s = sqrt(T(1.0) - c[2] * c[2]);
  return {s * cos(c[3]) / c[1], s * sin(c[3]) / c[1]};
}

template <class T>
CForm<4, T> dz_form() {
  return {Form<4, T>::basis(0), Form<4, T>::basis(1)};
}

/// Holomorphic potential w dz of omega2 + i omega3.
struct EquatorHolomorphicPotential {
  template <class T>
  CForm<4, T> operator()(const std::array<T, 4>& c) const {
    return wedge(cscalar<4, T>(equator_w(c)), dz_form<T>());
  }
};

/// omega2 + i omega3 = dw ^ dz with dw expanded by hand.
struct EquatorOmegaC {
  template <class T>
  CForm<4, T> operator()(const std::array<T, 4>& c) const {
    const T y = c[1], x3 = c[2];
    const T s = sqrt(T(1.0) - x3 * x3);
    const Complex<T> e{cos(c[3]), sin(c[3])};
    const Complex<T> wy = e * (-s / (y * y));
    const Complex<T> w3 = e * (-x3 / (y * s));
    const Complex<T> wpsi = e * Complex<T>(T(0.0), s / y);
    CForm<4, T> dw(1);
    dw.re[1u << 1] = wy.re;
    dw.im[1u << 1] = wy.im;
    dw.re[1u << 2] = w3.re;
    dw.im[1u << 2] = w3.im;
    dw.re[1u << 3] = wpsi.re;
    dw.im[1u << 3] = wpsi.im;
    return wedge(dw, dz_form<T>());
  }
};

// ---- disc chart fields ----

/// Potential u3 (dx - y dphi), phi = arg w; singular at w = 0.
struct DiscOmega1Potential {
  template <class T>
  Form<4, T> operator()(const std::array<T, 4>& c) const {
    const T y = c[1], u1 = c[2], u2 = c[3];
    const T u3 = sqrt(T(1.0) / (y * y) - u1 * u1 - u2 * u2);
    const T r2 = u1 * u1 + u2 * u2;
    if (value_of(r2) == 0.0) throw DomainError("disc potential: arg w undefined at w = 0");
    Form<4, T> r(1);
    r[1u << 0] = u3;
    // dphi = (u1 du2 - u2 du1)/|w|^2
    r[1u << 2] = u3 * y * u2 / r2;
    r[1u << 3] = -(u3 * y * u1 / r2);
    return r;
  }
};

/// Smooth expansion of omega1 in the disc chart, valid at w = 0.
struct DiscOmega1 {
  template <class T>
  Form<4, T> operator()(const std::array<T, 4>& c) const {
    const T y = c[1], u1 = c[2], u2 = c[3];
    const T S = sqrt(T(1.0) - y * y * (u1 * u1 + u2 * u2));
    Form<4, T> r(2);
    r[0b0011] = T(1.0) / (y * y * S);
    r[0b0101] = y * u1 / S;
    r[0b1001] = y * u2 / S;
    r[0b0110] = -(y * u2 / S);
    r[0b1010] = y * u1 / S;
    r[0b1100] = y * y / S;
    return r;
  }
};

struct DiscHolomorphicPotential {
  template <class T>
  CForm<4, T> operator()(const std::array<T, 4>& c) const {
    return wedge(cscalar<4, T>(Complex<T>(c[2], c[3])), dz_form<T>());
  }
};

/// (du1 + i du2) ^ (dx + i dy).
struct DiscOmegaC {
  template <class T>
  CForm<4, T> operator()(const std::array<T, 4>&) const {
    const CForm<4, T> dw{Form<4, T>::basis(2), Form<4, T>::basis(3)};
    return wedge(dw, dz_form<T>());
  }
};

// ---- triples ----

struct Triple {
  std::array<Form<4, double>, 3> w;

  const Form<4, double>& operator[](int i) const { return w[i]; }
};

/// omega1 = d(potential) and omega2 + i omega3 = d(w dz), both by jets.
inline Triple triple(const EquatorPoint& p) {
  validate(p);
  const auto c = p.coords();
  const Form<4, double> w1 = exterior_derivative<4>(EquatorOmega1Potential{}, c);
  const CForm<4, double> wc = exterior_derivative<4>(EquatorHolomorphicPotential{}, c);
  return {{w1, wc.re, wc.im}};
}

inline Triple triple(const DiscPoint& p) {
  validate(p);
  const auto c = p.coords();
  const Form<4, double> w1 = DiscOmega1{}(c);
  const CForm<4, double> wc = exterior_derivative<4>(DiscHolomorphicPotential{}, c);
  return {{w1, wc.re, wc.im}};
}

struct IdentityResidual {
  double max_residual = 0.0;  ///< max |w_i ^ w_j - delta_ij nu| / |nu|
  double nu = 0.0;            ///< top coefficient of w1 ^ w1
  std::array<std::array<double, 3>, 3> gram{};
};

inline IdentityResidual verify_identities(const Triple& t) {
  IdentityResidual r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.gram[i][j] = wedge(t[i], t[j]).top();
  r.nu = r.gram[0][0];
  const double scale = std::abs(r.nu) > 0.0 ? std::abs(r.nu) : 1.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.max_residual = std::max(r.max_residual, std::abs(r.gram[i][j] - (i == j ? r.nu : 0.0)) / scale);
  return r;
}

template <class P>
IdentityResidual verify_identities(const P& p) {
  return verify_identities(triple(p));
}

struct Transversality {
  std::vector<double> x3;
  std::vector<double> ratio;  ///< nu / x3
  double limit = 0.0;
  double spread = 0.0;        ///< (max - min)/|mean| of the ratios
};

/// Samples nu/x3 as x3 -> 0 at fixed (x, y, psi).
inline Transversality fold_transversality(double x, double y, double psi, int levels = 6) {
  Transversality t;
  double lo = 1e300, hi = -1e300, sum = 0.0;
  for (int k = 0; k < levels; ++k) {
    const double x3 = std::pow(10.0, -2.0 - k);
    const double ratio = verify_identities(EquatorPoint{x, y, x3, psi}).nu / x3;
    t.x3.push_back(x3);
    t.ratio.push_back(ratio);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    sum += ratio;
  }
  const double mean = sum / levels;
  t.limit = t.ratio.back();
  t.spread = (hi - lo) / std::abs(mean);
  return t;
}

// ---- metric ----

inline Eigen::Matrix4d matrix_of(const Form<4, double>& w) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      m(i, j) = w[(1u << i) | (1u << j)];
      m(j, i) = -m(i, j);
    }
  return m;
}

struct Metric {
  Eigen::Matrix4d g;
  Eigen::Matrix4d E;             ///< Omega3^{-1} Omega2
  double quaternion_residual;    ///< max |E^2 + I|
};

namespace detail {
inline Metric raw_metric(const Triple& t, double sign) {
  const Eigen::Matrix4d O1 = matrix_of(t[0]), O2 = matrix_of(t[1]), O3 = matrix_of(t[2]);
  const double det = O3.determinant();
  if (std::abs(det) < 1e-12) throw DegeneracyError("reconstruct_metric: |det omega3| below 1e-12 (near fold)");
  Metric m;
  m.E = O3.inverse() * O2;
  m.quaternion_residual = (m.E * m.E + Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
  const Eigen::Matrix4d g = -m.E.transpose() * O1;
  m.g = sign * 0.5 * (g + g.transpose());
  return m;
}
}  // namespace detail

/// Overall sign making g positive-definite at (0, 1, 0.5, 0).
inline double metric_sign() {
  static const double s = [] {
    const Metric m = detail::raw_metric(triple(EquatorPoint{0.0, 1.0, 0.5, 0.0}), 1.0);
    return m.g(0, 0) > 0.0 ? 1.0 : -1.0;
  }();
  return s;
}

/// Metric determined by a triple: g = -omega1(E., .), E = Omega3^{-1} Omega2.
inline Metric reconstruct_metric(const Triple& t) { return detail::raw_metric(t, metric_sign()); }

// ---- fold ----

/// Inclusion of the fold x3 = 0 with coordinates (x, y, psi).
struct FoldInclusion {
  template <class T>
  std::array<T, 4> operator()(const std::array<T, 3>& s) const {
    return {s[0], s[1], T(0.0), s[2]};
  }
};

struct FoldData {
  Form<3, double> phi, eta1, eta2;
  Form<3, double> omega2, omega3;  ///< restrictions to the fold
  double contact = 0.0;            ///< phi ^ dphi, coefficient of dx^dy^dpsi
  double volume = 0.0;             ///< eta1 ^ eta2 ^ phi
};

namespace detail {
/// Writes beta = eta ^ phi with eta in span(dx, dy), phi = dx - y dpsi.
inline Form<3, double> divide_by_phi(const Form<3, double>& beta, const Form<3, double>& phi, double y) {
  Form<3, double> eta(1);
  eta[0b001] = -beta[0b101] / y;
  eta[0b010] = -beta[0b011];
  const Form<3, double> back = wedge(eta, phi) - beta;
  if (max_abs(back) > 1e-12 * std::max(1.0, max_abs(beta)))
    throw std::logic_error("fold_data: restricted form is not divisible by phi");
  return eta;
}
}  // namespace detail

inline FoldData fold_data(double x, double y, double psi) {
  if (!(y > 0.0)) throw DomainError("fold: y must be > 0");
  const Point<3> s{x, y, psi};
  const CForm<3, Jet<3>> r = restrict_cform<3, 4>(EquatorOmegaC{}, FoldInclusion{}, s);
  FoldData f;
  f.omega2 = value(r.re);
  f.omega3 = value(r.im);
  // phi = dx - y dpsi as a jet form so that dphi is available.
  const auto c = variables<3>(s);
  Form<3, Jet<3>> phij(1);
  phij[0b001] = Jet<3>(1.0);
  phij[0b100] = -c[1];
  f.phi = value(phij);
  f.contact = wedge(f.phi, value(d(phij))).top();
  f.eta1 = detail::divide_by_phi(f.omega2, f.phi, y);
  f.eta2 = detail::divide_by_phi(f.omega3, f.phi, y);
  f.volume = wedge(wedge(f.eta1, f.eta2), f.phi).top();
  if (f.contact == 0.0 || f.volume == 0.0) throw std::logic_error("fold_data: degenerate contact data");
  return f;
}

/// Kernel direction of a 2-form on a 3-chart: v^i = eps^{ijk} beta_jk / 2.
inline std::array<double, 3> kernel3(const Form<3, double>& b) {
  return {b[0b110], -b[0b101], b[0b011]};
}

struct CurveSample {
  double x, y, phi;
};

/// Integrates the null foliation of omega2 restricted to the fold, as an
/// ODE in the fibre angle, starting on y = c1 cos(phi), x = c1 sin(phi) + c2.
inline std::vector<CurveSample> geodesic_flow(double c1, double c2, double phi0, double phi1, int steps = 2000) {
  const double half = std::numbers::pi / 2;
  if (!(c1 > 0.0)) throw std::invalid_argument("geodesic_flow: c1 must be > 0");
  if (!(phi0 > -half && phi0 < half && phi1 > -half && phi1 < half))
    throw std::invalid_argument("geodesic_flow: phi range must lie in (-pi/2, pi/2)");
  auto rhs = [](double phi, const std::array<double, 2>& s) -> std::array<double, 2> {
    if (!(s[1] > 1e-12)) throw ConvergenceError("geodesic_flow: y -> 0, step failed");
    const std::array<double, 3> v = kernel3(fold_data(s[0], s[1], phi).omega2);
    if (std::abs(v[2]) < 1e-14 * (std::abs(v[0]) + std::abs(v[1])))
      throw ConvergenceError("geodesic_flow: kernel tangent to the fibre, step failed");
    return {v[0] / v[2], v[1] / v[2]};
  };
  std::vector<CurveSample> out;
  std::array<double, 2> s{c1 * std::sin(phi0) + c2, c1 * std::cos(phi0)};
  const double h = (phi1 - phi0) / steps;
  out.push_back({s[0], s[1], phi0});
  for (int i = 0; i < steps; ++i) {
    const double phi = phi0 + i * h;
    s = rk4_step<2>(rhs, phi, s, h);
    out.push_back({s[0], s[1], phi + h});
  }
  return out;
}

}  // namespace hkfold::canonical
