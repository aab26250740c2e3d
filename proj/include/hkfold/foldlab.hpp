#pragma once

// Fold exemplars: the jump-model forms on (b, c0, c1, c2), the eta-family
// kernel on the canonical fold, and Gibbons-Hawking triples whose fold is
// the zero set of the harmonic potential.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "hkfold/canonical.hpp"
#include "hkfold/errors.hpp"
#include "hkfold/forms.hpp"

namespace hkfold::foldlab {

/// The kernel of a 2-form is not a single line.
class RankAmbiguityError : public DegeneracyError {
 public:
  using DegeneracyError::DegeneracyError;
};

// ---- jump model ----

struct JumpModel {
  double t = 0.0;

  using F = Form<4, double>;  // chart (b, c0, c1, c2)

  /// zeta^0: db^dc0, identified with omega2 + i omega3.
  CForm<4, double> coefficient0() const { return {F::monomial(1.0, {0, 1}), F(2)}; }
  /// zeta^1: db^dc1 + t dc0^dc2, identified with 2 omega1.
  CForm<4, double> coefficient1() const { return {F::monomial(1.0, {0, 2}) + F::monomial(t, {1, 3}), F(2)}; }
  /// zeta^2: (db + t dc1)^dc2, identified with -(omega2 - i omega3).
  CForm<4, double> coefficient2() const { return {F::monomial(1.0, {0, 3}) + F::monomial(t, {2, 3}), F(2)}; }

  CForm<4, double> omega_zeta(std::complex<double> zeta) const {
    const Complex<double> z(zeta.real(), zeta.imag());
    return coefficient0() + z * coefficient1() + (z * z) * coefficient2();
  }

  /// (omega2 + i omega3)^(omega2 - i omega3), the top coefficient; equals
  /// 2 omega2^2 when omega2^2 = omega3^2 and omega2^omega3 = 0.
  std::complex<double> square() const {
    const CForm<4, double> p = wedge(coefficient0(), Complex<double>(-1.0) * coefficient2());
    return {p.re.top(), p.im.top()};
  }
};

/// Least-squares slope of square() in t over the given samples.
inline double jump_slope(const std::vector<double>& ts) {
  if (ts.size() < 2) throw std::invalid_argument("jump_slope: need at least two t values");
  double st = 0, ss = 0, stt = 0, sts = 0;
  for (double t : ts) {
    const double s = JumpModel{t}.square().real();
    st += t;
    ss += s;
    stt += t * t;
    sts += t * s;
  }
  const double n = static_cast<double>(ts.size());
  return (n * sts - st * ss) / (n * stt - st * st);
}

/// max over the three coefficients of |coefficient ^ db|.
inline double divisibility_defect(const JumpModel& m) {
  const CForm<4, double> db{Form<4, double>::basis(0), Form<4, double>(1)};
  double r = 0.0;
  for (const auto& c : {m.coefficient0(), m.coefficient1(), m.coefficient2()}) r = std::max(r, max_abs(wedge(c, db)));
  return r;
}

// ---- eta kernel ----

struct EtaKernel {
  Eigen::Vector3cd direction;  ///< unit kernel vector in (x, y, psi)
  Eigen::Vector3d singular_values;
};

/// eta(zeta) = (eta1 + i eta2) - zeta^2 (eta1 - i eta2).
inline CForm<3, double> eta_form(const canonical::FoldData& f, std::complex<double> zeta) {
  const Complex<double> z2(std::real(zeta * zeta), std::imag(zeta * zeta));
  const CForm<3, double> plus{f.eta1, f.eta2}, minus{f.eta1, -f.eta2};
  return plus - z2 * minus;
}

/// Kernel line of eta(zeta) ^ phi on the complexified tangent space.
inline EtaKernel eta_kernel(const canonical::FoldData& f, std::complex<double> zeta, double gap = 1e-8) {
  if (std::abs(f.volume) < 1e-14) throw DegeneracyError("eta_kernel: eta1 ^ eta2 ^ phi vanishes");
  const CForm<3, double> phi{f.phi, Form<3, double>(1)};
  const CForm<3, double> beta = wedge(eta_form(f, zeta), phi);
  Eigen::Matrix3cd B = Eigen::Matrix3cd::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const unsigned m = (1u << i) | (1u << j);
      B(i, j) = {beta.re[m], beta.im[m]};
      B(j, i) = -B(i, j);
    }
  const Eigen::JacobiSVD<Eigen::Matrix3cd> svd(B, Eigen::ComputeFullV);
  EtaKernel k;
  k.singular_values = svd.singularValues();
  const double s0 = k.singular_values[0];
  if (!(s0 > 0.0)) throw RankAmbiguityError("eta_kernel: eta ^ phi vanishes");
  if (k.singular_values[1] < gap * s0 || k.singular_values[2] > gap * s0)
    throw RankAmbiguityError("eta_kernel: kernel dimension is not 1");
  k.direction = svd.matrixV().col(2);
  return k;
}

/// |<a, b>| / (|a| |b|): 1 exactly when the complex lines agree.
inline double line_alignment(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

// ---- Gibbons-Hawking ----

/// Point charges on the x3-axis; the connection uses the global axial angle.
struct GibbonsHawkingData {
  std::vector<double> z;  ///< centre heights
  std::vector<double> q;  ///< charges
  double axis_tol = 1e-6;

  GibbonsHawkingData(std::vector<double> z_, std::vector<double> q_) : z(std::move(z_)), q(std::move(q_)) {
    if (z.size() != q.size() || z.empty()) throw std::invalid_argument("GibbonsHawkingData: need matching centres");
  }

  /// Scale for the axis-proximity test: the centre spread, at least 1.
  double scale() const {
    double lo = z[0], hi = z[0];
    for (double v : z) lo = std::min(lo, v), hi = std::max(hi, v);
    return std::max(1.0, hi - lo);
  }

  template <class T>
  T potential(const std::array<T, 4>& c) const {
    T v(0.0);
    for (std::size_t i = 0; i < z.size(); ++i) {
      const T d3 = c[2] - z[i];
      const T r2 = c[0] * c[0] + c[1] * c[1] + d3 * d3;
      if (value_of(r2) == 0.0) throw DomainError("Gibbons-Hawking: evaluation at a centre");
      v = v + q[i] / sqrt(r2);
    }
    return v;
  }

  /// sum q_i cos(theta_i) dphi, skipping charge `skip` (for controls).
  template <class T>
  Form<4, T> connection(const std::array<T, 4>& c, int skip = -1) const {
    const T rho2 = c[0] * c[0] + c[1] * c[1];
    if (std::sqrt(value_of(rho2)) < axis_tol * scale())
      throw DomainError("Gibbons-Hawking: point within axis tolerance of the x3-axis");
    T s(0.0);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (static_cast<int>(i) == skip) continue;
      const T d3 = c[2] - z[i];
      s = s + q[i] * d3 / sqrt(rho2 + d3 * d3);
    }
    // dphi = (x1 dx2 - x2 dx1)/rho^2
    Form<4, T> a(1);
    a[1u << 0] = -(s * c[1] / rho2);
    a[1u << 1] = s * c[0] / rho2;
    return a;
  }

  /// omega_i = dx_i ^ (dtau + alpha) + V dx_j ^ dx_k on (x1, x2, x3, tau);
  /// closed because dV = *d alpha.
  template <class T>
  std::array<Form<4, T>, 3> triple(const std::array<T, 4>& c, int skip = -1) const {
    const T V = potential(c);
    const Form<4, T> theta = Form<4, T>::basis(3) + connection(c, skip);
    std::array<Form<4, T>, 3> w;
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      w[i] = wedge(Form<4, T>::basis(i), theta) + Form<4, T>::monomial(V, {j, k});
    }
    return w;
  }
};

/// Coefficient against dx1 ^ dx2 ^ dx3 ^ dtau.
inline double volume_coefficient(const Form<4, double>& top) { return top.top(); }

struct GhForms {
  std::array<Form<4, double>, 3> omega;
  double V = 0.0;
  double identity_residual = 0.0;  ///< max |omega_i ^ omega_j - 2 V delta_ij vol|, vol = dx1 dx2 dx3 dtau
  double closedness = 0.0;         ///< max |d omega_i|
};

inline GhForms gh_forms(const GibbonsHawkingData& g, const Point<4>& p) {
  const auto c = variables<4>(p);
  const auto wj = g.triple(c);
  GhForms r;
  r.V = g.potential(p);
  for (int i = 0; i < 3; ++i) {
    r.omega[i] = value(wj[i]);
    r.closedness = std::max(r.closedness, max_abs(value(d(wj[i]))));
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double expect = i == j ? 2.0 * r.V : 0.0;
      r.identity_residual = std::max(r.identity_residual, std::abs(volume_coefficient(wedge(r.omega[i], r.omega[j])) - expect));
    }
  return r;
}

/// max_i |d_i V - (d alpha)_{jk}|, the flat-space monopole equation dV = *d alpha.
inline double gh_monopole_check(const GibbonsHawkingData& g, const Point<4>& p, int skip = -1) {
  const auto c = variables<4>(p);
  const Jet<4> V = g.potential(c);
  const Form<4, double> da = value(d(g.connection(c, skip)));
  double r = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    r = std::max(r, std::abs(V.grad[i] - da.at({j, k})));
  }
  return r;
}

struct LineSample {
  double s, V, omega1_sq;
};

/// V and omega1^2 against dx1 dx2 dx3 dtau at n points on the segment p0 -> p1.
inline std::vector<LineSample> gh_line(const GibbonsHawkingData& g, const Point<4>& p0, const Point<4>& p1, int n) {
  if (n < 2) throw std::invalid_argument("gh_line: need n >= 2");
  std::vector<LineSample> out;
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / (n - 1);
    Point<4> p;
    for (int k = 0; k < 4; ++k) p[k] = p0[k] + s * (p1[k] - p0[k]);
    const auto w = g.triple(p);
    out.push_back({s, g.potential(p), volume_coefficient(wedge(w[0], w[0]))});
  }
  return out;
}

}  // namespace hkfold::foldlab
