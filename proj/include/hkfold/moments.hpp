#pragma once

// Fibre integrals: pairings of the triple with the sphere fibre, the
// invariants alpha_m of a quadratic differential, and the moment variation
// of a deformation.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "hkfold/canonical.hpp"
#include "hkfold/errors.hpp"
#include "hkfold/forms.hpp"
#include "hkfold/quadrature.hpp"

namespace hkfold::moments {

enum class Measure {
  Half,  ///< r dr dtheta / (2 sqrt(1 - r^2)), integrates 1 to pi
  Area,  ///< r dr dtheta / sqrt(1 - r^2), the hemisphere area form
};

/// Product rule on the unit disc for the weight r/sqrt(1 - r^2): r = sin s
/// with Gauss-Legendre in s, trapezoid in theta.
class FibreQuadrature {
 public:
  FibreQuadrature(int radial, int angular, Measure m = Measure::Half)
      : rule_(gauss_legendre(radial, 0.0, std::numbers::pi / 2)), angular_(angular), measure_(m) {
    if (angular < 1) throw std::invalid_argument("FibreQuadrature: angular size must be >= 1");
  }

  int radial() const { return static_cast<int>(rule_.nodes.size()); }
  int angular() const { return angular_; }

  /// Integral of f(r, theta) against the measure.
  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0, 0.0));
    R sum = R(0.0);
    const double dth = 2.0 * std::numbers::pi / angular_;
    const double scale = measure_ == Measure::Half ? 0.5 : 1.0;
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
      const double s = rule_.nodes[i];
      const double w = rule_.weights[i] * std::sin(s) * scale * dth;  // r dr / sqrt(1-r^2) = sin s ds
      const double r = std::sin(s);
      for (int j = 0; j < angular_; ++j) sum += w * f(r, j * dth);
    }
    return sum;
  }

 private:
  Rule rule_;
  int angular_;
  Measure measure_;
};

/// Repeats a quadrature with doubled sizes until two successive results
/// agree to tol.
template <class Eval>
auto converge(Eval&& eval, double tol, int n0, int nmax, const char* what) {
  auto prev = eval(n0);
  std::vector<double> history;
  for (int n = 2 * n0; n <= nmax; n *= 2) {
    const auto cur = eval(n);
    const double diff = std::abs(cur - prev);
    history.push_back(diff);
    if (diff < tol) return cur;
    prev = cur;
  }
  throw ConvergenceError(std::string(what) + ": quadrature did not converge", history);
}

// ---- topological pairings ----

struct Pairings {
  double omega1 = 0, omega2 = 0, omega3 = 0;
  double upper_disc = 0, lower_disc = 0;  ///< omega1 over x3 > 0 and x3 < 0
};

namespace detail {

struct FibreInclusion {
  double x, y;
  template <class T>
  std::array<T, 4> operator()(const std::array<T, 2>& s) const {
    return {T(x), T(y), s[1], s[0]};
  }
};

/// Integral of a restricted 2-form over psi in [0, 2pi), x3 in (a, b),
/// oriented by (psi, x3).
template <class Field>
double fibre_integral(const Field& field, double x, double y, double a, double b, int n) {
  const Rule q = gauss_legendre(n, a, b);
  const int na = 2 * n;
  const double dpsi = 2.0 * std::numbers::pi / na;
  double sum = 0.0;
  for (int j = 0; j < na; ++j)
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const auto w = restrict_form<2, 4>(field, FibreInclusion{x, y}, Point<2>{j * dpsi, q.nodes[i]});
      sum += q.weights[i] * dpsi * w[0b11].value;
    }
  return sum;
}

}  // namespace detail

/// Integrals of the canonical triple over the sphere fibre above (x, y).
inline Pairings fibre_pairings(double x, double y, double tol = 1e-10, int nmax = 256) {
  if (!(y > 0.0)) throw DomainError("fibre_pairings: y <= 0");
  const canonical::EquatorOmega1 w1;
  auto re = [](const auto& c) { return canonical::EquatorOmegaC{}(c).re; };
  auto im = [](const auto& c) { return canonical::EquatorOmegaC{}(c).im; };
  Pairings p;
  auto disc = [&](const auto& f, double a, double b) {
    return converge([&](int n) { return detail::fibre_integral(f, x, y, a, b, n); }, tol, 8, nmax, "fibre_pairings");
  };
  p.upper_disc = disc(w1, 0.0, 1.0);
  p.lower_disc = disc(w1, -1.0, 0.0);
  p.omega1 = p.upper_disc + p.lower_disc;
  p.omega2 = disc(re, -1.0, 1.0);
  p.omega3 = disc(im, -1.0, 1.0);
  return p;
}

// ---- alpha_m ----

/// The fibre integral 2 int 2^{-m} (sqrt(k) r e^{-i theta} + a r e^{i theta}/sqrt(k))^m dmu
/// with dmu the chosen measure.
inline std::complex<double> alpha_m(double k, std::complex<double> a, int m, Measure measure = Measure::Half,
                                    double tol = 1e-13) {
  if (m < 0) throw std::invalid_argument("alpha_m: m must be >= 0");
  if (!(k > std::abs(a))) throw DegeneracyError("alpha_m: k <= |a|");
  const double sk = std::sqrt(k);
  auto f = [&](double r, double th) {
    const std::complex<double> e = std::polar(1.0, th);
    return std::pow(0.5 * (sk * r * std::conj(e) + a * r * e / sk), m);
  };
  // The angular sum is exact once it has more than m points.
  auto eval = [&](int n) { return 2.0 * FibreQuadrature(n, 2 * m + 4, measure).integrate(f); };
  return converge(eval, tol * (1.0 + std::pow(std::abs(a), m / 2)), 8, 512, "alpha_m");
}

/// 2 pi a^l/(2l + 1) for m = 2l, 0 for odd m: the integral with the Half
/// measure in closed form.
inline std::complex<double> alpha_exact(std::complex<double> a, int m) {
  if (m % 2) return 0.0;
  const int l = m / 2;
  return 2.0 * std::numbers::pi * std::pow(a, l) / (2.0 * l + 1.0);
}

/// (pi C(2l, l)/4^l)^2 a^l, the conjectured closed form for the invariants.
inline std::complex<double> alpha_closed_form(std::complex<double> a, int m) {
  if (m % 2) return 0.0;
  const int l = m / 2;
  double c = std::numbers::pi;
  for (int i = 1; i <= l; ++i) c *= (l + i) / (4.0 * i);
  return c * c * std::pow(a, l);
}

struct HolomorphyProbe {
  double max_defect = 0;          ///< max |d alpha_m / d zbar| with step h
  double max_defect_refined = 0;  ///< same with step h/2
  bool resolved = true;           ///< refinement changed the result by <= 10%
};

/// Central-difference d/dzbar = (d_x + i d_y)/2 of alpha_m over base points.
/// Differences below floor are treated as resolved noise.
template <class KField, class AField>
HolomorphyProbe alpha_holomorphy_probe(const KField& k, const AField& a, int m,
                                       const std::vector<std::complex<double>>& points, double h = 1e-3,
                                       double floor = 1e-9) {
  auto alpha = [&](std::complex<double> z) { return alpha_m(k(z), a(z), m); };
  auto dzbar = [&](std::complex<double> z, double s) {
    const std::complex<double> dx = (alpha(z + s) - alpha(z - s)) / (2.0 * s);
    const std::complex<double> dy =
        (alpha(z + std::complex<double>(0, s)) - alpha(z - std::complex<double>(0, s))) / (2.0 * s);
    return std::abs(0.5 * (dx + std::complex<double>(0, 1) * dy));
  };
  HolomorphyProbe p;
  for (const auto& z : points) {
    const double d1 = dzbar(z, h), d2 = dzbar(z, h / 2);
    p.max_defect = std::max(p.max_defect, d1);
    p.max_defect_refined = std::max(p.max_defect_refined, d2);
    if (std::abs(d1 - d2) > 0.1 * std::max({d1, d2, floor})) p.resolved = false;
  }
  return p;
}

// ---- moment variation ----

/// int kp w^{kp-1} a wbar^{m-1} y^{2m-2} y^2 du1 du2 / sqrt(1 - y^2|w|^2) over
/// the fibre disc y^2|w|^2 < 1.
inline std::complex<double> moment_variation(int kp, int m, std::complex<double> a, double y, double tol = 1e-12) {
  if (kp < 1 || m < 1) throw std::invalid_argument("moment_variation: need k >= 1 and m >= 1");
  if (!(y > 0.0)) throw DomainError("moment_variation: y <= 0");
  // w = r e^{i theta}/y turns y^2 du1 du2/sqrt(1 - y^2|w|^2) into the area measure.
  auto f = [&](double r, double th) {
    const std::complex<double> w = std::polar(r / y, th);
    return double(kp) * std::pow(w, kp - 1) * a * std::pow(std::conj(w), m - 1) * std::pow(y, 2 * m - 2);
  };
  auto eval = [&](int n) { return FibreQuadrature(n, 2 * (kp + m) + 4, Measure::Area).integrate(f); };
  return converge(eval, tol * (1.0 + std::abs(a)), 8, 512, "moment_variation");
}

/// pi a 4^k (k!)^2/(2k)!, nonzero only on the diagonal k = m.
inline std::complex<double> moment_variation_exact(int kp, int m, std::complex<double> a) {
  if (kp != m) return 0.0;
  double c = std::numbers::pi;
  for (int i = 1; i <= kp; ++i) c *= 4.0 * i / (kp + i);
  return c * a;
}

}  // namespace hkfold::moments
